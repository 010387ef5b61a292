#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Multimode Gaussian states and their evolution under linear (symplectic +
// displacement) mode transformations, in the quadrature representation.
//
// Conventions: hbar = 1, a = (x + ip)/sqrt(2), vacuum quadrature variance
// 1/2, quadratures interleaved per mode as (x1, p1, x2, p2, ...).

namespace cvclone {

inline constexpr double vacuum_variance = 0.5;

// Max-abs tolerances for structural checks; all arithmetic here is small
// dense double-precision linear algebra with per-operation error O(1e-14).
inline constexpr double symmetry_tol = 1e-10;
inline constexpr double symplectic_tol = 1e-10;
inline constexpr double unitary_tol = 1e-10;

// Symplectic form: block-diagonal copies of [[0, 1], [-1, 0]].
inline Eigen::MatrixXd omega_matrix(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

// Omega * m without forming Omega: swaps each (x, p) row pair with a sign.
inline Eigen::MatrixXd omega_times(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index k = 0; 2 * k < m.rows(); ++k) {
        out.row(2 * k) = m.row(2 * k + 1);
        out.row(2 * k + 1) = -m.row(2 * k);
    }
    return out;
}

// max |S Omega S^T - Omega|
inline double symplectic_defect(const Eigen::MatrixXd& s) {
    const int n = static_cast<int>(s.rows()) / 2;
    Eigen::MatrixXd sos = s * omega_times(s.transpose());
    return (sos - omega_matrix(n)).cwiseAbs().maxCoeff();
}

// A Gaussian state of n modes: mean vector of length 2n and symmetric
// 2n x 2n covariance matrix. Instances are immutable after construction
// and safe to share between threads.
class GaussianState {
public:
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
        : mean_(std::move(mean)), cov_(std::move(cov)) {
        const Eigen::Index dim = mean_.size();
        if (dim < 2 || dim % 2 != 0)
            throw std::invalid_argument("GaussianState: mean length must be a positive multiple of 2");
        if (cov_.rows() != dim || cov_.cols() != dim)
            throw std::invalid_argument("GaussianState: covariance shape does not match mean length");
        const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
        if (asym > symmetry_tol)
            throw std::invalid_argument("GaussianState: covariance asymmetry " + std::to_string(asym) +
                                        " exceeds tolerance");
        cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
    }

    int n_modes() const { return static_cast<int>(mean_.size()) / 2; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cov() const { return cov_; }

    Eigen::Vector2d mode_mean(int mode) const {
        check_mode(mode);
        return mean_.segment<2>(2 * mode);
    }

    Eigen::Matrix2d mode_cov(int mode) const {
        check_mode(mode);
        return cov_.block<2, 2>(2 * mode, 2 * mode);
    }

private:
    void check_mode(int mode) const {
        if (mode < 0 || mode >= n_modes())
            throw std::out_of_range("GaussianState: mode index " + std::to_string(mode) + " out of range");
    }

    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

// A linear mode transformation x -> S x + d with S symplectic
// (S Omega S^T = Omega); the Heisenberg-picture form of any Gaussian
// unitary. Symplecticity is enforced at construction.
class SymplecticTransform {
public:
    SymplecticTransform(Eigen::MatrixXd s, Eigen::VectorXd d) : s_(std::move(s)), d_(std::move(d)) {
        const Eigen::Index dim = s_.rows();
        if (dim < 2 || dim % 2 != 0 || s_.cols() != dim)
            throw std::invalid_argument("SymplecticTransform: matrix must be square of even dimension");
        if (d_.size() != dim)
            throw std::invalid_argument("SymplecticTransform: displacement length does not match matrix");
        const double defect = symplectic_defect(s_);
        if (defect > symplectic_tol)
            throw std::invalid_argument("SymplecticTransform: rejected, symplectic defect " +
                                        std::to_string(defect) + " exceeds tolerance");
    }

    explicit SymplecticTransform(Eigen::MatrixXd s)
        : SymplecticTransform(std::move(s), Eigen::VectorXd::Zero(s.rows())) {}

    static SymplecticTransform identity(int n_modes) {
        return SymplecticTransform(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    int n_modes() const { return static_cast<int>(s_.rows()) / 2; }
    const Eigen::MatrixXd& matrix() const { return s_; }
    const Eigen::VectorXd& displacement() const { return d_; }

private:
    Eigen::MatrixXd s_;
    Eigen::VectorXd d_;
};

// An m x m unitary acting on annihilation operators, a_k' = sum_l U_kl a_l.
// Carrier for passive multiport devices such as the DFT.
class ComplexModeUnitary {
public:
    explicit ComplexModeUnitary(Eigen::MatrixXcd u) : u_(std::move(u)) {
        if (u_.rows() < 1 || u_.cols() != u_.rows())
            throw std::invalid_argument("ComplexModeUnitary: matrix must be square and non-empty");
        const double defect =
            (u_.adjoint() * u_ - Eigen::MatrixXcd::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff();
        if (defect > unitary_tol)
            throw std::invalid_argument("ComplexModeUnitary: rejected, unitarity defect " +
                                        std::to_string(defect) + " exceeds tolerance");
    }

    int n_modes() const { return static_cast<int>(u_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return u_; }

private:
    Eigen::MatrixXcd u_;
};

inline GaussianState vacuum_state(int n) {
    if (n < 1) throw std::invalid_argument("vacuum_state: need at least one mode");
    return GaussianState(Eigen::VectorXd::Zero(2 * n),
                         vacuum_variance * Eigen::MatrixXd::Identity(2 * n, 2 * n));
}

// Coherent state |alpha>. With a = (x + ip)/sqrt(2) the mean quadratures
// are (sqrt(2) Re alpha, sqrt(2) Im alpha).
inline GaussianState coherent_state(std::complex<double> alpha) {
    Eigen::Vector2d mean(std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag());
    return GaussianState(mean, vacuum_variance * Eigen::Matrix2d::Identity());
}

// Single-mode squeezed vacuum: cov = diag(e^{-2r}/2, e^{+2r}/2).
inline GaussianState squeezed_vacuum(double r) {
    Eigen::Matrix2d cov;
    cov << std::exp(-2.0 * r) * vacuum_variance, 0.0, 0.0, std::exp(2.0 * r) * vacuum_variance;
    return GaussianState(Eigen::Vector2d::Zero(), cov);
}

// Displaced squeezed state: coherent mean, squeezed covariance.
inline GaussianState squeezed_coherent(std::complex<double> alpha, double r) {
    Eigen::Vector2d mean(std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag());
    Eigen::Matrix2d cov;
    cov << std::exp(-2.0 * r) * vacuum_variance, 0.0, 0.0, std::exp(2.0 * r) * vacuum_variance;
    return GaussianState(mean, cov);
}

inline GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const Eigen::Index na = a.mean().size(), nb = b.mean().size();
    Eigen::VectorXd mean(na + nb);
    mean << a.mean(), b.mean();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    return GaussianState(std::move(mean), std::move(cov));
}

// Heisenberg action on the state: mean -> S mean + d, cov -> S cov S^T.
inline GaussianState apply(const GaussianState& state, const SymplecticTransform& t) {
    if (t.n_modes() != state.n_modes())
        throw std::invalid_argument("apply: transform acts on " + std::to_string(t.n_modes()) +
                                    " modes but state has " + std::to_string(state.n_modes()));
    return GaussianState(t.matrix() * state.mean() + t.displacement(),
                         t.matrix() * state.cov() * t.matrix().transpose());
}

// t2 after t1.
inline SymplecticTransform compose(const SymplecticTransform& t2, const SymplecticTransform& t1) {
    if (t2.n_modes() != t1.n_modes())
        throw std::invalid_argument("compose: mode counts differ");
    return SymplecticTransform(t2.matrix() * t1.matrix(),
                               t2.matrix() * t1.displacement() + t2.displacement());
}

// Embeds a transform on |modes| modes into an n_modes space, acting as the
// identity elsewhere. modes[i] names the global slot of local mode i.
inline SymplecticTransform embed(const SymplecticTransform& t, int n_modes, std::span<const int> modes) {
    if (static_cast<int>(modes.size()) != t.n_modes())
        throw std::invalid_argument("embed: mode list length does not match transform");
    std::vector<bool> seen(n_modes, false);
    for (int m : modes) {
        if (m < 0 || m >= n_modes) throw std::out_of_range("embed: mode index out of range");
        if (seen[m]) throw std::invalid_argument("embed: duplicate mode index");
        seen[m] = true;
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n_modes);
    for (size_t i = 0; i < modes.size(); ++i) {
        for (size_t j = 0; j < modes.size(); ++j)
            s.block<2, 2>(2 * modes[i], 2 * modes[j]) = t.matrix().block<2, 2>(2 * i, 2 * j);
        d.segment<2>(2 * modes[i]) = t.displacement().segment<2>(2 * i);
    }
    return SymplecticTransform(std::move(s), std::move(d));
}

// Marginal state of the listed modes, in the listed order.
inline GaussianState reduced_state(const GaussianState& state, std::span<const int> modes) {
    if (modes.empty()) throw std::invalid_argument("reduced_state: empty mode list");
    std::vector<bool> seen(state.n_modes(), false);
    for (int m : modes) {
        if (m < 0 || m >= state.n_modes())
            throw std::out_of_range("reduced_state: mode index " + std::to_string(m) + " out of range");
        if (seen[m]) throw std::invalid_argument("reduced_state: duplicate mode index");
        seen[m] = true;
    }
    const auto k = static_cast<Eigen::Index>(modes.size());
    Eigen::VectorXd mean(2 * k);
    Eigen::MatrixXd cov(2 * k, 2 * k);
    for (Eigen::Index i = 0; i < k; ++i) {
        mean.segment<2>(2 * i) = state.mean().segment<2>(2 * modes[i]);
        for (Eigen::Index j = 0; j < k; ++j)
            cov.block<2, 2>(2 * i, 2 * j) = state.cov().block<2, 2>(2 * modes[i], 2 * modes[j]);
    }
    return GaussianState(std::move(mean), std::move(cov));
}

inline GaussianState reduced_state(const GaussianState& state, std::initializer_list<int> modes) {
    return reduced_state(state, std::span<const int>(modes.begin(), modes.size()));
}

// Variance of the rotated quadrature cos(phi) x + sin(phi) p of one mode.
inline double quadrature_variance(const GaussianState& state, int mode, double phi) {
    Eigen::Vector2d u(std::cos(phi), std::sin(phi));
    return u.dot(state.mode_cov(mode) * u);
}

// Symplectic spectrum: the n values nu_k >= 0 such that iOmega cov has
// eigenvalues {+-nu_k}; the uncertainty relation is nu_k >= 1/2.
inline std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
    Eigen::MatrixXd m = omega_times(state.cov());
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    std::vector<double> mags(static_cast<size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) mags[static_cast<size_t>(i)] = std::abs(solver.eigenvalues()(i));
    std::sort(mags.begin(), mags.end());
    std::vector<double> out;
    out.reserve(mags.size() / 2);
    for (size_t i = 0; i < mags.size(); i += 2) out.push_back((mags[i] + mags[i + 1]) / 2.0);
    return out;
}

inline bool satisfies_uncertainty(const GaussianState& state, double slack = 1e-9) {
    const auto nus = symplectic_eigenvalues(state);
    return std::all_of(nus.begin(), nus.end(), [&](double nu) { return nu >= 0.5 - slack; });
}

// 1/sqrt(det(2 cov)); equals 1 for pure states and is invariant under apply().
inline double purity(const GaussianState& state) {
    return 1.0 / std::sqrt((2.0 * state.cov()).determinant());
}

// Overlap <psi|rho|psi> of a single-mode Gaussian state with a pure
// single-mode Gaussian target:
//   F = exp(-1/2 delta^T (V + Vt)^{-1} delta) / sqrt(det(V + Vt)).
inline double fidelity_vs_pure(const GaussianState& state, const GaussianState& target) {
    if (state.n_modes() != 1 || target.n_modes() != 1)
        throw std::invalid_argument("fidelity_vs_pure: both states must be single-mode");
    const Eigen::Matrix2d vt = target.cov();
    if (std::abs(4.0 * vt.determinant() - 1.0) > 1e-9)
        throw std::invalid_argument("fidelity_vs_pure: target state is not pure");
    const Eigen::Matrix2d vsum = state.cov() + vt;
    const Eigen::Vector2d delta = state.mean() - target.mean();
    const double f = std::exp(-0.5 * delta.dot(vsum.inverse() * delta)) / std::sqrt(vsum.determinant());
    return std::min(f, 1.0);
}

inline double fidelity_vs_coherent(const GaussianState& state, std::complex<double> alpha) {
    return fidelity_vs_pure(state, coherent_state(alpha));
}

// Minimum added noise per quadrature of symmetric N -> M coherent-state
// cloning: (2/N - 2/M) * vacuum_variance.
inline double optimal_added_variance(int n_in, int m_out) {
    if (n_in < 1 || m_out < n_in)
        throw std::invalid_argument("optimal_added_variance: need M >= N >= 1");
    return (2.0 / n_in - 2.0 / m_out) * vacuum_variance;
}

// Maximum symmetric N -> M cloning fidelity for coherent states:
// F = MN / (MN + M - N).
inline double optimal_fidelity(int n_in, int m_out) {
    if (n_in < 1 || m_out < n_in)
        throw std::invalid_argument("optimal_fidelity: need M >= N >= 1");
    const double mn = static_cast<double>(m_out) * static_cast<double>(n_in);
    return mn / (mn + m_out - n_in);
}

}  // namespace cvclone
