#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cvclone/gaussian.hpp"

// Constructors for the circuit elements used by the cloning networks:
// phase-free beam splitters, M-splitter cascades and their inverses, the
// DFT multiport, and the ideal phase-insensitive amplifier.

namespace cvclone {

struct BeamSplitterSpec {
    int k = 0;
    int l = 0;
    double theta = 0.0;  // stored as given, no normalization
    friend bool operator==(const BeamSplitterSpec&, const BeamSplitterSpec&) = default;
};

struct AmplifierSpec {
    int signal = 0;
    int ancilla = 0;
    double gain = 1.0;  // power gain G >= 1
    friend bool operator==(const AmplifierSpec&, const AmplifierSpec&) = default;
};

namespace detail {

inline void check_mode_pair(int n_modes, int a, int b, const char* what) {
    if (a < 0 || a >= n_modes || b < 0 || b >= n_modes)
        throw std::out_of_range(std::string(what) + ": mode index out of range");
    if (a == b) throw std::invalid_argument(std::string(what) + ": mode indices must differ");
}

// Phase-free beam splitter on two modes, mode matrix
// [[sin t, cos t], [cos t, -sin t]] acting identically on x and p.
inline Eigen::Matrix4d beam_splitter_local(double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int q = 0; q < 2; ++q) {  // q = 0 for x, 1 for p
        m(0 + q, 0 + q) = s;
        m(0 + q, 2 + q) = c;
        m(2 + q, 0 + q) = c;
        m(2 + q, 2 + q) = -s;
    }
    return m;
}

// Phase-insensitive amplifier of power gain G coupling (signal, ancilla):
//   x_s' =  sqrt(G) x_s + sqrt(G-1) x_z     p_s' =  sqrt(G) p_s - sqrt(G-1) p_z
//   x_z' =  sqrt(G-1) x_s + sqrt(G) x_z     p_z' = -sqrt(G-1) p_s + sqrt(G) p_z
// The conjugation sits on the ancilla; with a vacuum ancilla the added
// noise per signal quadrature is (G-1)/2, the minimum permitted.
inline Eigen::Matrix4d amplifier_local(double gain) {
    const double g = std::sqrt(gain), h = std::sqrt(gain - 1.0);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = g;
    m(0, 2) = h;
    m(1, 1) = g;
    m(1, 3) = -h;
    m(2, 0) = h;
    m(2, 2) = g;
    m(3, 1) = -h;
    m(3, 3) = g;
    return m;
}

}  // namespace detail

inline SymplecticTransform beam_splitter(int n_modes, const BeamSplitterSpec& spec) {
    detail::check_mode_pair(n_modes, spec.k, spec.l, "beam_splitter");
    const std::vector<int> modes{spec.k, spec.l};
    return embed(SymplecticTransform(detail::beam_splitter_local(spec.theta)), n_modes, modes);
}

inline SymplecticTransform amplifier(int n_modes, const AmplifierSpec& spec) {
    if (spec.gain < 1.0)
        throw std::invalid_argument("amplifier: gain must be >= 1");
    detail::check_mode_pair(n_modes, spec.signal, spec.ancilla, "amplifier");
    const std::vector<int> modes{spec.signal, spec.ancilla};
    return embed(SymplecticTransform(detail::amplifier_local(spec.gain)), n_modes, modes);
}

// Rotation by phi in one mode's phase space (a -> e^{i phi} a). Auxiliary
// element, not used by the cloning circuits.
inline SymplecticTransform phase_shifter(int n_modes, int mode, double phi) {
    if (mode < 0 || mode >= n_modes) throw std::out_of_range("phase_shifter: mode index out of range");
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const double c = std::cos(phi), sn = std::sin(phi);
    s(2 * mode, 2 * mode) = c;
    s(2 * mode, 2 * mode + 1) = -sn;
    s(2 * mode + 1, 2 * mode) = sn;
    s(2 * mode + 1, 2 * mode + 1) = c;
    return SymplecticTransform(std::move(s));
}

// Beam splitter cascade distributing mode 0 equally over M modes, in
// application order:
//   B_{0,1}(asin 1/sqrt(M)), B_{1,2}(asin 1/sqrt(M-1)), ..., B_{M-2,M-1}(asin 1/sqrt(2)).
inline std::vector<BeamSplitterSpec> m_splitter_sequence(int m) {
    if (m < 1) throw std::invalid_argument("m_splitter_sequence: need M >= 1");
    std::vector<BeamSplitterSpec> seq;
    seq.reserve(static_cast<size_t>(m - 1));
    for (int j = 0; j + 1 < m; ++j)
        seq.push_back({j, j + 1, std::asin(1.0 / std::sqrt(static_cast<double>(m - j)))});
    return seq;
}

// Reversed cascade; each factor is symmetric, so this composes to the
// transpose (= inverse) of the M-splitter and concentrates M equal
// amplitudes into mode 0.
inline std::vector<BeamSplitterSpec> inverse_n_splitter_sequence(int n) {
    auto seq = m_splitter_sequence(n);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

// The M-splitter as a transform on M modes; column 0 of its mode matrix is
// uniformly 1/sqrt(M).
inline SymplecticTransform m_splitter(int m) {
    auto total = SymplecticTransform::identity(m);
    for (const auto& spec : m_splitter_sequence(m)) total = compose(beam_splitter(m, spec), total);
    return total;
}

inline SymplecticTransform inverse_n_splitter(int n) {
    return SymplecticTransform(m_splitter(n).matrix().transpose());
}

// DFT multiport, F_kl = exp(i k l 2 pi / m) / sqrt(m). Applied to M equal
// amplitudes it concentrates them into mode 0; applied to an excitation of
// mode 0 it distributes the amplitude equally.
inline ComplexModeUnitary dft(int m) {
    if (m < 1) throw std::invalid_argument("dft: need at least one mode");
    Eigen::MatrixXcd u(m, m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(l) /
                               static_cast<double>(m);
            u(k, l) = scale * std::complex<double>(std::cos(arg), std::sin(arg));
        }
    return ComplexModeUnitary(std::move(u));
}

// Quadrature form of a passive mode unitary U = A + iB:
//   x_k' = sum_l (A_kl x_l - B_kl p_l),  p_k' = sum_l (B_kl x_l + A_kl p_l).
// The result is both symplectic and orthogonal.
inline SymplecticTransform symplectic_from_unitary(const ComplexModeUnitary& u) {
    const int m = u.n_modes();
    Eigen::MatrixXd s(2 * m, 2 * m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            const double a = u.matrix()(k, l).real(), b = u.matrix()(k, l).imag();
            s(2 * k, 2 * l) = a;
            s(2 * k, 2 * l + 1) = -b;
            s(2 * k + 1, 2 * l) = b;
            s(2 * k + 1, 2 * l + 1) = a;
        }
    return SymplecticTransform(std::move(s));
}

}  // namespace cvclone
