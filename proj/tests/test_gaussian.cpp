#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "cvclone/gaussian.hpp"

using namespace cvclone;
using Catch::Matchers::WithinAbs;

namespace {

// Independent oracle for the Gaussian fidelity: numerical integration of
// the Wigner overlap <psi|rho|psi> = 2 pi * integral W_rho W_psi, on a
// midpoint grid wide enough that the truncation error is far below the
// comparison tolerance. Deliberately ignorant of the closed form.
double fidelity_by_quadrature(const GaussianState& state, const GaussianState& target) {
    const Eigen::Matrix2d v1i = state.cov().inverse();
    const Eigen::Matrix2d v2i = target.cov().inverse();
    const double norm1 = 1.0 / (2.0 * std::numbers::pi * std::sqrt(state.cov().determinant()));
    const double norm2 = 1.0 / (2.0 * std::numbers::pi * std::sqrt(target.cov().determinant()));
    const Eigen::Vector2d center = (state.mean() + target.mean()) / 2.0;
    const double spread = std::sqrt(std::max(state.cov().maxCoeff(), target.cov().maxCoeff()));
    const double half_width = 10.0 * spread + (state.mean() - target.mean()).norm();
    const int steps = 1600;
    const double h = 2.0 * half_width / steps;
    double sum = 0.0;
    for (int i = 0; i < steps; ++i)
        for (int j = 0; j < steps; ++j) {
            Eigen::Vector2d xi = center + Eigen::Vector2d((i + 0.5) * h - half_width,
                                                          (j + 0.5) * h - half_width);
            const Eigen::Vector2d d1 = xi - state.mean();
            const Eigen::Vector2d d2 = xi - target.mean();
            sum += std::exp(-0.5 * d1.dot(v1i * d1)) * std::exp(-0.5 * d2.dot(v2i * d2));
        }
    return 2.0 * std::numbers::pi * norm1 * norm2 * sum * h * h;
}

}  // namespace

TEST_CASE("vacuum state") {
    const GaussianState vac1 = vacuum_state(1);
    CHECK(vac1.n_modes() == 1);
    CHECK(vac1.mean().isZero(0.0));
    CHECK(vac1.cov().isApprox(0.5 * Eigen::Matrix2d::Identity(), 1e-15));

    const GaussianState vac3 = vacuum_state(3);
    CHECK(vac3.mean().size() == 6);
    CHECK(vac3.mean().isZero(0.0));
    CHECK(vac3.cov().isApprox(0.5 * Eigen::MatrixXd::Identity(6, 6), 1e-15));

    for (double nu : symplectic_eigenvalues(vacuum_state(2))) CHECK_THAT(nu, WithinAbs(0.5, 1e-12));

    CHECK_THROWS_AS(vacuum_state(0), std::invalid_argument);
}

TEST_CASE("coherent state mean convention") {
    CHECK(coherent_state({0.0, 0.0}).mean().isZero(0.0));
    CHECK(coherent_state({0.0, 0.0}).cov().isApprox(vacuum_state(1).cov(), 1e-15));

    const GaussianState one = coherent_state({1.0, 0.0});
    CHECK_THAT(one.mean()(0), WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK_THAT(one.mean()(1), WithinAbs(0.0, 1e-15));

    // round trip: <a> = (mean_x + i mean_p)/sqrt(2) recovers alpha
    const std::complex<double> alpha{1.0, 2.0};
    const GaussianState st = coherent_state(alpha);
    const std::complex<double> recovered{st.mean()(0) / std::sqrt(2.0), st.mean()(1) / std::sqrt(2.0)};
    CHECK(std::abs(recovered - alpha) < 1e-14);
}

TEST_CASE("squeezed vacuum") {
    CHECK(squeezed_vacuum(0.0).cov().isApprox(vacuum_state(1).cov(), 1e-15));

    const GaussianState sq = squeezed_vacuum(std::log(2.0));
    CHECK_THAT(sq.cov()(0, 0), WithinAbs(0.125, 1e-14));
    CHECK_THAT(sq.cov()(1, 1), WithinAbs(2.0, 1e-14));
    CHECK_THAT(sq.cov()(0, 0) * sq.cov()(1, 1), WithinAbs(0.25, 1e-14));

    for (double r : {-1.3, -0.4, 0.0, 0.7, 2.1}) {
        const auto nus = symplectic_eigenvalues(squeezed_vacuum(r));
        REQUIRE(nus.size() == 1);
        CHECK_THAT(nus[0], WithinAbs(0.5, 1e-10));
    }
}

TEST_CASE("tensor product") {
    CHECK(tensor(vacuum_state(1), vacuum_state(1)).cov().isApprox(vacuum_state(2).cov(), 1e-15));

    const std::complex<double> alpha{0.7, -1.1};
    const GaussianState two = tensor(coherent_state(alpha), vacuum_state(1));
    const GaussianState marginal = reduced_state(two, {0});
    CHECK(marginal.mean().isApprox(coherent_state(alpha).mean(), 1e-15));
    CHECK(marginal.cov().isApprox(coherent_state(alpha).cov(), 1e-15));

    const GaussianState mix = tensor(coherent_state({1.0, 0.0}), squeezed_vacuum(1.0));
    Eigen::Vector4d diag(0.5, 0.5, std::exp(-2.0) * 0.5, std::exp(2.0) * 0.5);
    CHECK(mix.cov().isApprox(Eigen::Matrix4d(diag.asDiagonal()), 1e-14));
    CHECK(mix.cov().block<2, 2>(0, 2).isZero(0.0));
}

TEST_CASE("apply: identity, dimension checks, rejection") {
    const GaussianState st = tensor(coherent_state({1.0, -0.5}), squeezed_vacuum(0.3));
    const GaussianState same = apply(st, SymplecticTransform::identity(2));
    CHECK(same.mean().isApprox(st.mean(), 1e-15));
    CHECK(same.cov().isApprox(st.cov(), 1e-15));

    CHECK_THROWS_AS(apply(st, SymplecticTransform::identity(3)), std::invalid_argument);

    // a non-symplectic matrix is rejected outright
    Eigen::Matrix2d bad;
    bad << 1.0, 0.0, 0.0, 2.0;
    CHECK_THROWS_AS(SymplecticTransform(bad), std::invalid_argument);
}

TEST_CASE("apply preserves purity and uncertainty") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 20; ++trial) {
        // random passive-ish symplectic: product of per-mode rotations and
        // a two-mode mixing rotation acting identically on x and p
        const int n = 3;
        Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n, 2 * n);
        for (int mode = 0; mode < n; ++mode) {
            const double t = angle(rng);
            s(2 * mode, 2 * mode) = std::cos(t);
            s(2 * mode, 2 * mode + 1) = -std::sin(t);
            s(2 * mode + 1, 2 * mode) = std::sin(t);
            s(2 * mode + 1, 2 * mode + 1) = std::cos(t);
        }
        const SymplecticTransform t(s);
        const GaussianState in =
            tensor(tensor(coherent_state({1.0, 2.0}), squeezed_vacuum(0.8)), vacuum_state(1));
        const GaussianState out = apply(in, t);
        CHECK_THAT(purity(out), WithinAbs(purity(in), 1e-9));
        CHECK(satisfies_uncertainty(out));
    }
}

TEST_CASE("reduced state") {
    const GaussianState st = tensor(coherent_state({2.0, 1.0}), squeezed_vacuum(0.5));
    const std::vector<int> all{0, 1};
    const GaussianState full = reduced_state(st, all);
    CHECK(full.mean().isApprox(st.mean(), 1e-15));
    CHECK(full.cov().isApprox(st.cov(), 1e-15));

    const GaussianState first = reduced_state(st, {0});
    CHECK(first.mean().isApprox(coherent_state({2.0, 1.0}).mean(), 1e-15));

    CHECK_THROWS_AS(reduced_state(st, {2}), std::out_of_range);
    CHECK_THROWS_AS(reduced_state(st, {0, 0}), std::invalid_argument);
}

TEST_CASE("quadrature variance") {
    for (double phi : {0.0, 0.71, 1.9, 3.0})
        CHECK_THAT(quadrature_variance(vacuum_state(1), 0, phi), WithinAbs(0.5, 1e-14));

    const double r = 0.6;
    CHECK_THAT(quadrature_variance(squeezed_vacuum(r), 0, 0.0), WithinAbs(std::exp(-2.0 * r) * 0.5, 1e-14));
    CHECK_THAT(quadrature_variance(squeezed_vacuum(r), 0, std::numbers::pi / 2),
               WithinAbs(std::exp(2.0 * r) * 0.5, 1e-14));
}

TEST_CASE("fidelity vs coherent: exact cases") {
    // F(coherent(alpha), alpha) = 1 on a 5x5 grid of amplitudes
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
            const std::complex<double> alpha(1.1 * i, 0.9 * j);
            CHECK_THAT(fidelity_vs_coherent(coherent_state(alpha), alpha), WithinAbs(1.0, 1e-12));
        }

    CHECK_THROWS_AS(fidelity_vs_coherent(vacuum_state(2), {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("fidelity matches the optimal-cloning value for isotropic noise") {
    // State with cov (s/2) I and the input's mean, s = 1 + 2/N - 2/M,
    // must give F = 2/(s+1) = MN/(MN + M - N).
    const std::complex<double> alpha{0.4, -1.7};
    for (auto [n, m] : {std::pair{1, 2}, {2, 3}, {3, 7}, {5, 5}, {1, 10}}) {
        const double s = 1.0 + 2.0 / n - 2.0 / m;
        const GaussianState clone(coherent_state(alpha).mean(),
                                  (s / 2.0) * Eigen::Matrix2d::Identity());
        const double expected = 2.0 / (s + 1.0);
        CHECK_THAT(fidelity_vs_coherent(clone, alpha), WithinAbs(expected, 1e-12));
        CHECK_THAT(expected, WithinAbs(optimal_fidelity(n, m), 1e-12));
    }
}

TEST_CASE("fidelity closed form agrees with Wigner-overlap quadrature") {
    const std::complex<double> alpha{0.1, 0.2};

    const GaussianState clone12(coherent_state({1.0, 0.0}).mean(), Eigen::Matrix2d::Identity());
    CHECK_THAT(fidelity_vs_coherent(clone12, {1.0, 0.0}),
               WithinAbs(fidelity_by_quadrature(clone12, coherent_state({1.0, 0.0})), 1e-6));

    const GaussianState displaced(Eigen::Vector2d(0.3, -0.4), 0.8 * Eigen::Matrix2d::Identity());
    CHECK_THAT(fidelity_vs_coherent(displaced, alpha),
               WithinAbs(fidelity_by_quadrature(displaced, coherent_state(alpha)), 1e-6));

    Eigen::Matrix2d anisotropic;
    anisotropic << 0.9, 0.2, 0.2, 0.7;
    const GaussianState tilted(Eigen::Vector2d(0.1, 0.5), anisotropic);
    CHECK_THAT(fidelity_vs_coherent(tilted, alpha),
               WithinAbs(fidelity_by_quadrature(tilted, coherent_state(alpha)), 1e-6));

    // squeezed pure target as well
    const GaussianState target = squeezed_coherent({0.5, 0.0}, 0.4);
    const GaussianState near(target.mean(), 1.7 * target.cov());
    CHECK_THAT(fidelity_vs_pure(near, target), WithinAbs(fidelity_by_quadrature(near, target), 1e-6));
}

TEST_CASE("fidelity rejects mixed targets") {
    const GaussianState mixed(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
    CHECK_THROWS_AS(fidelity_vs_pure(vacuum_state(1), mixed), std::invalid_argument);
}

TEST_CASE("optimal added variance formula") {
    CHECK_THAT(optimal_added_variance(1, 2), WithinAbs(0.5, 1e-15));
    CHECK_THAT(optimal_added_variance(4, 4), WithinAbs(0.0, 1e-15));
    CHECK_THAT(optimal_added_variance(2, 3), WithinAbs(1.0 / 6.0, 1e-15));
    CHECK_THROWS_AS(optimal_added_variance(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(optimal_added_variance(0, 2), std::invalid_argument);
}

TEST_CASE("optimal fidelity formula") {
    CHECK_THAT(optimal_fidelity(1, 2), WithinAbs(2.0 / 3.0, 1e-15));
    CHECK(optimal_fidelity(6, 6) == 1.0);
    // F_{1,M} = M/(2M - 1) tends to 1/2 from above
    CHECK(optimal_fidelity(1, 1000000) > 0.5);
    CHECK_THAT(optimal_fidelity(1, 1000000), WithinAbs(0.5, 1e-6));
    CHECK_THROWS_AS(optimal_fidelity(3, 2), std::invalid_argument);
}

TEST_CASE("state constructor enforces shape and symmetry") {
    CHECK_THROWS_AS(GaussianState(Eigen::Vector3d::Zero(), Eigen::Matrix3d::Identity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(GaussianState(Eigen::Vector2d::Zero(), Eigen::Matrix3d::Identity()),
                    std::invalid_argument);
    Eigen::Matrix2d asym;
    asym << 0.5, 1e-3, -1e-3, 0.5;
    CHECK_THROWS_AS(GaussianState(Eigen::Vector2d::Zero(), asym), std::invalid_argument);
}

TEST_CASE("embed places a transform on the selected modes") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Eigen::Matrix2d rot;
    const double t = angle(rng);
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    const SymplecticTransform local(rot);

    const std::vector<int> at{2};
    const SymplecticTransform big = embed(local, 4, at);
    CHECK(big.matrix().block<2, 2>(4, 4).isApprox(rot, 1e-15));
    CHECK(big.matrix().block<2, 2>(0, 0).isApprox(Eigen::Matrix2d::Identity(), 1e-15));
    CHECK_THAT(symplectic_defect(big.matrix()), WithinAbs(0.0, 1e-12));

    const std::vector<int> bad{4};
    CHECK_THROWS_AS(embed(local, 4, bad), std::out_of_range);
}
