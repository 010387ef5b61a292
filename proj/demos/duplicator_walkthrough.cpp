// Builds the 1 -> 2 cloner (one gain-2 amplifier plus one balanced beam
// splitter), runs it on a coherent state and prints what ends up on each
// output mode.

#include <complex>
#include <cstdio>

#include "cvclone/cloner.hpp"

using namespace cvclone;

int main() {
    const std::complex<double> alpha{1.0, 0.5};
    const Circuit circuit = build_duplicator();
    const GaussianState out = run(circuit, alpha);

    std::printf("duplicator on alpha = %.3f%+.3fi (%d modes, %zu elements)\n", alpha.real(), alpha.imag(),
                circuit.n_modes, circuit.elements.size());
    std::printf("input mean quadratures: (%.6f, %.6f)\n", std::sqrt(2.0) * alpha.real(),
                std::sqrt(2.0) * alpha.imag());

    for (int mode : circuit.layout.clones) {
        const GaussianState clone = reduced_state(out, {mode});
        std::printf("clone %d: mean (%.6f, %.6f), var (%.6f, %.6f), fidelity %.12f\n", mode,
                    clone.mean()(0), clone.mean()(1), clone.cov()(0, 0), clone.cov()(1, 1),
                    fidelity_vs_coherent(clone, alpha));
    }
    for (int mode : circuit.layout.anticlones) {
        const GaussianState anticlone = reduced_state(out, {mode});
        std::printf("anticlone %d: mean (%.6f, %.6f), var (%.6f, %.6f)\n", mode, anticlone.mean()(0),
                    anticlone.mean()(1), anticlone.cov()(0, 0), anticlone.cov()(1, 1));
    }
    std::printf("optimal 1->2 fidelity: %.12f\n", optimal_fidelity(1, 2));
    return 0;
}
