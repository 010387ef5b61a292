#pragma once

#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cvclone/elements.hpp"
#include "cvclone/gaussian.hpp"

// Builders for symmetric N -> M coherent-state cloning circuits, made of
// beam splitters and a single phase-insensitive amplifier (or one amplifier
// per input copy in the per-copy variant), plus the machinery to run them
// and report clone quality against the optimal bounds.

namespace cvclone {

// Saturation flags compare against the optimal bounds within this tolerance.
inline constexpr double saturation_tol = 1e-9;

enum class Variant { dft, msplitter, percopy };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::dft: return "dft";
        case Variant::msplitter: return "msplitter";
        case Variant::percopy: return "percopy";
    }
    throw std::logic_error("variant_name: unknown variant");
}

inline Variant variant_from_name(const std::string& name) {
    if (name == "dft") return Variant::dft;
    if (name == "msplitter") return Variant::msplitter;
    if (name == "percopy") return Variant::percopy;
    throw std::invalid_argument("unknown variant '" + name + "' (expected dft, msplitter or percopy)");
}

// Passive multiport applying the m-mode DFT to the listed modes.
struct DftBlockElement {
    std::vector<int> modes;
    friend bool operator==(const DftBlockElement&, const DftBlockElement&) = default;
};

// Mode relabeling: the content of mode j moves to mode map[j].
struct PermutationElement {
    std::vector<int> map;
    friend bool operator==(const PermutationElement&, const PermutationElement&) = default;
};

using CircuitElement = std::variant<BeamSplitterSpec, AmplifierSpec, DftBlockElement, PermutationElement>;

// Mode-role map of a built cloning circuit. Input indices may coincide with
// clone indices; clones, anticlones and waste are pairwise disjoint.
struct ClonerLayout {
    int n_inputs = 0;   // N
    int n_clones = 0;   // M
    Variant variant = Variant::msplitter;
    std::vector<int> inputs;
    std::vector<int> clones;
    std::vector<int> anticlones;
    std::vector<int> waste;
    friend bool operator==(const ClonerLayout&, const ClonerLayout&) = default;
};

// Ordered element list over n_modes modes, with the mode-role map attached.
struct Circuit {
    int n_modes = 0;
    std::vector<CircuitElement> elements;
    ClonerLayout layout;
    friend bool operator==(const Circuit&, const Circuit&) = default;
};

inline void validate(const Circuit& circuit) {
    const int n = circuit.n_modes;
    if (n < 1) throw std::invalid_argument("circuit: need at least one mode");
    auto check_index = [n](int mode) {
        if (mode < 0 || mode >= n) throw std::out_of_range("circuit: mode index out of range");
    };
    for (const auto& element : circuit.elements) {
        if (const auto* bs = std::get_if<BeamSplitterSpec>(&element)) {
            detail::check_mode_pair(n, bs->k, bs->l, "circuit beam splitter");
        } else if (const auto* amp = std::get_if<AmplifierSpec>(&element)) {
            if (amp->gain < 1.0) throw std::invalid_argument("circuit amplifier: gain must be >= 1");
            detail::check_mode_pair(n, amp->signal, amp->ancilla, "circuit amplifier");
        } else if (const auto* blk = std::get_if<DftBlockElement>(&element)) {
            if (blk->modes.empty()) throw std::invalid_argument("circuit dft block: empty mode list");
            std::vector<bool> seen(static_cast<size_t>(n), false);
            for (int mode : blk->modes) {
                check_index(mode);
                if (seen[static_cast<size_t>(mode)])
                    throw std::invalid_argument("circuit dft block: duplicate mode index");
                seen[static_cast<size_t>(mode)] = true;
            }
        } else if (const auto* perm = std::get_if<PermutationElement>(&element)) {
            if (static_cast<int>(perm->map.size()) != n)
                throw std::invalid_argument("circuit permutation: map length must equal n_modes");
            std::vector<bool> seen(static_cast<size_t>(n), false);
            for (int mode : perm->map) {
                check_index(mode);
                if (seen[static_cast<size_t>(mode)])
                    throw std::invalid_argument("circuit permutation: map is not a permutation");
                seen[static_cast<size_t>(mode)] = true;
            }
        }
    }
    const ClonerLayout& lay = circuit.layout;
    if (lay.n_inputs < 1 || lay.n_clones < lay.n_inputs)
        throw std::invalid_argument("circuit layout: need 1 <= N <= M");
    if (static_cast<int>(lay.clones.size()) != lay.n_clones)
        throw std::invalid_argument("circuit layout: clone list must have M entries");
    if (static_cast<int>(lay.inputs.size()) != lay.n_inputs)
        throw std::invalid_argument("circuit layout: input list must have N entries");
    if (lay.variant == Variant::percopy &&
        static_cast<int>(lay.waste.size()) != lay.n_clones * (lay.n_inputs - 1))
        throw std::invalid_argument("circuit layout: per-copy variant must expose M(N-1) waste modes");
    std::vector<int> occupancy(static_cast<size_t>(n), 0);
    for (const auto* roles : {&lay.clones, &lay.anticlones, &lay.waste})
        for (int mode : *roles) {
            check_index(mode);
            if (++occupancy[static_cast<size_t>(mode)] > 1)
                throw std::invalid_argument("circuit layout: clone/anticlone/waste sets must be disjoint");
        }
    for (int mode : lay.inputs) check_index(mode);
}

// The element as a standalone transform on the circuit's full mode space.
inline SymplecticTransform element_transform(const CircuitElement& element, int n_modes) {
    if (const auto* bs = std::get_if<BeamSplitterSpec>(&element)) return beam_splitter(n_modes, *bs);
    if (const auto* amp = std::get_if<AmplifierSpec>(&element)) return amplifier(n_modes, *amp);
    if (const auto* blk = std::get_if<DftBlockElement>(&element))
        return embed(symplectic_from_unitary(dft(static_cast<int>(blk->modes.size()))), n_modes, blk->modes);
    const auto& map = std::get<PermutationElement>(element).map;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int j = 0; j < n_modes; ++j) {
        s(2 * map[static_cast<size_t>(j)], 2 * j) = 1.0;
        s(2 * map[static_cast<size_t>(j)] + 1, 2 * j + 1) = 1.0;
    }
    return SymplecticTransform(std::move(s));
}

namespace detail {

// In-place left-multiplication by an element touching few modes: only the
// affected rows of (s, d) are recombined.
inline void left_apply_local(Eigen::MatrixXd& s, Eigen::VectorXd& d, const Eigen::MatrixXd& local,
                             std::span<const int> modes) {
    const auto m = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXd rows(2 * m, s.cols());
    Eigen::VectorXd dloc(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        rows.middleRows<2>(2 * i) = s.middleRows<2>(2 * modes[static_cast<size_t>(i)]);
        dloc.segment<2>(2 * i) = d.segment<2>(2 * modes[static_cast<size_t>(i)]);
    }
    rows = (local * rows).eval();
    dloc = (local * dloc).eval();
    for (Eigen::Index i = 0; i < m; ++i) {
        s.middleRows<2>(2 * modes[static_cast<size_t>(i)]) = rows.middleRows<2>(2 * i);
        d.segment<2>(2 * modes[static_cast<size_t>(i)]) = dloc.segment<2>(2 * i);
    }
}

inline void left_apply(Eigen::MatrixXd& s, Eigen::VectorXd& d, const CircuitElement& element) {
    if (const auto* bs = std::get_if<BeamSplitterSpec>(&element)) {
        const int modes[2] = {bs->k, bs->l};
        left_apply_local(s, d, beam_splitter_local(bs->theta), modes);
    } else if (const auto* amp = std::get_if<AmplifierSpec>(&element)) {
        const int modes[2] = {amp->signal, amp->ancilla};
        left_apply_local(s, d, amplifier_local(amp->gain), modes);
    } else if (const auto* blk = std::get_if<DftBlockElement>(&element)) {
        const auto local = symplectic_from_unitary(dft(static_cast<int>(blk->modes.size())));
        left_apply_local(s, d, local.matrix(), blk->modes);
    } else {
        const auto& map = std::get<PermutationElement>(element).map;
        const Eigen::MatrixXd olds = s;
        const Eigen::VectorXd oldd = d;
        for (size_t j = 0; j < map.size(); ++j) {
            s.middleRows<2>(2 * map[j]) = olds.middleRows<2>(2 * static_cast<Eigen::Index>(j));
            d.segment<2>(2 * map[j]) = oldd.segment<2>(2 * static_cast<Eigen::Index>(j));
        }
    }
}

}  // namespace detail

// Composition of all elements in order, as one transform.
inline SymplecticTransform total_transform(const Circuit& circuit) {
    validate(circuit);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * circuit.n_modes, 2 * circuit.n_modes);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * circuit.n_modes);
    for (const auto& element : circuit.elements) detail::left_apply(s, d, element);
    return SymplecticTransform(std::move(s), std::move(d));
}

// Three-stage N -> M cloner: concentrate the N inputs into one mode,
// amplify it with gain M/N, distribute over the M outputs. The device
// selector picks the concentration/distribution implementation; both give
// identical clone marginals.
inline Circuit build_cloner_dft(int n_in, int m_out, Variant device = Variant::msplitter) {
    if (n_in < 1 || m_out < n_in) throw std::invalid_argument("build_cloner_dft: need 1 <= N <= M");
    if (device == Variant::percopy)
        throw std::invalid_argument("build_cloner_dft: device must be dft or msplitter");
    Circuit circuit;
    circuit.n_modes = m_out + 1;  // M signal/blank modes plus the amplifier ancilla
    if (device == Variant::msplitter) {
        for (const auto& spec : inverse_n_splitter_sequence(n_in)) circuit.elements.push_back(spec);
    } else if (n_in >= 2) {
        std::vector<int> modes(static_cast<size_t>(n_in));
        std::iota(modes.begin(), modes.end(), 0);
        circuit.elements.push_back(DftBlockElement{std::move(modes)});
    }
    circuit.elements.push_back(
        AmplifierSpec{0, m_out, static_cast<double>(m_out) / static_cast<double>(n_in)});
    if (device == Variant::msplitter) {
        for (const auto& spec : m_splitter_sequence(m_out)) circuit.elements.push_back(spec);
    } else if (m_out >= 2) {
        std::vector<int> modes(static_cast<size_t>(m_out));
        std::iota(modes.begin(), modes.end(), 0);
        circuit.elements.push_back(DftBlockElement{std::move(modes)});
    }
    ClonerLayout& lay = circuit.layout;
    lay.n_inputs = n_in;
    lay.n_clones = m_out;
    lay.variant = device;
    lay.inputs.resize(static_cast<size_t>(n_in));
    std::iota(lay.inputs.begin(), lay.inputs.end(), 0);
    lay.clones.resize(static_cast<size_t>(m_out));
    std::iota(lay.clones.begin(), lay.clones.end(), 0);
    lay.anticlones = {m_out};
    return circuit;
}

// Per-copy N -> M cloner: amplify each input individually, spread each over
// M modes with an M-splitter, then recombine across copies with M inverse
// N-splitters. Uses N amplifiers and leaves M(N-1) waste modes. Mode
// (k, l) of the N x M grid sits at index k*M + l; ancilla k at N*M + k.
inline Circuit build_cloner_percopy(int n_in, int m_out) {
    if (n_in < 1 || m_out < n_in) throw std::invalid_argument("build_cloner_percopy: need 1 <= N <= M");
    Circuit circuit;
    circuit.n_modes = n_in * m_out + n_in;
    const double gain = static_cast<double>(m_out) / static_cast<double>(n_in);
    for (int k = 0; k < n_in; ++k)
        circuit.elements.push_back(AmplifierSpec{k * m_out, n_in * m_out + k, gain});
    for (int k = 0; k < n_in; ++k)
        for (const auto& spec : m_splitter_sequence(m_out))
            circuit.elements.push_back(
                BeamSplitterSpec{k * m_out + spec.k, k * m_out + spec.l, spec.theta});
    for (int l = 0; l < m_out; ++l)
        for (const auto& spec : inverse_n_splitter_sequence(n_in))
            circuit.elements.push_back(
                BeamSplitterSpec{spec.k * m_out + l, spec.l * m_out + l, spec.theta});
    ClonerLayout& lay = circuit.layout;
    lay.n_inputs = n_in;
    lay.n_clones = m_out;
    lay.variant = Variant::percopy;
    for (int k = 0; k < n_in; ++k) lay.inputs.push_back(k * m_out);
    for (int l = 0; l < m_out; ++l) lay.clones.push_back(l);
    for (int k = 0; k < n_in; ++k) lay.anticlones.push_back(n_in * m_out + k);
    for (int k = 1; k < n_in; ++k)
        for (int l = 0; l < m_out; ++l) lay.waste.push_back(k * m_out + l);
    return circuit;
}

// 1 -> 2 cloner: amplifier of gain 2 into the ancilla, then a balanced beam
// splitter. Clones on modes {0, 1}, anticlone on mode 2.
inline Circuit build_duplicator() { return build_cloner_dft(1, 2, Variant::msplitter); }

inline Circuit build_cloner(int n_in, int m_out, Variant variant) {
    if (variant == Variant::percopy) return build_cloner_percopy(n_in, m_out);
    return build_cloner_dft(n_in, m_out, variant);
}

// Prepares |alpha> (optionally squeezed by input_squeeze) on every input
// mode and vacuum (optionally squeezed by ancilla_squeeze) elsewhere, then
// applies all elements in order.
inline GaussianState run(const Circuit& circuit, std::complex<double> alpha, double input_squeeze = 0.0,
                         double ancilla_squeeze = 0.0) {
    validate(circuit);
    const int n = circuit.n_modes;
    std::vector<bool> is_input(static_cast<size_t>(n), false);
    for (int mode : circuit.layout.inputs) is_input[static_cast<size_t>(mode)] = true;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(2 * n);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int mode = 0; mode < n; ++mode) {
        const double r = is_input[static_cast<size_t>(mode)] ? input_squeeze : ancilla_squeeze;
        cov(2 * mode, 2 * mode) = std::exp(-2.0 * r) * vacuum_variance;
        cov(2 * mode + 1, 2 * mode + 1) = std::exp(2.0 * r) * vacuum_variance;
        if (is_input[static_cast<size_t>(mode)]) {
            mean(2 * mode) = std::sqrt(2.0) * alpha.real();
            mean(2 * mode + 1) = std::sqrt(2.0) * alpha.imag();
        }
    }
    return apply(GaussianState(std::move(mean), std::move(cov)), total_transform(circuit));
}

// Quadrature angles at which clone variances are sampled.
inline std::vector<double> report_angles() {
    std::vector<double> angles(8);
    for (int i = 0; i < 8; ++i) angles[static_cast<size_t>(i)] = std::numbers::pi * i / 8.0;
    return angles;
}

struct CloneEntry {
    int mode = 0;
    double mean_x = 0.0, mean_p = 0.0;
    std::vector<double> variances;  // at report_angles(), lab frame
    double fidelity = 0.0;          // vs the (possibly squeezed) input state
    double added_variance = 0.0;    // per quadrature, in the input's frame
};

struct AuxiliaryEntry {
    int mode = 0;
    double mean_x = 0.0, mean_p = 0.0;
    double var_x = 0.0, var_p = 0.0;
};

struct CloneReport {
    int n_inputs = 0, n_clones = 0;
    Variant variant = Variant::msplitter;
    std::complex<double> alpha;
    double input_squeeze = 0.0, ancilla_squeeze = 0.0;
    std::vector<double> angles;
    std::vector<CloneEntry> clones;
    std::vector<AuxiliaryEntry> anticlones;
    std::vector<AuxiliaryEntry> waste;
    double bound_added_variance = 0.0;  // (2/N - 2/M) * vacuum_variance
    double bound_fidelity = 0.0;        // MN / (MN + M - N)
    bool variance_saturated = false;
    bool fidelity_saturated = false;
};

namespace detail {

inline AuxiliaryEntry auxiliary_entry(const GaussianState& out, int mode) {
    const Eigen::Vector2d mean = out.mode_mean(mode);
    const Eigen::Matrix2d cov = out.mode_cov(mode);
    return AuxiliaryEntry{mode, mean(0), mean(1), cov(0, 0), cov(1, 1)};
}

}  // namespace detail

// Runs the circuit and compares every clone against the optimal added-noise
// and fidelity bounds. Added variances are measured relative to the input's
// covariance shape, so matched-squeezing runs are judged in the squeezed
// frame.
inline CloneReport report(const Circuit& circuit, std::complex<double> alpha, double input_squeeze = 0.0,
                          double ancilla_squeeze = 0.0) {
    const ClonerLayout& lay = circuit.layout;
    const GaussianState out = run(circuit, alpha, input_squeeze, ancilla_squeeze);
    const GaussianState target = squeezed_coherent(alpha, input_squeeze);

    CloneReport rep;
    rep.n_inputs = lay.n_inputs;
    rep.n_clones = lay.n_clones;
    rep.variant = lay.variant;
    rep.alpha = alpha;
    rep.input_squeeze = input_squeeze;
    rep.ancilla_squeeze = ancilla_squeeze;
    rep.angles = report_angles();
    rep.bound_added_variance = optimal_added_variance(lay.n_inputs, lay.n_clones);
    rep.bound_fidelity = optimal_fidelity(lay.n_inputs, lay.n_clones);
    rep.variance_saturated = true;
    rep.fidelity_saturated = true;

    const bool squeezed = input_squeeze != 0.0;
    for (int mode : lay.clones) {
        CloneEntry entry;
        entry.mode = mode;
        const Eigen::Vector2d mean = out.mode_mean(mode);
        entry.mean_x = mean(0);
        entry.mean_p = mean(1);
        const GaussianState marginal = reduced_state(out, {mode});
        for (double phi : rep.angles) entry.variances.push_back(quadrature_variance(marginal, 0, phi));
        entry.fidelity = fidelity_vs_pure(marginal, target);
        if (!squeezed) {
            double sum = 0.0;
            for (double v : entry.variances) {
                sum += v;
                if (std::abs(v - vacuum_variance - rep.bound_added_variance) > saturation_tol)
                    rep.variance_saturated = false;
            }
            entry.added_variance = sum / static_cast<double>(entry.variances.size()) - vacuum_variance;
        } else {
            // Judge the x and p axes in the squeezed frame of the input.
            const Eigen::Matrix2d cov = out.mode_cov(mode);
            const double vx = cov(0, 0) * std::exp(2.0 * input_squeeze);
            const double vp = cov(1, 1) * std::exp(-2.0 * input_squeeze);
            entry.added_variance = (vx + vp) / 2.0 - vacuum_variance;
            if (std::abs(vx - vacuum_variance - rep.bound_added_variance) > saturation_tol ||
                std::abs(vp - vacuum_variance - rep.bound_added_variance) > saturation_tol)
                rep.variance_saturated = false;
        }
        if (std::abs(entry.fidelity - rep.bound_fidelity) > saturation_tol) rep.fidelity_saturated = false;
        rep.clones.push_back(std::move(entry));
    }
    for (int mode : lay.anticlones) rep.anticlones.push_back(detail::auxiliary_entry(out, mode));
    for (int mode : lay.waste) rep.waste.push_back(detail::auxiliary_entry(out, mode));
    return rep;
}

// Means and variances of the anticlone modes. For the single-ancilla
// variants run on N = 1 the anticlone is centered on the phase-conjugated
// input (x0, -p0).
inline std::vector<AuxiliaryEntry> anticlone_report(const Circuit& circuit, std::complex<double> alpha,
                                                    double input_squeeze = 0.0,
                                                    double ancilla_squeeze = 0.0) {
    const GaussianState out = run(circuit, alpha, input_squeeze, ancilla_squeeze);
    std::vector<AuxiliaryEntry> entries;
    entries.reserve(circuit.layout.anticlones.size());
    for (int mode : circuit.layout.anticlones) entries.push_back(detail::auxiliary_entry(out, mode));
    return entries;
}

}  // namespace cvclone
