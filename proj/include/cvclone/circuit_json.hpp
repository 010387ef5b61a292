#pragma once

#include <nlohmann/json.hpp>

#include "cvclone/cloner.hpp"

// JSON schema for circuits:
//   { "n_modes": int,
//     "elements": [ {"type": "bs",  "k": int, "l": int, "theta": float}
//                 | {"type": "amp", "signal": int, "ancilla": int, "gain": float}
//                 | {"type": "perm", "map": [int]}
//                 | {"type": "dft",  "modes": [int]} ],
//     "roles": { "variant": str, "n": int, "m": int,
//                "inputs": [int], "clones": [int], "anticlones": [int], "waste": [int] } }

namespace cvclone {

inline void to_json(nlohmann::json& j, const CircuitElement& element) {
    if (const auto* bs = std::get_if<BeamSplitterSpec>(&element)) {
        j = {{"type", "bs"}, {"k", bs->k}, {"l", bs->l}, {"theta", bs->theta}};
    } else if (const auto* amp = std::get_if<AmplifierSpec>(&element)) {
        j = {{"type", "amp"}, {"signal", amp->signal}, {"ancilla", amp->ancilla}, {"gain", amp->gain}};
    } else if (const auto* blk = std::get_if<DftBlockElement>(&element)) {
        j = {{"type", "dft"}, {"modes", blk->modes}};
    } else {
        j = {{"type", "perm"}, {"map", std::get<PermutationElement>(element).map}};
    }
}

inline void from_json(const nlohmann::json& j, CircuitElement& element) {
    const auto type = j.at("type").get<std::string>();
    if (type == "bs") {
        element = BeamSplitterSpec{j.at("k").get<int>(), j.at("l").get<int>(), j.at("theta").get<double>()};
    } else if (type == "amp") {
        element = AmplifierSpec{j.at("signal").get<int>(), j.at("ancilla").get<int>(),
                                j.at("gain").get<double>()};
    } else if (type == "dft") {
        element = DftBlockElement{j.at("modes").get<std::vector<int>>()};
    } else if (type == "perm") {
        element = PermutationElement{j.at("map").get<std::vector<int>>()};
    } else {
        throw std::invalid_argument("circuit json: unknown element type '" + type + "'");
    }
}

inline void to_json(nlohmann::json& j, const ClonerLayout& layout) {
    j = {{"variant", variant_name(layout.variant)},
         {"n", layout.n_inputs},
         {"m", layout.n_clones},
         {"inputs", layout.inputs},
         {"clones", layout.clones},
         {"anticlones", layout.anticlones},
         {"waste", layout.waste}};
}

inline void from_json(const nlohmann::json& j, ClonerLayout& layout) {
    layout.variant = variant_from_name(j.at("variant").get<std::string>());
    layout.n_inputs = j.at("n").get<int>();
    layout.n_clones = j.at("m").get<int>();
    layout.inputs = j.at("inputs").get<std::vector<int>>();
    layout.clones = j.at("clones").get<std::vector<int>>();
    layout.anticlones = j.at("anticlones").get<std::vector<int>>();
    layout.waste = j.at("waste").get<std::vector<int>>();
}

inline void to_json(nlohmann::json& j, const Circuit& circuit) {
    j = {{"n_modes", circuit.n_modes}, {"elements", circuit.elements}, {"roles", circuit.layout}};
}

inline void from_json(const nlohmann::json& j, Circuit& circuit) {
    circuit.n_modes = j.at("n_modes").get<int>();
    circuit.elements = j.at("elements").get<std::vector<CircuitElement>>();
    circuit.layout = j.at("roles").get<ClonerLayout>();
    validate(circuit);
}

inline void to_json(nlohmann::json& j, const CloneEntry& entry) {
    j = {{"mode", entry.mode},           {"mean_x", entry.mean_x},
         {"mean_p", entry.mean_p},       {"variances", entry.variances},
         {"fidelity", entry.fidelity},   {"added_variance", entry.added_variance}};
}

inline void to_json(nlohmann::json& j, const AuxiliaryEntry& entry) {
    j = {{"mode", entry.mode},
         {"mean_x", entry.mean_x},
         {"mean_p", entry.mean_p},
         {"var_x", entry.var_x},
         {"var_p", entry.var_p}};
}

inline void to_json(nlohmann::json& j, const CloneReport& rep) {
    j = {{"n", rep.n_inputs},
         {"m", rep.n_clones},
         {"variant", variant_name(rep.variant)},
         {"alpha", {{"re", rep.alpha.real()}, {"im", rep.alpha.imag()}}},
         {"input_squeeze", rep.input_squeeze},
         {"ancilla_squeeze", rep.ancilla_squeeze},
         {"angles", rep.angles},
         {"clones", rep.clones},
         {"anticlones", rep.anticlones},
         {"waste", rep.waste},
         {"bound_added_variance", rep.bound_added_variance},
         {"bound_fidelity", rep.bound_fidelity},
         {"variance_saturated", rep.variance_saturated},
         {"fidelity_saturated", rep.fidelity_saturated}};
}

}  // namespace cvclone
