#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cvclone/circuit_json.hpp"
#include "cvclone/cloner.hpp"

// Command-line front end. Subcommands:
//   clone    build and run one cloning circuit, print the report
//   table    fidelity and added-variance table over an (N, M) grid
//   circuit  serialized element list of a circuit
// Exit codes: 0 = bounds saturated, 1 = ran but unsaturated, 2 = usage error.

namespace cvclone::cli {

enum class OutputFormat { human, json, csv };

struct RunConfig {
    int n = 1;
    int m = 1;
    Variant variant = Variant::msplitter;
    std::complex<double> alpha{0.0, 0.0};
    double squeeze = 0.0;
    OutputFormat format = OutputFormat::human;
    std::string out_path;  // empty means stdout
};

namespace detail {

// Shortest round-tripping decimal form; locale-independent.
inline std::string format_full(double value) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

// 12 significant digits, enough to make 1e-10 comparisons visible.
inline std::string format_sig(double value) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text, const char* what) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw CLI::ValidationError(std::string(what) + ": cannot parse number '" + text + "'");
    return value;
}

// alpha is given as "re,im"; no complex-literal parsing.
inline std::complex<double> parse_alpha(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--alpha: expected 're,im', got '" + text + "'");
    return {parse_double(text.substr(0, comma), "--alpha"), parse_double(text.substr(comma + 1), "--alpha")};
}

inline OutputFormat parse_format(const std::string& text) {
    if (text == "human") return OutputFormat::human;
    if (text == "json") return OutputFormat::json;
    if (text == "csv") return OutputFormat::csv;
    throw CLI::ValidationError("--format: expected human, json or csv, got '" + text + "'");
}

inline void check_grid(int n, int m, Variant variant) {
    if (n < 1 || m < n || m > 32)
        throw CLI::ValidationError("need 1 <= N <= M <= 32 (got N=" + std::to_string(n) +
                                   ", M=" + std::to_string(m) + ")");
    if (variant == Variant::percopy && n * m + n > 128)
        throw CLI::ValidationError("percopy variant limited to N*M + N <= 128 modes");
}

}  // namespace detail

inline void render_clone_report(const CloneReport& rep, OutputFormat format, std::ostream& os) {
    using detail::format_full;
    using detail::format_sig;
    if (format == OutputFormat::json) {
        os << nlohmann::json(rep).dump(2) << "\n";
        return;
    }
    if (format == OutputFormat::csv) {
        os << "role,mode,mean_x,mean_p,var_x,var_p,fidelity,added_variance\n";
        for (const auto& c : rep.clones)
            os << "clone," << c.mode << "," << format_full(c.mean_x) << "," << format_full(c.mean_p) << ","
               << format_full(c.variances.front()) << ","
               << format_full(c.variances[c.variances.size() / 2]) << "," << format_full(c.fidelity) << ","
               << format_full(c.added_variance) << "\n";
        for (const auto& a : rep.anticlones)
            os << "anticlone," << a.mode << "," << format_full(a.mean_x) << "," << format_full(a.mean_p)
               << "," << format_full(a.var_x) << "," << format_full(a.var_p) << ",,\n";
        for (const auto& w : rep.waste)
            os << "waste," << w.mode << "," << format_full(w.mean_x) << "," << format_full(w.mean_p) << ","
               << format_full(w.var_x) << "," << format_full(w.var_p) << ",,\n";
        return;
    }
    os << rep.n_inputs << " -> " << rep.n_clones << " cloning, variant " << variant_name(rep.variant)
       << "\n";
    os << "alpha = (" << format_sig(rep.alpha.real()) << ", " << format_sig(rep.alpha.imag())
       << "), squeeze r = " << format_sig(rep.input_squeeze) << "\n";
    os << "optimal fidelity        " << format_sig(rep.bound_fidelity) << "\n";
    os << "optimal added variance  " << format_sig(rep.bound_added_variance) << "\n";
    for (const auto& c : rep.clones)
        os << "clone mode " << c.mode << ": mean (" << format_sig(c.mean_x) << ", " << format_sig(c.mean_p)
           << "), fidelity " << format_sig(c.fidelity) << ", added variance "
           << format_sig(c.added_variance) << "\n";
    for (const auto& a : rep.anticlones)
        os << "anticlone mode " << a.mode << ": mean (" << format_sig(a.mean_x) << ", "
           << format_sig(a.mean_p) << "), variances (" << format_sig(a.var_x) << ", "
           << format_sig(a.var_p) << ")\n";
    if (!rep.waste.empty()) {
        double max_mean = 0.0;
        for (const auto& w : rep.waste)
            max_mean = std::max({max_mean, std::abs(w.mean_x), std::abs(w.mean_p)});
        os << rep.waste.size() << " waste modes, max |mean| = " << format_sig(max_mean) << "\n";
    }
    os << "saturated: variance " << (rep.variance_saturated ? "yes" : "no") << ", fidelity "
       << (rep.fidelity_saturated ? "yes" : "no") << "\n";
}

inline int cmd_clone(const RunConfig& config, std::ostream& os) {
    const Circuit circuit = build_cloner(config.n, config.m, config.variant);
    const CloneReport rep = report(circuit, config.alpha, config.squeeze, config.squeeze);
    render_clone_report(rep, config.format, os);
    return (rep.variance_saturated && rep.fidelity_saturated) ? 0 : 1;
}

struct TableRow {
    int n = 0, m = 0;
    double fidelity_sim = 0.0, fidelity_formula = 0.0, fidelity_err = 0.0;
    double added_var_sim = 0.0, added_var_formula = 0.0, added_var_err = 0.0;
};

inline TableRow table_row(int n, int m, Variant variant) {
    const CloneReport rep = report(build_cloner(n, m, variant), std::complex<double>(1.0, 0.0));
    TableRow row;
    row.n = n;
    row.m = m;
    row.fidelity_formula = optimal_fidelity(n, m);
    row.added_var_formula = optimal_added_variance(n, m);
    row.fidelity_sim = rep.clones.front().fidelity;
    row.added_var_sim = rep.clones.front().added_variance;
    for (const auto& c : rep.clones) {
        row.fidelity_err = std::max(row.fidelity_err, std::abs(c.fidelity - row.fidelity_formula));
        row.added_var_err =
            std::max(row.added_var_err, std::abs(c.added_variance - row.added_var_formula));
    }
    return row;
}

inline int cmd_table(int n_max, int m_max, Variant variant, OutputFormat format, std::ostream& os) {
    using detail::format_full;
    using detail::format_sig;
    std::vector<TableRow> rows;
    for (int n = 1; n <= n_max; ++n)
        for (int m = n; m <= m_max; ++m) rows.push_back(table_row(n, m, variant));
    if (format == OutputFormat::json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows)
            j.push_back({{"n", r.n},
                         {"m", r.m},
                         {"fidelity_sim", r.fidelity_sim},
                         {"fidelity_formula", r.fidelity_formula},
                         {"fidelity_abs_err", r.fidelity_err},
                         {"added_variance_sim", r.added_var_sim},
                         {"added_variance_formula", r.added_var_formula},
                         {"added_variance_abs_err", r.added_var_err}});
        os << j.dump(2) << "\n";
    } else if (format == OutputFormat::csv) {
        os << "n,m,fidelity_sim,fidelity_formula,fidelity_abs_err,"
              "added_variance_sim,added_variance_formula,added_variance_abs_err\n";
        for (const auto& r : rows)
            os << r.n << "," << r.m << "," << format_full(r.fidelity_sim) << ","
               << format_full(r.fidelity_formula) << "," << format_full(r.fidelity_err) << ","
               << format_full(r.added_var_sim) << "," << format_full(r.added_var_formula) << ","
               << format_full(r.added_var_err) << "\n";
    } else {
        os << "(N, M) grid, variant " << variant_name(variant) << "\n";
        os << "N\tM\tF_sim\tF_formula\t|dF|\tV_sim\tV_formula\t|dV|\n";
        for (const auto& r : rows)
            os << r.n << "\t" << r.m << "\t" << format_sig(r.fidelity_sim) << "\t"
               << format_sig(r.fidelity_formula) << "\t" << format_sig(r.fidelity_err) << "\t"
               << format_sig(r.added_var_sim) << "\t" << format_sig(r.added_var_formula) << "\t"
               << format_sig(r.added_var_err) << "\n";
    }
    const bool saturated = std::all_of(rows.begin(), rows.end(), [](const TableRow& r) {
        return r.fidelity_err <= saturation_tol && r.added_var_err <= saturation_tol;
    });
    return saturated ? 0 : 1;
}

inline int cmd_circuit(int n, int m, Variant variant, OutputFormat format, std::ostream& os) {
    const Circuit circuit = build_cloner(n, m, variant);
    if (format == OutputFormat::csv) {
        os << "type,a,b,parameter\n";
        for (const auto& element : circuit.elements) {
            if (const auto* bs = std::get_if<BeamSplitterSpec>(&element))
                os << "bs," << bs->k << "," << bs->l << "," << detail::format_full(bs->theta) << "\n";
            else if (const auto* amp = std::get_if<AmplifierSpec>(&element))
                os << "amp," << amp->signal << "," << amp->ancilla << ","
                   << detail::format_full(amp->gain) << "\n";
            else if (const auto* blk = std::get_if<DftBlockElement>(&element))
                os << "dft," << blk->modes.front() << "," << blk->modes.back() << "," << blk->modes.size()
                   << "\n";
            else
                os << "perm,,," << std::get<PermutationElement>(element).map.size() << "\n";
        }
        return 0;
    }
    if (format == OutputFormat::human) {
        int n_bs = 0, n_amp = 0;
        for (const auto& element : circuit.elements) {
            if (std::holds_alternative<BeamSplitterSpec>(element)) ++n_bs;
            if (std::holds_alternative<AmplifierSpec>(element)) ++n_amp;
        }
        os << variant_name(variant) << " circuit for " << n << " -> " << m << ": " << circuit.n_modes
           << " modes, " << n_bs << " beam splitters, " << n_amp << " amplifier(s)\n";
    }
    os << nlohmann::json(circuit).dump(2) << "\n";
    return 0;
}

// Parses and dispatches. args excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian-optics simulator for optimal coherent-state cloning circuits"};
    app.require_subcommand(1);

    int n = 1, m = 1;
    std::string variant_text = "msplitter";
    std::string alpha_text = "0,0";
    double squeeze = 0.0;
    std::string format_text = "human";
    std::string out_path;

    auto add_common = [&](CLI::App* cmd, bool with_alpha) {
        cmd->add_option("--n", n, "number of input copies N");
        cmd->add_option("--m", m, "number of output clones M");
        cmd->add_option("--variant", variant_text, "circuit variant: dft, msplitter or percopy");
        if (with_alpha) {
            cmd->add_option("--alpha", alpha_text, "input amplitude as re,im");
            cmd->add_option("--squeeze", squeeze, "squeezing parameter r of input and auxiliary modes");
        }
        cmd->add_option("--format", format_text, "output format: human, json or csv");
        cmd->add_option("--out", out_path, "write output to this file instead of stdout");
    };

    CLI::App* clone_cmd = app.add_subcommand("clone", "run one cloning experiment and report it");
    add_common(clone_cmd, true);
    CLI::App* table_cmd =
        app.add_subcommand("table", "fidelity and added-variance table over the (N, M) grid");
    add_common(table_cmd, false);
    CLI::App* circuit_cmd = app.add_subcommand("circuit", "print the circuit's element list");
    add_common(circuit_cmd, false);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));

        const Variant variant = variant_from_name(variant_text);
        const OutputFormat format = detail::parse_format(format_text);
        detail::check_grid(n, m, variant);

        std::ofstream file;
        std::ostream* os = &out;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw CLI::ValidationError("--out: cannot open '" + out_path + "' for writing");
            os = &file;
        }

        if (clone_cmd->parsed()) {
            if (!std::isfinite(squeeze)) throw CLI::ValidationError("--squeeze: must be finite");
            RunConfig config{n, m, variant, detail::parse_alpha(alpha_text), squeeze, format, out_path};
            return cmd_clone(config, *os);
        }
        if (table_cmd->parsed()) return cmd_table(n, m, variant, format, *os);
        return cmd_circuit(n, m, variant, format, *os);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cvclone::cli
