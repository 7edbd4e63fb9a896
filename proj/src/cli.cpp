#include "qgraph/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qgraph/casimir.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/greens.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph::cli {

namespace {

constexpr std::string_view kManifestPrefix = "# manifest: ";

const double kDefaultTauMax = RegularizationConfig::default_tau_values().front();
const double kDefaultTauMin = RegularizationConfig::default_tau_values().back();

struct RegularizationFlags {
    double tau_min = kDefaultTauMin;
    double tau_max = kDefaultTauMax;
    int tau_steps = 8;
    double quad_tol = 1e-10;
    std::string kappa_max = "auto";
    int fit_order = 6;
    double spectrum_tol = 1e-10;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--tau-min", tau_min, "smallest regulator tau");
        cmd.add_option("--tau-max", tau_max, "largest regulator tau");
        cmd.add_option("--tau-steps", tau_steps, "number of geometric tau values");
        cmd.add_option("--quad-tol", quad_tol, "adaptive quadrature tolerance");
        cmd.add_option("--kappa-max", kappa_max, "imaginary-axis truncation or 'auto'");
        cmd.add_option("--fit-order", fit_order, "fitted terms besides the finite part");
        cmd.add_option("--spectrum-tol", spectrum_tol, "eigenvalue tolerance for the mode sum");
    }

    RegularizationConfig resolve() const {
        RegularizationConfig cfg;
        cfg.tau_values = RegularizationConfig::geometric_tau_values(tau_min, tau_max, tau_steps);
        cfg.quadrature_tol = quad_tol;
        cfg.fit_order = fit_order;
        if (kappa_max != "auto") {
            try {
                std::size_t used = 0;
                cfg.kappa_max = std::stod(kappa_max, &used);
                if (used != kappa_max.size()) throw std::invalid_argument(kappa_max);
            } catch (const std::exception&) {
                throw InputError("--kappa-max expects a number or 'auto'");
            }
        }
        if (!(spectrum_tol > 0.0)) throw InputError("--spectrum-tol must be positive");
        cfg.validate();
        return cfg;
    }

    void echo(Json& config) const {
        config["tau-min"] = tau_min;
        config["tau-max"] = tau_max;
        config["tau-steps"] = tau_steps;
        config["quad-tol"] = quad_tol;
        config["kappa-max"] = kappa_max;
        config["fit-order"] = fit_order;
        config["spectrum-tol"] = spectrum_tol;
    }
};

Json manifest(std::string_view command, const std::string& graph_path, Json config) {
    Json m;
    m["command"] = std::string(command);
    m["graph_path"] = graph_path;
    m["config"] = std::move(config);
    m["tool_version"] = std::string(kToolVersion);
    return m;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path == "-") {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write output file " + path);
    file << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ExtrapolationError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& s : e.samples()) err << "  tau=" << format_double(s.tau) << " value=" << format_double(s.value) << "\n";
        return kNumericalError;
    } catch (const ValidationError& e) {
        err << "error: invalid graph\n";
        for (const auto& d : e.diagnostics()) err << "  " << d << "\n";
        return kInputError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalError;
    }
}

Json casimir_json(const CasimirResult& r) {
    Json j;
    j["method"] = std::string(to_string(r.method));
    j["energy"] = r.energy;
    j["estimated_error"] = r.estimated_error;
    j["fit"] = {{"powers", r.fit_powers}, {"coefficients", r.fit_coefficients}, {"residual", r.fit_residual}};
    Json samples = Json::array();
    for (const auto& s : r.per_tau_samples) samples.push_back({{"tau", s.tau}, {"value", s.value}});
    j["per_tau_samples"] = std::move(samples);
    if (r.method == CasimirMethod::green_trace) j["kappa_max"] = r.kappa_max;
    j["quadrature_tol"] = r.quadrature_tol;
    return j;
}

CasimirResult mode_sum_for(const Graph& g, const RegularizationConfig& cfg, double spectrum_tol, Json* info) {
    const double k_max = kModeSumSpectrumFactor / cfg.tau_values.back();
    const auto spectrum = find_eigenvalues(g, k_max, spectrum_tol);
    if (info) {
        (*info)["k_max"] = k_max;
        (*info)["count"] = spectrum.eigenvalues.size();
        (*info)["weyl_max_deviation"] = spectrum.weyl_max_deviation;
    }
    return casimir_mode_sum(spectrum.eigenvalues, total_length(g), cfg);
}

// --- spectrum -----------------------------------------------------------

struct SpectrumCommand {
    std::string graph, output = "-";
    double kmax = 0.0;
    double tol = 1e-10;

    int run(std::ostream& out) const {
        if (!(kmax > 0.0) || !std::isfinite(kmax)) throw InputError("--kmax must be positive");
        if (!(tol > 0.0)) throw InputError("--tol must be positive");
        const Graph g = load_graph(graph);
        if (!g.is_compact()) throw UnsupportedTopology("spectrum requires compact graph");
        const auto s = find_eigenvalues(g, kmax, tol);

        Json doc;
        doc["manifest"] = manifest("spectrum", graph, {{"kmax", kmax}, {"tol", tol}});
        doc["eigenvalues"] = s.eigenvalues;
        doc["residuals"] = s.residuals;
        doc["weyl"] = {{"total_length", total_length(g)},
                       {"k_max", s.k_max},
                       {"expected_count", s.weyl_expected},
                       {"count", s.eigenvalues.size()},
                       {"max_deviation", s.weyl_max_deviation},
                       {"bound", s.weyl_bound}};
        doc["scan_step"] = s.scan_step;
        write_output(output, dump_json(doc), out);
        return kOk;
    }
};

// --- casimir ------------------------------------------------------------

struct CasimirCommand {
    std::string graph, output = "-", method = "both";
    RegularizationFlags reg;

    int run(std::ostream& out) const {
        if (method != "green" && method != "modesum" && method != "both")
            throw InputError("--method must be green, modesum or both");
        const auto cfg = reg.resolve();
        const Graph g = load_graph(graph);

        Json results = Json::array();
        std::optional<double> green_energy, mode_energy;
        if (method == "green" || method == "both") {
            const auto r = casimir_green_method(g, cfg);
            green_energy = r.energy;
            results.push_back(casimir_json(r));
        }
        if (method == "modesum" || method == "both") {
            Json info;
            const auto r = mode_sum_for(g, cfg, reg.spectrum_tol, &info);
            mode_energy = r.energy;
            Json j = casimir_json(r);
            j["spectrum"] = std::move(info);
            results.push_back(std::move(j));
        }

        Json config{{"method", method}};
        reg.echo(config);
        Json doc;
        doc["manifest"] = manifest("casimir", graph, std::move(config));
        doc["results"] = std::move(results);
        if (green_energy && mode_energy)
            doc["relative_difference"] = std::abs(*green_energy - *mode_energy) / std::abs(*mode_energy);
        write_output(output, dump_json(doc), out);
        return kOk;
    }
};

// --- sweep --------------------------------------------------------------

std::string csv_safe(std::string s) {
    for (auto& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

struct SweepCommand {
    std::string graph, output = "-", method = "modesum", parameter = "length-scale";
    double from = 0.0, to = 0.0;
    int steps = 0;
    RegularizationFlags reg;

    int run(std::ostream& out) const {
        if (parameter != "length-scale") throw InputError("--parameter supports only length-scale");
        if (method != "green" && method != "modesum") throw InputError("--method must be green or modesum");
        if (!(from > 0.0)) throw InputError("--from must be positive");
        if (!(to > from)) throw InputError("--to must exceed --from");
        if (steps < 2) throw InputError("--steps must be >= 2");
        const auto cfg = reg.resolve();
        const Graph g = load_graph(graph);
        if (method == "green") reduce_to_two_vertex(g);

        struct Row {
            double scale, energy = std::nan(""), error = std::nan("");
            std::string failure;
        };
        std::vector<Row> rows(static_cast<std::size_t>(steps));
        parallel_for(rows.size(), [&](std::size_t i) {
            auto& row = rows[i];
            row.scale = from + (to - from) * static_cast<double>(i) / (steps - 1);
            try {
                const Graph s = scaled(g, row.scale);
                const auto r = method == "green" ? casimir_green_method(s, cfg) : mode_sum_for(s, cfg, reg.spectrum_tol, nullptr);
                row.energy = r.energy;
                row.error = r.estimated_error;
            } catch (const Error& e) {
                row.failure = csv_safe(e.what());
            }
        });

        Json config{{"method", method}, {"parameter", parameter}, {"from", from}, {"to", to}, {"steps", steps}};
        reg.echo(config);
        std::string csv;
        csv += kManifestPrefix;
        csv += dump_json(manifest("sweep", graph, std::move(config)), false);
        csv += "\nscale,energy,estimated_error,error\n";
        bool failed = false;
        for (const auto& r : rows) {
            failed |= !r.failure.empty();
            csv += format_double(r.scale) + "," + (r.failure.empty() ? format_double(r.energy) : "nan") + "," +
                   (r.failure.empty() ? format_double(r.error) : "nan") + "," + r.failure + "\n";
        }
        write_output(output, csv, out);
        return failed ? kPartialSweep : kOk;
    }
};

// --- greens -------------------------------------------------------------

cplx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(text);
        std::size_t used_re = 0, used_im = 0;
        const std::string re = text.substr(0, comma), im = text.substr(comma + 1);
        const double r = std::stod(re, &used_re);
        const double i = std::stod(im, &used_im);
        if (used_re != re.size() || used_im != im.size()) throw std::invalid_argument(text);
        return {r, i};
    } catch (const std::exception&) {
        throw InputError("--k expects \"re,im\", got \"" + text + "\"");
    }
}

struct GreensCommand {
    std::string graph, output = "-", k, ordering = "reciprocal";
    double xi = 0.0, xf = 0.0;
    int lead_in = 0, lead_out = 0;

    int run(std::ostream& out) const {
        if (ordering != "reciprocal" && ordering != "as-written")
            throw InputError("--ordering must be reciprocal or as-written");
        const cplx wave = parse_complex(k);
        if (xi < 0.0 || xf < 0.0) throw OutOfRange("coordinates must be >= 0");
        const Graph g = load_graph(graph);
        require_zero_potential(g);

        GreenDecomposition d{};
        std::string topology;
        if (g.vertices.size() == 1 && g.bonds.empty() && !g.leads.empty()) {
            topology = "star";
            const auto s = build_vertex_smatrix(static_cast<int>(g.leads.size()), g.vertices[0].coupling, wave);
            d = star_green(lead_in, lead_out, wave, xi, xf, s);
        } else {
            const auto two = reduce_to_two_vertex(g);
            topology = "two-vertex";
            const auto end = vertex_reflection_transmission(1, two.coupling, wave);
            const auto ca = interval_amplitudes(end, two.ell, wave);
            d = two_vertex_green(wave, xi, xf, ca,
                                 ordering == "reciprocal" ? SourceOrdering::reciprocal : SourceOrdering::as_written);
        }

        Json doc;
        doc["manifest"] = manifest("greens", graph,
                                   {{"k", k}, {"xi", xi}, {"xf", xf}, {"lead-in", lead_in}, {"lead-out", lead_out},
                                    {"ordering", ordering}});
        doc["topology"] = topology;
        doc["total"] = complex_to_json(d.total);
        doc["free"] = complex_to_json(d.free_part);
        doc["gamma"] = complex_to_json(d.gamma_part);
        write_output(output, dump_json(doc), out);
        return kOk;
    }
};

}  // namespace

Json read_manifest(const std::string& text) {
    try {
        if (text.rfind(kManifestPrefix, 0) == 0) {
            const auto end = text.find('\n');
            return Json::parse(text.substr(kManifestPrefix.size(), end - kManifestPrefix.size()));
        }
        return Json::parse(text).at("manifest");
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("result file has no readable manifest: ") + e.what());
    }
}

std::vector<std::string> manifest_arguments(const Json& m) {
    try {
        std::vector<std::string> args{m.at("command").get<std::string>(), "--graph", m.at("graph_path").get<std::string>()};
        for (const auto& [key, value] : m.at("config").items()) {
            args.push_back("--" + key);
            if (value.is_string())
                args.push_back(value.get<std::string>());
            else if (value.is_number_float())
                args.push_back(format_double(value.get<double>()));
            else
                args.push_back(value.dump());
        }
        return args;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum-graph spectra, Green functions and Casimir energies", "qgraph"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    SpectrumCommand spectrum;
    auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of a compact graph");
    spec_cmd->add_option("--graph", spectrum.graph, "graph description (JSON)")->required();
    spec_cmd->add_option("--kmax", spectrum.kmax, "search ceiling")->required();
    spec_cmd->add_option("--tol", spectrum.tol, "root tolerance");
    spec_cmd->add_option("--output", spectrum.output, "result file, '-' for stdout");

    CasimirCommand casimir;
    auto* cas_cmd = app.add_subcommand("casimir", "regularized zero-point energy");
    cas_cmd->add_option("--graph", casimir.graph, "graph description (JSON)")->required();
    cas_cmd->add_option("--method", casimir.method, "green | modesum | both");
    cas_cmd->add_option("--output", casimir.output, "result file, '-' for stdout");
    casimir.reg.add_to(*cas_cmd);

    SweepCommand sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Casimir energy versus a length scale (CSV)");
    sweep_cmd->add_option("--graph", sweep.graph, "graph description (JSON)")->required();
    sweep_cmd->add_option("--parameter", sweep.parameter, "swept parameter (length-scale)");
    sweep_cmd->add_option("--from", sweep.from, "first scale factor")->required();
    sweep_cmd->add_option("--to", sweep.to, "last scale factor")->required();
    sweep_cmd->add_option("--steps", sweep.steps, "number of points")->required();
    sweep_cmd->add_option("--method", sweep.method, "green | modesum");
    sweep_cmd->add_option("--output", sweep.output, "CSV file, '-' for stdout");
    sweep.reg.add_to(*sweep_cmd);

    GreensCommand greens;
    auto* greens_cmd = app.add_subcommand("greens", "Green function value on a star or two-vertex graph");
    greens_cmd->add_option("--graph", greens.graph, "graph description (JSON)")->required();
    greens_cmd->add_option("--k", greens.k, "complex wavenumber as re,im")->required();
    greens_cmd->add_option("--xi", greens.xi, "source coordinate")->required();
    greens_cmd->add_option("--xf", greens.xf, "observation coordinate")->required();
    greens_cmd->add_option("--lead-in", greens.lead_in, "source lead (star)");
    greens_cmd->add_option("--lead-out", greens.lead_out, "observation lead (star)");
    greens_cmd->add_option("--ordering", greens.ordering, "reciprocal | as-written (two-vertex)");
    greens_cmd->add_option("--output", greens.output, "result file, '-' for stdout");

    std::string rerun_result, rerun_output = "-";
    auto* rerun_cmd = app.add_subcommand("rerun", "repeat the command recorded in a result's manifest");
    rerun_cmd->add_option("--result", rerun_result, "earlier result file")->required();
    rerun_cmd->add_option("--output", rerun_output, "result file, '-' for stdout");

    std::vector<std::string> argv_storage{"qgraph"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    if (*spec_cmd) return guarded(err, [&] { return spectrum.run(out); });
    if (*cas_cmd) return guarded(err, [&] { return casimir.run(out); });
    if (*sweep_cmd) return guarded(err, [&] { return sweep.run(out); });
    if (*greens_cmd) return guarded(err, [&] { return greens.run(out); });
    return guarded(err, [&] {
        auto replay = manifest_arguments(read_manifest(read_file(rerun_result)));
        if (!replay.empty() && replay.front() == "rerun") throw InputError("manifest cannot name rerun");
        replay.push_back("--output");
        replay.push_back(rerun_output);
        return run(replay, out, err);
    });
}

}  // namespace qgraph::cli
