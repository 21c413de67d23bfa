#include "ddkit/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddkit/classical_noise.hpp"
#include "ddkit/finite_bath.hpp"
#include "ddkit/io.hpp"
#include "ddkit/order_fit.hpp"
#include "ddkit/spin_boson.hpp"
#include "ddkit/state_protect.hpp"
#include "ddkit/version.hpp"

namespace ddkit {

using nlohmann::json;

int configured_thread_count() {
    const char* env = std::getenv("DDKIT_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n >= 1 ? n : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(configured_thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < n;
                     i += static_cast<std::size_t>(workers))
                    fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

PulseSequence sequence_from_spec(const std::string& family, int n, int m, double total_time,
                                 Pauli axis) {
    if (family == "free") return generate_free(total_time);
    if (family == "udd") return generate_udd(n, total_time, axis);
    if (family == "cpmg") return generate_cpmg(n, total_time);
    if (family == "cdd") {
        if (n < 0 || n > 30) throw std::invalid_argument("cdd: bad level");
        return generate_cdd_dephasing(n, total_time / std::ldexp(1.0, n));
    }
    if (family == "cdd4") {
        if (n < 0 || n > 15) throw std::invalid_argument("cdd4: bad level");
        return generate_cdd_general(n, total_time / std::ldexp(1.0, 2 * n));
    }
    if (family == "cudd") {
        if (m < 0 || m > 24) throw std::invalid_argument("cudd: bad level");
        return generate_cudd(n, m, total_time / std::ldexp(1.0, m));
    }
    if (family == "qdd") return generate_qdd(m, n, total_time);
    throw std::invalid_argument("unknown sequence family '" + family + "'");
}

namespace {

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::string> instance_comments;
    // one row per sweep point; string cells already formatted
    std::vector<std::vector<std::string>> rows;
    // (T, metric) pairs per numeric column name for fitting
    std::vector<double> t_values;
    std::vector<std::vector<double>> numeric;   // [column][point]
    // optional side outputs: (path, file body minus provenance header)
    std::vector<std::pair<std::string, std::string>> extra_files;
};

struct SequenceSpec {
    std::string family = "udd";
    int n = 1;
    int m = 0;
    Pauli axis = Pauli::X;
    PulseSequence build(double total_time) const {
        return sequence_from_spec(family, n, m, total_time, axis);
    }
};

SequenceSpec parse_sequence(const json& j) {
    SequenceSpec s;
    s.family = j.value("family", "udd");
    s.n = j.value("n", 1);
    s.m = j.value("m", 0);
    std::string axis = j.value("axis", "X");
    if (axis.size() != 1) throw std::invalid_argument("sequence.axis must be one of X, Y, Z");
    s.axis = pauli_from_char(axis[0]);
    return s;
}

std::vector<double> parse_sweep(const json& j) {
    double t_max = j.at("t_max").get<double>();
    int points = j.value("points", 12);
    double ratio = j.value("ratio", std::sqrt(2.0));
    return make_time_grid(t_max, points, ratio);
}

int column_index(const SweepTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("fit.metric '" + name + "' is not a sweep column");
}

SweepTable run_finitebath(const json& cfg, const SequenceSpec& seq_spec,
                          const std::vector<double>& grid, std::uint64_t seed) {
    const json& inst = cfg.at("instance");
    Eigen::Index dim = inst.at("dim").get<Eigen::Index>();
    double alpha = inst.at("alpha").get<double>();
    double beta = inst.at("beta").get<double>();
    bool pure = inst.value("pure_dephasing", false);
    QubitBathHamiltonian h = random_hamiltonian(dim, alpha, beta, seed, pure);

    SweepTable table;
    table.columns = {"T", "dephasing_error", "relaxation_error", "generator_dephasing",
                     "generator_relaxation"};
    std::ostringstream meta;
    meta << "# instance dim=" << dim << " alpha=" << format_g17(alpha) << " beta="
         << format_g17(beta) << " seed=" << seed << " pure_dephasing=" << (pure ? 1 : 0);
    table.instance_comments.push_back(meta.str());

    table.t_values = grid;
    table.numeric.assign(5, std::vector<double>(grid.size(), 0.0));
    parallel_for(grid.size(), [&](std::size_t i) {
        PulseSequence seq = seq_spec.build(grid[i]);
        ErrorMetrics m = sequence_error_metrics(h, seq);
        table.numeric[0][i] = grid[i];
        table.numeric[1][i] = m.dephasing_error;
        table.numeric[2][i] = m.relaxation_error;
        table.numeric[3][i] = m.generator_dephasing;
        table.numeric[4][i] = m.generator_relaxation;
    });
    return table;
}

SweepTable run_spinboson(const json& cfg, const SequenceSpec& seq_spec,
                         const std::vector<double>& grid, std::uint64_t seed) {
    const json& inst = cfg.at("instance");
    std::vector<BosonMode> modes;
    if (inst.contains("modes_csv")) {
        std::ifstream in(inst.at("modes_csv").get<std::string>());
        if (!in) throw std::invalid_argument("spinboson: cannot open modes_csv file");
        modes = read_modes_csv(in);
    } else {
        for (const auto& row : inst.at("modes"))
            modes.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        validate_modes(modes);
    }
    (void)seed;

    SweepTable table;
    table.columns = {"T", "coherence", "deficit"};
    table.instance_comments.push_back("# instance modes=" + std::to_string(modes.size()));
    table.t_values = grid;
    table.numeric.assign(3, std::vector<double>(grid.size(), 0.0));
    parallel_for(grid.size(), [&](std::size_t i) {
        PulseSequence seq = seq_spec.build(grid[i]);
        double exponent = 0.0;
        for (const BosonMode& mode : modes) exponent += std::norm(delta_final(mode, seq));
        double coherence = std::exp(-kOverlapExponentFactor * exponent);
        table.numeric[0][i] = grid[i];
        table.numeric[1][i] = coherence;
        table.numeric[2][i] = 1.0 - coherence;
    });

    // optional full time,L trace at the largest sweep time
    if (inst.contains("trace_csv")) {
        int steps = inst.value("trace_steps", 256);
        PulseSequence seq = seq_spec.build(grid.back());
        CoherenceTrace trace = coherence(modes, seq, coherence_grid(seq, steps));
        std::ostringstream body;
        write_trace_csv(body, trace);
        table.extra_files.emplace_back(inst.at("trace_csv").get<std::string>(), body.str());
    }
    return table;
}

SweepTable run_noise(const json& cfg, const SequenceSpec& seq_spec,
                     const std::vector<double>& grid, std::uint64_t seed) {
    const json& inst = cfg.at("instance");
    const json& spec = inst.at("spectrum");
    std::string kind = spec.at("kind").get<std::string>();
    NoiseSpectrum spectrum = NoiseSpectrum::ohmic_sharp(1.0, 1.0);
    if (kind == "ohmic_sharp") {
        spectrum = NoiseSpectrum::ohmic_sharp(spec.at("amplitude").get<double>(),
                                              spec.at("cutoff").get<double>());
    } else if (kind == "inverse_quartic_soft") {
        spectrum = NoiseSpectrum::inverse_quartic_soft(spec.at("amplitude").get<double>(),
                                                       spec.at("omega_min").get<double>());
    } else if (kind == "tabulated") {
        if (spec.contains("csv")) {
            std::ifstream in(spec.at("csv").get<std::string>());
            if (!in) throw std::invalid_argument("noise: cannot open spectrum CSV file");
            spectrum = read_spectrum_csv(in);
        } else {
            spectrum = NoiseSpectrum::tabulated(spec.at("omega").get<std::vector<double>>(),
                                                spec.at("s").get<std::vector<double>>());
        }
    } else {
        throw std::invalid_argument("noise: unknown spectrum kind '" + kind + "'");
    }
    int realizations = inst.value("realizations", 2000);
    int n_modes = inst.value("synthesis_modes", 512);

    SweepTable table;
    table.columns = {"sequence", "N", "T", "chi_analytic", "coherence_mc", "stderr"};
    table.instance_comments.push_back("# instance spectrum=" + kind + " realizations=" +
                                      std::to_string(realizations));
    table.t_values = grid;
    table.rows.assign(grid.size(), {});
    table.numeric.assign(6, std::vector<double>(grid.size(), 0.0));
    parallel_for(grid.size(), [&](std::size_t i) {
        PulseSequence seq = seq_spec.build(grid[i]);
        double chi = coherence_exponent(spectrum, seq);
        McCoherence mc = mc_coherence(spectrum, seq, realizations, seed, n_modes);
        table.numeric[2][i] = grid[i];
        table.numeric[3][i] = chi;
        table.numeric[4][i] = mc.coherence;
        table.numeric[5][i] = mc.std_error;
        table.rows[i] = {seq.label(), std::to_string(seq.size()), format_g17(grid[i]),
                         format_g17(chi), format_g17(mc.coherence), format_g17(mc.std_error)};
    });
    return table;
}

SweepTable run_protect(const json& cfg, const SequenceSpec& seq_spec,
                       const std::vector<double>& grid, std::uint64_t seed) {
    const json& inst = cfg.at("instance");
    Eigen::Index dim = inst.at("dim").get<Eigen::Index>();
    double norm = inst.value("norm", 1.0);
    bool final_pulse = inst.value("final_pulse", true);
    ProtectedSystem sys = random_protected_system(dim, seed, norm);

    SweepTable table;
    table.columns = {"T", "commutator_error", "leakage"};
    std::ostringstream meta;
    meta << "# instance dim=" << dim << " norm=" << format_g17(norm) << " seed=" << seed
         << " final_pulse=" << (final_pulse ? 1 : 0);
    table.instance_comments.push_back(meta.str());
    table.t_values = grid;
    table.numeric.assign(3, std::vector<double>(grid.size(), 0.0));
    parallel_for(grid.size(), [&](std::size_t i) {
        Eigen::MatrixXcd u = protected_propagator(sys, seq_spec.n, grid[i], final_pulse);
        ProtectionMetrics m = protection_error(sys, u);
        table.numeric[0][i] = grid[i];
        table.numeric[1][i] = m.commutator_error;
        table.numeric[2][i] = m.leakage;
    });
    return table;
}

void write_table(const std::string& path, const SweepTable& table,
                 const std::vector<std::string>& provenance) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    for (const std::string& line : provenance) os << line << "\n";
    for (const std::string& line : table.instance_comments) os << line << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
    for (std::size_t i = 0; i < table.t_values.size(); ++i) {
        if (!table.rows.empty() && !table.rows[i].empty()) {
            for (std::size_t c = 0; c < table.rows[i].size(); ++c)
                os << table.rows[i][c] << (c + 1 < table.rows[i].size() ? "," : "\n");
        } else {
            for (std::size_t c = 0; c < table.numeric.size(); ++c)
                os << format_g17(table.numeric[c][i]) << (c + 1 < table.numeric.size() ? ","
                                                                                       : "\n");
        }
    }
}

}  // namespace

RunStatus run_experiment(const std::string& config_path, std::ostream& diag) {
    json cfg;
    std::string raw;
    std::string csv_path, report_path;
    try {
        std::ifstream in(config_path);
        if (!in) {
            diag << "config error: cannot open '" << config_path << "'\n";
            return RunStatus::ConfigError;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        raw = buf.str();
        cfg = json::parse(raw);
    } catch (const std::exception& e) {
        diag << "config error: " << e.what() << "\n";
        return RunStatus::ConfigError;
    }

    // only files this run started writing are removed on failure
    std::vector<std::string> written;
    auto cleanup = [&]() {
        std::error_code ec;
        for (const std::string& path : written) std::filesystem::remove(path, ec);
    };

    try {
        const std::string engine = cfg.at("engine").get<std::string>();
        const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
        SequenceSpec seq_spec = parse_sequence(cfg.value("sequence", json::object()));
        std::vector<double> grid = parse_sweep(cfg.at("sweep"));
        csv_path = cfg.at("output").at("csv").get<std::string>();
        report_path = cfg.at("output").at("report").get<std::string>();

        // validate the sequence spec up front so bad parameters are a
        // config error rather than a mid-sweep numeric one
        seq_spec.build(grid.back());

        SweepTable table;
        if (engine == "finitebath") {
            table = run_finitebath(cfg, seq_spec, grid, seed);
        } else if (engine == "spinboson") {
            table = run_spinboson(cfg, seq_spec, grid, seed);
        } else if (engine == "noise") {
            table = run_noise(cfg, seq_spec, grid, seed);
        } else if (engine == "protect") {
            table = run_protect(cfg, seq_spec, grid, seed);
        } else {
            diag << "config error: unknown engine '" << engine << "'\n";
            return RunStatus::ConfigError;
        }

        const json fit_cfg = cfg.value("fit", json::object());
        const std::string metric = fit_cfg.value(
            "metric", engine == "noise" ? "chi_analytic"
                                        : std::string(table.columns[1]));
        int col = column_index(table, metric);
        double floor = fit_cfg.value("floor", 1e-12);
        double ceiling = fit_cfg.value("ceiling", 1e-1);
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < table.t_values.size(); ++i)
            pairs.emplace_back(table.t_values[i], table.numeric[static_cast<std::size_t>(col)][i]);
        OrderFitResult fit = fit_order(pairs, floor, ceiling);

        bool pass = true;
        if (fit_cfg.contains("claimed_order")) {
            double claimed = fit_cfg.at("claimed_order").get<double>();
            double band = fit_cfg.value("band", 0.3);
            pass = fit.valid && std::fabs(fit.slope - claimed) <= band;
        }
        if (fit_cfg.contains("min_slope"))
            pass = pass && fit.valid && fit.slope >= fit_cfg.at("min_slope").get<double>();
        bool mc_ok = true;
        if (engine == "noise" && fit_cfg.value("require_mc_agreement", false)) {
            double sigma = fit_cfg.value("mc_sigma", 3.0);
            for (std::size_t i = 0; i < table.t_values.size(); ++i) {
                double analytic = std::exp(-table.numeric[3][i]);
                double mc = table.numeric[4][i];
                double se = table.numeric[5][i];
                if (std::fabs(mc - analytic) > sigma * se) mc_ok = false;
            }
            pass = pass && mc_ok;
        }

        std::vector<std::string> provenance = {
            std::string("# ddkit ") + kVersion,
            "# config_hash=" + [&] {
                char buf[20];
                std::snprintf(buf, sizeof buf, "%016llx",
                              static_cast<unsigned long long>(fnv1a_hash(raw)));
                return std::string(buf);
            }(),
            "# seed=" + std::to_string(seed),
        };
        written.push_back(csv_path);
        write_table(csv_path, table, provenance);
        for (const auto& [path, body] : table.extra_files) {
            written.push_back(path);
            std::ofstream os(path);
            if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
            for (const std::string& line : provenance) os << line << "\n";
            os << body;
        }

        json report;
        report["engine"] = engine;
        report["metric"] = metric;
        report["fit_valid"] = fit.valid;
        report["slope"] = fit.slope;
        report["intercept"] = fit.intercept;
        report["r_squared"] = fit.r_squared;
        report["points_used"] = fit.points_used;
        report["window"] = {fit.window_lo, fit.window_hi};
        report["low_confidence"] = fit.valid && fit.r_squared < 0.995;
        if (fit_cfg.contains("claimed_order"))
            report["claimed_order"] = fit_cfg.at("claimed_order").get<double>();
        if (fit_cfg.contains("min_slope"))
            report["min_slope"] = fit_cfg.at("min_slope").get<double>();
        if (engine == "noise" && fit_cfg.value("require_mc_agreement", false))
            report["mc_agreement"] = mc_ok;
        report["pass"] = pass;
        report["provenance"] = {{"tool_version", kVersion},
                                {"config_hash", provenance[1].substr(14)},
                                {"seed", seed}};
        written.push_back(report_path);
        std::ofstream rep(report_path);
        if (!rep) throw std::runtime_error("cannot open report file '" + report_path + "'");
        rep << report.dump(2) << "\n";

        diag << "engine=" << engine << " metric=" << metric << " slope=" << fit.slope
             << " r2=" << fit.r_squared << " pass=" << (pass ? "yes" : "no") << "\n";
        return pass ? RunStatus::Pass : RunStatus::NumericFailure;
    } catch (const json::exception& e) {
        cleanup();
        diag << "config error: " << e.what() << "\n";
        return RunStatus::ConfigError;
    } catch (const std::invalid_argument& e) {
        cleanup();
        diag << "config error: " << e.what() << "\n";
        return RunStatus::ConfigError;
    } catch (const std::exception& e) {
        cleanup();
        diag << "numeric error: " << e.what() << "\n";
        return RunStatus::NumericFailure;
    }
}

}  // namespace ddkit
