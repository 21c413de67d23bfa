// ddkit: command-line front end for the decoupling toolkit.
//
// Exit codes: 0 success / acceptance pass, 1 numeric failure, 2 usage or
// configuration error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "ddkit/experiment.hpp"
#include "ddkit/io.hpp"
#include "ddkit/order_fit.hpp"
#include "ddkit/sequence.hpp"
#include "ddkit/version.hpp"

namespace {

struct SeqArgs {
    std::string family = "udd";
    int n = 1;
    int m = 0;
    double total_time = 1.0;
    std::string axis = "X";
};

void add_seq_options(CLI::App* cmd, SeqArgs& args) {
    cmd->add_option("--family", args.family, "free|udd|cpmg|cdd|cdd4|cudd|qdd")
        ->required();
    cmd->add_option("--n", args.n, "order / block count / level");
    cmd->add_option("--m", args.m, "outer order (qdd) or concatenation level (cudd)");
    cmd->add_option("--total-time", args.total_time, "total evolution time")->required();
    cmd->add_option("--axis", args.axis, "pulse axis for udd (default X)");
}

ddkit::PulseSequence build(const SeqArgs& a) {
    if (a.axis.size() != 1) throw std::invalid_argument("--axis must be X, Y or Z");
    return ddkit::sequence_from_spec(a.family, a.n, a.m, a.total_time,
                                     ddkit::pauli_from_char(a.axis[0]));
}

int cmd_seq(const SeqArgs& args) {
    ddkit::write_sequence_csv(std::cout, build(args));
    return 0;
}

int cmd_lambda(const SeqArgs& args, int max_p) {
    if (max_p < 1) throw std::invalid_argument("--max-p must be at least 1");
    ddkit::PulseSequence seq = build(args);
    std::cout << "p,lambda_p\n";
    for (int p = 1; p <= max_p; ++p)
        std::cout << p << "," << ddkit::format_g17(ddkit::lambda_moment(seq, p)) << "\n";
    return 0;
}

int cmd_filter(const SeqArgs& args, double omega_max, int points) {
    if (points < 1) throw std::invalid_argument("--points must be at least 1");
    if (!(omega_max > 0.0)) throw std::invalid_argument("--omega-max must be positive");
    ddkit::PulseSequence seq = build(args);
    std::cout << "omega,f_real,f_imag,abs2\n";
    for (int i = 0; i <= points; ++i) {
        double w = omega_max * static_cast<double>(i) / static_cast<double>(points);
        std::complex<double> f = ddkit::filter_function(seq, w);
        std::cout << ddkit::format_g17(w) << "," << ddkit::format_g17(f.real()) << ","
                  << ddkit::format_g17(f.imag()) << "," << ddkit::format_g17(std::norm(f))
                  << "\n";
    }
    return 0;
}

int cmd_fit(const std::string& input, const std::string& t_col, const std::string& err_col,
            double floor, double ceiling) {
    std::ifstream in(input);
    if (!in) throw std::invalid_argument("fit: cannot open '" + input + "'");
    std::string line;
    std::vector<std::string> header;
    int ti = -1, ei = -1;
    std::vector<std::pair<double, double>> pairs;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (header.empty()) {
            header = cells;
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] == t_col) ti = static_cast<int>(i);
                if (header[i] == err_col) ei = static_cast<int>(i);
            }
            if (ti < 0 || ei < 0)
                throw std::invalid_argument("fit: columns '" + t_col + "'/'" + err_col +
                                            "' not found in header");
            continue;
        }
        pairs.emplace_back(std::stod(cells.at(static_cast<std::size_t>(ti))),
                           std::stod(cells.at(static_cast<std::size_t>(ei))));
    }
    ddkit::OrderFitResult fit = ddkit::fit_order(pairs, floor, ceiling);
    std::cout << "slope,intercept,r_squared,points_used,window_lo,window_hi\n";
    std::cout << ddkit::format_g17(fit.slope) << "," << ddkit::format_g17(fit.intercept) << ","
              << ddkit::format_g17(fit.r_squared) << "," << fit.points_used << ","
              << ddkit::format_g17(fit.window_lo) << "," << ddkit::format_g17(fit.window_hi)
              << "\n";
    if (!fit.valid) {
        std::cerr << "fit: too few points inside the error window\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamical decoupling toolkit"};
    app.set_version_flag("--version", ddkit::kVersion);
    app.require_subcommand(1);

    SeqArgs seq_args;
    CLI::App* seq = app.add_subcommand("seq", "emit a pulse sequence as CSV");
    add_seq_options(seq, seq_args);

    SeqArgs lambda_args;
    int max_p = 8;
    CLI::App* lambda = app.add_subcommand("lambda", "tabulate the decoupling moments");
    add_seq_options(lambda, lambda_args);
    lambda->add_option("--max-p", max_p, "largest moment order (default 8)");

    SeqArgs filter_args;
    double omega_max = 16.0;
    int points = 256;
    CLI::App* filter = app.add_subcommand("filter", "tabulate the filter function");
    add_seq_options(filter, filter_args);
    filter->add_option("--omega-max", omega_max, "largest angular frequency");
    filter->add_option("--points", points, "number of tabulation intervals");

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment config (JSON)");
    run->add_option("--config", config_path, "experiment config file")->required();

    std::string fit_input, fit_tcol = "T", fit_ecol;
    double fit_floor = 1e-12, fit_ceiling = 1e-1;
    CLI::App* fit = app.add_subcommand("fit", "fit a power law to a sweep CSV");
    fit->add_option("--input", fit_input, "sweep CSV file")->required();
    fit->add_option("--t-column", fit_tcol, "time column name (default T)");
    fit->add_option("--column", fit_ecol, "error column name")->required();
    fit->add_option("--floor", fit_floor, "error floor (default 1e-12)");
    fit->add_option("--ceiling", fit_ceiling, "error ceiling (default 1e-1)");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(seq)) return cmd_seq(seq_args);
        if (app.got_subcommand(lambda)) return cmd_lambda(lambda_args, max_p);
        if (app.got_subcommand(filter)) return cmd_filter(filter_args, omega_max, points);
        if (app.got_subcommand(run))
            return static_cast<int>(ddkit::run_experiment(config_path, std::cerr));
        if (app.got_subcommand(fit))
            return cmd_fit(fit_input, fit_tcol, fit_ecol, fit_floor, fit_ceiling);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
