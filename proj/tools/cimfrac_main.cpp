// Experiment driver for the contour-integral solver: single solves, temporal
// and spatial error tables, reference-cache management and the built-in
// property suite.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cimfrac/errors.hpp"
#include "cimfrac/experiments.hpp"

namespace {

using namespace cimfrac;

double parse_h(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        double num = std::stod(s.substr(0, slash));
        double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) throw UsageError("bad mesh size " + s);
        return num / den;
    }
    return std::stod(s);
}

std::vector<double> parse_h_list(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& s : items) out.push_back(parse_h(s));
    return out;
}

struct CommonArgs {
    std::string case_id;
    double alpha = 0.5, beta = 0.5;
    std::optional<double> epsilon;
    std::optional<double> theta, t0, lambda;
    RunOptions opts;
};

ExperimentCase build_case(const CommonArgs& c) {
    ExperimentCase cs =
        make_case(parse_case_id(c.case_id), c.alpha, c.beta, c.epsilon);
    if (c.theta) cs.theta = *c.theta;
    if (c.t0) cs.t0 = *c.t0;
    if (c.lambda) cs.lambda = *c.lambda;
    return cs;
}

void add_common(CLI::App* cmd, CommonArgs& c, bool need_case = true) {
    cmd->set_config("--config", "", "flat key=value config file");
    auto* opt = cmd->add_option("--case", c.case_id,
                                "experiment case id (scalar_ex1, homog_1d_ex2, "
                                "homog_2d_ex2, nonhomog_1d_ex3, "
                                "nonhomog_2d_ex3, nonsmooth_1d_ex4)");
    if (need_case) opt->required();
    cmd->add_option("--alpha", c.alpha, "memory-kernel order in (0,1)");
    cmd->add_option("--beta", c.beta, "fractional time order in (0,1)");
    cmd->add_option("--epsilon", [&c](const std::vector<std::string>& v) {
        c.epsilon = std::stod(v[0]);
        return true;
    }, "sector slack (default: calibrated from alpha+beta)");
    cmd->add_option("--theta", [&c](const std::vector<std::string>& v) {
        c.theta = std::stod(v[0]);
        return true;
    }, "contour angle (default 0.6767)");
    cmd->add_option("--t0", [&c](const std::vector<std::string>& v) {
        c.t0 = std::stod(v[0]);
        return true;
    }, "window start (default 0.1)");
    cmd->add_option("--lambda", [&c](const std::vector<std::string>& v) {
        c.lambda = std::stod(v[0]);
        return true;
    }, "window ratio (default per case)");
    cmd->add_option("--threads", c.opts.threads,
                    "parallel node-solve width (0 = all cores)");
    cmd->add_option("--cache-dir", c.opts.cache_dir,
                    "reference cache directory (or CIM_CACHE_DIR)");
    cmd->add_flag("--no-cache", [&c](std::int64_t) { c.opts.use_cache = false; },
                  "recompute references instead of using the cache");
    cmd->add_flag("--verbose", c.opts.verbose, "print solve/cache counters");
}

void emit(const ErrorTable& table, const std::string& out_path) {
    if (out_path.empty())
        std::cout << table_to_csv(table);
    else
        write_csv(table, out_path);
}

void report_stats(const CommonArgs& c, const RunStats& stats) {
    if (!c.opts.verbose) return;
    std::cerr << "node solves: " << stats.node_solves
              << ", cache hits: " << stats.cache_hits
              << ", cache writes: " << stats.cache_writes << "\n";
}

int cmd_solve(const CommonArgs& c, int n_nodes, const std::string& h_str,
              std::vector<double> times, int n_cheb,
              const std::string& out_path) {
    ExperimentCase cs = build_case(c);
    RunOptions opts = c.opts;
    opts.n_cheb = n_cheb;
    if (times.empty()) times = {cs.table_time};
    RunStats stats;
    double h = cs.dimension == 0 ? 0.0 : parse_h(h_str.empty() ? "1/128" : h_str);
    auto samples = run_case(cs, n_nodes, h, times, opts, &stats);

    std::ostringstream body;
    if (cs.dimension == 0) {
        body << "t,u\n";
        for (const auto& s : samples)
            body << s.t << ',' << std::setprecision(17) << s.u[0] << "\n";
        for (const auto& s : samples)
            std::cerr << "t=" << s.t
                      << "  abs error vs exact: " << std::scientific
                      << std::abs(s.u[0] - cs.exact_scalar(s.t)) << "\n";
    } else {
        Mesh mesh = build_mesh(cs.dimension, h);
        body << (cs.dimension == 1 ? "x" : "x,y");
        for (const auto& s : samples) body << ",u(t=" << s.t << ")";
        body << "\n";
        body << std::setprecision(17);
        for (int i = 0; i < mesh.interior_count(); ++i) {
            body << mesh.node_x(i);
            if (cs.dimension == 2) body << ',' << mesh.node_y(i);
            for (const auto& s : samples) body << ',' << s.u[i];
            body << "\n";
        }
        if (cs.exact_for_spatial) {
            for (const auto& s : samples) {
                double worst = 0.0;
                for (int i = 0; i < mesh.interior_count(); ++i)
                    worst = std::max(worst,
                                     std::abs(s.u[i] - cs.exact_value(
                                                           mesh.node_x(i), s.t)));
                std::cerr << "t=" << s.t << "  max nodal error vs exact: "
                          << std::scientific << worst << "\n";
            }
        }
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw UsageError("cannot open output file " + out_path);
        f << body.str();
    }
    report_stats(c, stats);
    return 0;
}

int cmd_check() {
    auto results = run_property_checks();
    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("%-24s %s  (measured %.3e)%s%s\n", r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.measured,
                    r.detail.empty() ? "" : "  ", r.detail.c_str());
        all_ok = all_ok && r.passed;
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contour-integral solver for time-fractional "
                 "integro-differential equations"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    CommonArgs c;

    auto* solve = app.add_subcommand("solve", "solve one case and emit samples");
    int n_nodes = 60, n_cheb = 0;
    std::string h_str, out_path;
    std::vector<double> times;
    add_common(solve, c);
    solve->add_option("--N", n_nodes, "quadrature node count");
    solve->add_option("--h", h_str, "mesh size (1/128 or 0.0078125)");
    solve->add_option("--t", times, "evaluation times")->delimiter(',');
    solve->add_option("--n-cheb", n_cheb,
                      "barycentric acceleration degree (0 = off)");
    solve->add_option("-o,--output", out_path, "output CSV path");

    auto* ttab = app.add_subcommand("table-temporal",
                                    "Err_tau(N) table at fixed h");
    std::vector<int> n_list{20, 40, 60, 80, 100};
    std::string h_tab, out_t;
    add_common(ttab, c);
    ttab->add_option("--N-list", n_list, "node counts")->delimiter(',');
    ttab->add_option("--h", h_tab, "mesh size");
    ttab->add_option("-o,--output", out_t, "output CSV path");

    auto* stab = app.add_subcommand("table-spatial",
                                    "Err_h table at fixed N, with orders");
    std::vector<std::string> h_list{"1/32", "1/64", "1/128", "1/256"};
    std::string h_ref, out_s;
    int n_fixed = 200;
    bool extrapolate = false;
    add_common(stab, c);
    stab->add_option("--h-list", h_list, "mesh sizes")->delimiter(',');
    stab->add_option("--N", n_fixed, "node count");
    stab->add_option("--h-ref", h_ref,
                     "reference mesh (reference-based cases)");
    stab->add_flag("--extrapolate-ref", extrapolate,
                   "Richardson-extrapolated ground truth");
    stab->add_option("-o,--output", out_s, "output CSV path");

    auto* refc = app.add_subcommand("reference", "populate the reference cache");
    int ref_n = 0;
    std::string ref_h;
    std::vector<double> ref_times;
    add_common(refc, c);
    refc->add_option("--N", ref_n, "reference node count (default per case)");
    refc->add_option("--h", ref_h, "reference mesh size");
    refc->add_option("--t", ref_times, "times to tabulate")->delimiter(',');

    auto* chk = app.add_subcommand("check", "run the built-in property suite");
    (void)chk;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed())
            return cmd_solve(c, n_nodes, h_str, times, n_cheb, out_path);
        if (ttab->parsed()) {
            ExperimentCase cs = build_case(c);
            if (h_tab.empty() && cs.dimension != 0)
                throw UsageError("table-temporal needs --h");
            RunStats stats;
            ErrorTable table = temporal_error_table(
                cs, n_list, cs.dimension == 0 ? 0.0 : parse_h(h_tab), c.opts,
                &stats);
            emit(table, out_t);
            report_stats(c, stats);
            return 0;
        }
        if (stab->parsed()) {
            ExperimentCase cs = build_case(c);
            RunOptions opts = c.opts;
            opts.extrapolate_reference = extrapolate;
            auto hs = parse_h_list(h_list);
            double href = 0.0;
            if (!h_ref.empty()) {
                href = parse_h(h_ref);
            } else if (!cs.exact_for_spatial) {
                href = *std::min_element(hs.begin(), hs.end()) / 8.0;
            }
            RunStats stats;
            ErrorTable table = spatial_error_table(cs, hs, n_fixed, href, opts,
                                                   &stats);
            emit(table, out_s);
            report_stats(c, stats);
            return 0;
        }
        if (refc->parsed()) {
            ExperimentCase cs = build_case(c);
            int n = ref_n > 0 ? ref_n : cs.n_ref;
            if (ref_h.empty()) throw UsageError("reference needs --h");
            RunStats stats;
            std::vector<double> ts =
                ref_times.empty() ? window_times(cs) : ref_times;
            reference_solution(cs, n, parse_h(ref_h), ts, c.opts, &stats);
            report_stats(c, stats);
            return 0;
        }
        if (chk->parsed()) return cmd_check();
    } catch (const UsageError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const BadMeshSize& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const NonPositiveStrip& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const OutOfWindow& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const CacheCorrupt& e) {
        std::cerr << "error: cache: " << e.what() << "\n";
        return 4;
    } catch (const SolveFailure& e) {
        std::cerr << "error: solve: " << e.what() << "\n";
        return 3;
    } catch (const ResolventSingular& e) {
        std::cerr << "error: solve: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
