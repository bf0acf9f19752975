#include "cimfrac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "cimfrac/errors.hpp"

namespace cimfrac {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_param_h(double h) {
    double inv = 1.0 / h;
    long den = std::lround(inv);
    if (std::abs(inv - den) < 1e-9 * inv) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "1/%ld", den);
        return buf;
    }
    return fmt17(h);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

CaseId parse_case_id(const std::string& name) {
    if (name == "scalar_ex1") return CaseId::scalar_ex1;
    if (name == "homog_1d_ex2") return CaseId::homog_1d_ex2;
    if (name == "homog_2d_ex2") return CaseId::homog_2d_ex2;
    if (name == "nonhomog_1d_ex3") return CaseId::nonhomog_1d_ex3;
    if (name == "nonhomog_2d_ex3") return CaseId::nonhomog_2d_ex3;
    if (name == "nonsmooth_1d_ex4") return CaseId::nonsmooth_1d_ex4;
    throw UsageError("unknown case id: " + name);
}

std::string case_name(CaseId id) {
    switch (id) {
        case CaseId::scalar_ex1: return "scalar_ex1";
        case CaseId::homog_1d_ex2: return "homog_1d_ex2";
        case CaseId::homog_2d_ex2: return "homog_2d_ex2";
        case CaseId::nonhomog_1d_ex3: return "nonhomog_1d_ex3";
        case CaseId::nonhomog_2d_ex3: return "nonhomog_2d_ex3";
        case CaseId::nonsmooth_1d_ex4: return "nonsmooth_1d_ex4";
    }
    throw UsageError("bad case id");
}

ExperimentCase make_case(CaseId id, double alpha, double beta,
                         std::optional<double> epsilon) {
    FractionalOrders orders =
        epsilon ? FractionalOrders(alpha, beta, *epsilon)
                : FractionalOrders(alpha, beta);
    ExperimentCase cs{id,  orders, 1,   kDefaultTheta, kDefaultT0,
                      10.0, 0.4,   200, false,         0.0};
    switch (id) {
        case CaseId::scalar_ex1:
            cs.dimension = 0;
            cs.table_time = 0.5;
            break;
        case CaseId::homog_1d_ex2:
            break;
        case CaseId::homog_2d_ex2:
            cs.dimension = 2;
            break;
        case CaseId::nonhomog_1d_ex3:
            cs.table_time = 0.6;
            cs.exact_for_spatial = true;
            break;
        case CaseId::nonhomog_2d_ex3:
            cs.dimension = 2;
            cs.table_time = 0.6;
            break;
        case CaseId::nonsmooth_1d_ex4:
            cs.lambda = 5.0;
            cs.table_time = 0.5;
            cs.exact_for_spatial = true;
            cs.lift = 1.0;
            break;
    }
    return cs;
}

double ExperimentCase::exact_scalar(double t) const {
    if (id != CaseId::scalar_ex1)
        throw MissingReference("no exact scalar solution for this case");
    return 1.0 + 1.5 * std::sqrt(kPi) * t;
}

double ExperimentCase::exact_value(double x, double t) const {
    switch (id) {
        case CaseId::nonhomog_1d_ex3: return t * x * (1.0 - x);
        case CaseId::nonsmooth_1d_ex4:
            return 1.0 + std::pow(t, 1.0 / 6.0) * x * (1.0 - x);
        default:
            throw MissingReference("no exact solution for this case");
    }
}

namespace {

struct Pipeline {
    FemSystem sys;
    FeVec u0h;
    TransformedSource src;
};

ScalarTransform scalar_ex1_fhat(const FractionalOrders& o) {
    double c = 1.5 * std::sqrt(kPi);
    double a = o.alpha, b = o.beta;
    return [c, a, b](Complex z) {
        return 1.0 / z +
               c * (std::pow(z, -2.0) + std::pow(z, b - 2.0) +
                    std::pow(z, -a - 2.0)) +
               std::pow(z, -a - 1.0);
    };
}

Pipeline build_pipeline(const ExperimentCase& cs, double h) {
    Pipeline p;
    p.sys = assemble(build_mesh(cs.dimension, h));
    double a = cs.orders.alpha, b = cs.orders.beta;
    switch (cs.id) {
        case CaseId::homog_1d_ex2: {
            double scale = kPi * kPi * kPi;
            p.u0h = l2_project_load(p.sys,
                                    load_indicator_1d(p.sys, 2.0 / 3.0, scale));
            break;
        }
        case CaseId::homog_2d_ex2:
            p.u0h = l2_project_load(
                p.sys, load_indicator_halfplane(p.sys, 0.5, 1.0));
            break;
        case CaseId::nonhomog_1d_ex3: {
            FeVec pg = l2_project(p.sys, [](double x) { return x * (1 - x); });
            FeVec p1 = l2_project(p.sys, [](double) { return 1.0; });
            PowerLawSource src;
            src.add(pg, 1.0 / std::tgamma(2.0 - b), 1.0 - b);
            src.add(p1, 2.0, 1.0);
            src.add(p1, 2.0 / std::tgamma(a + 2.0), a + 1.0);
            p.src = transform_source(src);
            break;
        }
        case CaseId::nonhomog_2d_ex3: {
            FeVec p1 = l2_project(p.sys, [](double, double) { return 1.0; });
            PowerLawSource src;
            src.add(p1, 1.0, 0.0);
            p.src = transform_source(src);
            break;
        }
        case CaseId::nonsmooth_1d_ex4: {
            // Constant lift: u = 1 + w, w solves the homogeneous-Dirichlet
            // problem with zero data and the printed source minus its leading 1.
            FeVec pg = l2_project(p.sys, [](double x) { return x * (1 - x); });
            FeVec p1 = l2_project(p.sys, [](double) { return 1.0; });
            double g76 = std::tgamma(7.0 / 6.0);
            PowerLawSource src;
            src.add(pg, g76 / std::tgamma(7.0 / 6.0 - b), 1.0 / 6.0 - b);
            src.add(p1, 2.0, 1.0 / 6.0);
            src.add(p1, 2.0 * g76 / std::tgamma(a + 7.0 / 6.0), a + 1.0 / 6.0);
            p.src = transform_source(src);
            break;
        }
        case CaseId::scalar_ex1:
            throw UsageError("scalar case has no spatial pipeline");
    }
    return p;
}

std::vector<TimeSample> run_pipeline(const ExperimentCase& cs, Pipeline& pipe,
                                     int n_nodes,
                                     const std::vector<double>& times,
                                     const RunOptions& opts, RunStats* stats) {
    ContourPlan plan =
        make_plan(cs.orders, cs.theta, cs.t0, cs.lambda, n_nodes);
    NodeSolutionSet ns;
    if (opts.n_cheb > 0) {
        ns = accelerate(cs.orders, plan, pipe.sys, pipe.u0h, pipe.src,
                        opts.n_cheb, opts.threads);
        if (stats) stats->node_solves += opts.n_cheb + 1;
    } else {
        ns = solve_nodes(cs.orders, plan, pipe.sys, pipe.u0h, pipe.src,
                         opts.threads);
        if (stats) stats->node_solves += n_nodes;
    }
    std::vector<TimeSample> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(evaluate(ns, t));
    return out;
}

std::vector<TimeSample> run_scalar(const ExperimentCase& cs, int n_nodes,
                                   const std::vector<double>& times,
                                   RunStats* stats) {
    ContourPlan plan =
        make_plan(cs.orders, cs.theta, cs.t0, cs.lambda, n_nodes);
    ScalarSolution ss =
        solve_nodes_scalar(cs.orders, plan, 1.0, scalar_ex1_fhat(cs.orders));
    if (stats) stats->node_solves += n_nodes;
    std::vector<TimeSample> out;
    for (double t : times) out.push_back({t, {evaluate_scalar(ss, t)}});
    return out;
}

void apply_lift(const ExperimentCase& cs, std::vector<TimeSample>& samples) {
    if (cs.lift == 0.0) return;
    for (auto& s : samples)
        for (double& v : s.u) v += cs.lift;
}

}  // namespace

std::vector<double> window_times(const ExperimentCase& cs) {
    std::vector<double> ts;
    double t1 = cs.lambda * cs.t0;
    for (int i = 0; i < 16; ++i)
        ts.push_back(cs.t0 + (t1 - cs.t0) * i / 15.0);
    ts.push_back(cs.table_time);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

std::vector<TimeSample> run_case(const ExperimentCase& cs, int n_nodes,
                                 double h, const std::vector<double>& times,
                                 const RunOptions& opts, RunStats* stats) {
    if (cs.dimension == 0) return run_scalar(cs, n_nodes, times, stats);
    Pipeline pipe = build_pipeline(cs, h);
    auto samples = run_pipeline(cs, pipe, n_nodes, times, opts, stats);
    apply_lift(cs, samples);
    return samples;
}

// ---------------------------------------------------------------------------
// Reference cache
// ---------------------------------------------------------------------------

namespace {

std::string cache_dir_or_default(const RunOptions& opts) {
    if (!opts.cache_dir.empty()) return opts.cache_dir;
    if (const char* env = std::getenv("CIM_CACHE_DIR"); env && *env)
        return env;
    return "cim-cache";
}

std::string content_hash(const ExperimentCase& cs, int n_ref, double h) {
    std::ostringstream key;
    key << case_name(cs.id) << '|' << fmt17(cs.orders.alpha) << '|'
        << fmt17(cs.orders.beta) << '|' << fmt17(cs.theta) << '|'
        << fmt17(cs.orders.epsilon) << '|' << fmt17(cs.t0) << '|'
        << fmt17(cs.lambda) << '|' << n_ref << '|' << fmt17(h);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(key.str())));
    return buf;
}

fs::path cache_path(const ExperimentCase& cs, int n_ref, double h,
                    const RunOptions& opts) {
    return fs::path(cache_dir_or_default(opts)) /
           (case_name(cs.id) + "-" + content_hash(cs, n_ref, h) + ".cache");
}

bool load_cache(const fs::path& path, const std::string& hash,
                std::map<double, FeVec>& out) {
    std::ifstream in(path);
    if (!in) return false;
    std::string header;
    if (!std::getline(in, header)) throw CacheCorrupt("empty cache file");
    if (header != "#cim-cache v1 " + hash)
        throw CacheCorrupt("cache header mismatch: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!std::getline(ls, tok, ','))
            throw CacheCorrupt("bad cache row in " + path.string());
        FeVec vals;
        double t = std::strtod(tok.c_str(), nullptr);
        while (std::getline(ls, tok, ','))
            vals.push_back(std::strtod(tok.c_str(), nullptr));
        if (vals.empty()) throw CacheCorrupt("empty cache row");
        out[t] = std::move(vals);
    }
    return true;
}

void store_cache(const fs::path& path, const std::string& hash,
                 const std::map<double, FeVec>& samples) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream outf(tmp);
        if (!outf) throw CacheCorrupt("cannot write " + tmp.string());
        outf << "#cim-cache v1 " << hash << "\n";
        for (const auto& [t, vals] : samples) {
            outf << fmt17(t);
            for (double v : vals) outf << ',' << fmt17(v);
            outf << "\n";
        }
    }
    fs::rename(tmp, path);
}

}  // namespace

std::vector<TimeSample> reference_solution(const ExperimentCase& cs, int n_ref,
                                           double h,
                                           const std::vector<double>& times,
                                           const RunOptions& opts,
                                           RunStats* stats) {
    if (cs.dimension == 0) {
        return run_scalar(cs, n_ref, times, stats);
    }
    std::string hash = content_hash(cs, n_ref, h);
    fs::path path = cache_path(cs, n_ref, h, opts);

    std::map<double, FeVec> cached;
    bool have_file = opts.use_cache && load_cache(path, hash, cached);
    bool complete = have_file;
    for (double t : times)
        if (!cached.count(t)) complete = false;

    if (!complete) {
        std::vector<double> to_run = times;
        for (const auto& [t, v] : cached) to_run.push_back(t);
        std::sort(to_run.begin(), to_run.end());
        to_run.erase(std::unique(to_run.begin(), to_run.end()), to_run.end());
        auto samples = run_case(cs, n_ref, h, to_run, opts, stats);
        for (const auto& s : samples) cached[s.t] = s.u;
        if (opts.use_cache) {
            store_cache(path, hash, cached);
            if (stats) stats->cache_writes++;
        }
    } else if (stats) {
        stats->cache_hits++;
    }

    std::vector<TimeSample> out;
    out.reserve(times.size());
    for (double t : times) out.push_back({t, cached.at(t)});
    return out;
}

// ---------------------------------------------------------------------------
// Error tables
// ---------------------------------------------------------------------------

namespace {

double diff_norm(const FemSystem& sys, const FeVec& a, const FeVec& b) {
    FeVec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return l2_norm(sys, d);
}

ErrorTable table_shell(const ExperimentCase& cs) {
    ErrorTable t;
    t.case_id = case_name(cs.id);
    t.alpha = cs.orders.alpha;
    t.beta = cs.orders.beta;
    t.t = cs.table_time;
    t.lambda = cs.lambda;
    return t;
}

}  // namespace

ErrorTable temporal_error_table(const ExperimentCase& cs,
                                const std::vector<int>& n_values, double h,
                                const RunOptions& opts, RunStats* stats) {
    ErrorTable table = table_shell(cs);
    table.fixed = cs.dimension == 0 ? "scalar" : "h=" + fmt_param_h(h);
    std::vector<double> times = window_times(cs);

    if (cs.dimension == 0) {
        for (int n : n_values) {
            auto samples = run_scalar(cs, n, times, stats);
            double worst = 0.0, at_t = 0.0;
            for (const auto& s : samples) {
                double e = std::abs(s.u[0] - cs.exact_scalar(s.t));
                worst = std::max(worst, e);
                if (s.t == cs.table_time) at_t = e;
            }
            table.rows.push_back({std::to_string(n), worst, std::nullopt, at_t});
        }
        return table;
    }

    auto ref = reference_solution(cs, cs.n_ref, h, times, opts, stats);
    Pipeline pipe = build_pipeline(cs, h);
    for (int n : n_values) {
        auto samples = run_pipeline(cs, pipe, n, times, opts, stats);
        double worst = 0.0, at_t = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            // The lift cancels in the difference; compare in the w frame.
            FeVec refw = ref[i].u;
            if (cs.lift != 0.0)
                for (double& v : refw) v -= cs.lift;
            double e = diff_norm(pipe.sys, samples[i].u, refw);
            worst = std::max(worst, e);
            if (times[i] == cs.table_time) at_t = e;
        }
        table.rows.push_back({std::to_string(n), worst, std::nullopt, at_t});
    }
    return table;
}

ErrorTable spatial_error_table(const ExperimentCase& cs,
                               const std::vector<double>& h_values,
                               int n_nodes, double h_ref,
                               const RunOptions& opts, RunStats* stats) {
    if (cs.dimension == 0)
        throw UsageError("scalar case has no spatial table");
    ErrorTable table = table_shell(cs);
    table.fixed = "N=" + std::to_string(n_nodes);
    double t = cs.table_time;

    std::vector<double> errors;
    if (cs.exact_for_spatial) {
        for (double h : h_values) {
            Pipeline pipe = build_pipeline(cs, h);
            auto samples = run_pipeline(cs, pipe, n_nodes, {t}, opts, stats);
            // Compare in the w frame against exact minus lift.
            double lift = cs.lift;
            const ExperimentCase* pc = &cs;
            errors.push_back(l2_error_against(
                pipe.sys, samples[0].u,
                [pc, lift, t](double x) { return pc->exact_value(x, t) - lift; }));
        }
    } else {
        if (!(h_ref > 0.0) || h_ref >= *std::min_element(h_values.begin(),
                                                         h_values.end()))
            throw MissingReference("reference mesh must be finer than every row");
        auto ref = reference_solution(cs, cs.n_ref, h_ref, {t}, opts, stats);
        Mesh ref_mesh = build_mesh(cs.dimension, h_ref);
        FemSystem ref_sys = assemble(ref_mesh);
        FeVec truth = ref[0].u;
        if (opts.extrapolate_reference) {
            auto parent =
                reference_solution(cs, cs.n_ref, 2.0 * h_ref, {t}, opts, stats);
            Mesh parent_mesh = build_mesh(cs.dimension, 2.0 * h_ref);
            FeVec up = prolong(parent_mesh, parent[0].u, 1);
            for (std::size_t i = 0; i < truth.size(); ++i)
                truth[i] = (4.0 * truth[i] - up[i]) / 3.0;
        }
        for (double h : h_values) {
            Pipeline pipe = build_pipeline(cs, h);
            auto samples = run_pipeline(cs, pipe, n_nodes, {t}, opts, stats);
            int levels = static_cast<int>(std::lround(std::log2(h / h_ref)));
            FeVec up = prolong(pipe.sys.mesh, samples[0].u, levels);
            errors.push_back(diff_norm(ref_sys, up, truth));
        }
    }

    for (std::size_t i = 0; i < h_values.size(); ++i) {
        std::optional<double> order;
        if (i > 0) order = std::log(errors[i - 1] / errors[i]) / std::log(2.0);
        table.rows.push_back(
            {fmt_param_h(h_values[i]), errors[i], order, std::nullopt});
    }
    return table;
}

std::string table_to_csv(const ErrorTable& table) {
    std::ostringstream out;
    out << "param,error,order\n";
    for (const auto& row : table.rows) {
        out << row.param << ',' << fmt17(row.error) << ',';
        if (row.order) out << fmt17(*row.order);
        out << "\n";
    }
    return out.str();
}

void write_csv(const ErrorTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open output file " + path);
    out << table_to_csv(table);
}

// ---------------------------------------------------------------------------
// Property suite
// ---------------------------------------------------------------------------

namespace {

using Props = std::vector<PropertyResult>;

void push(Props& out, const std::string& name, bool ok, double measured,
          const std::string& detail = "") {
    out.push_back({name, ok, measured, detail});
}

}  // namespace

std::vector<PropertyResult> run_property_checks() {
    Props out;
    std::mt19937_64 rng(0x5eed);

    // Kernel identity and Lemma-2(a) sector of m(z).
    {
        FractionalOrders orders(0.4, 0.25);
        double worst = 0.0, worst_arg = 0.0;
        bool sector_ok = true;
        double zeta = (orders.sum() + orders.epsilon) * kPi / 2.0;
        std::uniform_real_distribution<double> ur(-3.0, 3.0);
        std::uniform_real_distribution<double> ua(-0.999, 0.999);
        for (int i = 0; i < 1000; ++i) {
            double r = std::pow(10.0, ur(rng));
            double psi = ua(rng) * orders.sector_angle();
            Complex z = std::polar(r, psi);
            KernelValue k = kernel(z, orders);
            Complex lhs = k.m * (std::pow(z, orders.alpha) + 1.0);
            Complex rhs = std::pow(z, orders.sum());
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
            if (zeta < kPi) {
                double am = std::abs(std::arg(k.m));
                worst_arg = std::max(worst_arg, am);
                if (am >= zeta) sector_ok = false;
            }
        }
        push(out, "kernel-identity", worst <= 1e-13, worst,
             "max rel |m(z^a+1)-z^(a+b)|");
        push(out, "kernel-sector", sector_ok, worst_arg,
             "max |arg m| vs zeta");
    }

    // Conjugate symmetry of kernel, transform and scalar resolvent.
    {
        FractionalOrders orders(0.2, 0.77);
        auto fhat = scalar_ex1_fhat(orders);
        double worst = 0.0;
        std::uniform_real_distribution<double> ur(0.1, 5.0);
        std::uniform_real_distribution<double> ui(0.1, 5.0);
        for (int i = 0; i < 200; ++i) {
            Complex z(ur(rng), ui(rng));
            Complex a = kernel(std::conj(z), orders).m -
                        std::conj(kernel(z, orders).m);
            Complex b = fhat(std::conj(z)) - std::conj(fhat(z));
            Complex c = scalar_resolvent(std::conj(z), orders, 1.0,
                                         fhat(std::conj(z))) -
                        std::conj(scalar_resolvent(z, orders, 1.0, fhat(z)));
            worst = std::max({worst, std::abs(a), std::abs(b), std::abs(c)});
        }
        push(out, "conjugate-symmetry", worst <= 1e-12, worst,
             "max |f(conj z) - conj f(z)|");
    }

    // Hyperbola identity, sector containment, decay ordering, plan identities.
    {
        FractionalOrders orders(0.5, 0.5);
        ContourPlan plan =
            make_plan(orders, kDefaultTheta, kDefaultT0, 10.0, 60);
        QuadratureNodes q = nodes(plan);
        double worst = 0.0;
        bool sector_ok = true, decay_ok = true;
        double ttheta = orders.sector_angle();
        double mu2 = plan.mu * plan.mu;
        for (std::size_t k = 0; k < q.size(); ++k) {
            double a = (q.z[k].real() - plan.mu) / std::sin(plan.theta);
            double b = q.z[k].imag() / std::cos(plan.theta);
            double res = std::abs((a - b) * (a + b) - mu2);
            // relative to the operand scale; the identity is ill-conditioned
            // in the far tail where a, b ~ mu*e^phi/2 cancel
            worst = std::max(worst, res / (mu2 + a * a + b * b));
            if (std::cosh(q.phi[k]) <= 10.0)
                worst = std::max(worst, res / mu2);
            if (std::abs(std::arg(q.z[k])) >= ttheta) sector_ok = false;
            if (k > 0 && q.z[k].real() >= q.z[k - 1].real()) decay_ok = false;
        }
        push(out, "hyperbola-identity", worst <= 1e-12, worst,
             "max rel deviation from Eq. of the branch");
        push(out, "sector-containment", sector_ok, ttheta, "");
        push(out, "decay-ordering", decay_ok, 0.0, "Re z_k strictly decreasing");

        double p = p_of_eta(plan.eta_star, plan.lambda, plan.theta, plan.c_work);
        double id1 = std::abs(plan.tau * plan.n_nodes - p) / p;
        double id2 = std::abs(2.0 * kPi * plan.c_work /
                                  (plan.mu * plan.tau * plan.t0) -
                              plan.lambda / (1.0 - plan.eta_star)) /
                     (plan.lambda / (1.0 - plan.eta_star));
        push(out, "plan-identities", id1 <= 1e-12 && id2 <= 1e-12,
             std::max(id1, id2), "tau*N = P and mu*tau*t0 identity");
    }

    // Grid-global optimality of eta*.
    {
        double lambda = 10.0, theta = kDefaultTheta, cw = 0.4;
        EtaOptimum opt = optimize_eta(lambda, theta, cw);
        bool ok = true;
        double q_at = 0.0;
        for (int i = 0; i < 4096; ++i) {
            double eta = 0.001 + (0.999 - 0.001) * i / 4095.0;
            double q = 2.0 * kPi * cw * eta / p_of_eta(eta, lambda, theta, cw);
            q_at = std::max(q_at, q);
            if (q > opt.q_star + 1e-12) ok = false;
        }
        // Longer windows decay slower.
        EtaOptimum opt20 = optimize_eta(20.0, theta, cw);
        push(out, "eta-grid-optimality", ok && opt20.q_star < opt.q_star,
             opt.q_star, "Q(eta*) dominates the grid; Q drops with lambda");
    }

    // Half-sum equals the mirrored full midpoint sum (5-node scalar case).
    {
        FractionalOrders orders(0.5, 0.5);
        ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 5.0, 5);
        auto fhat = scalar_ex1_fhat(orders);
        ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, fhat);
        double t = 0.3;
        double half = evaluate_scalar(ss, t);
        Complex full(0.0);
        const Complex i2pi(0.0, 2.0 * kPi);
        for (int k = plan.n_nodes - 1; k >= 0; --k) {
            Complex term =
                std::exp(ss.quad.z[k] * t) * ss.values[k] * ss.quad.dz[k];
            Complex zm = std::conj(ss.quad.z[k]);
            Complex um = std::conj(ss.values[k]);
            Complex dzm = -std::conj(ss.quad.dz[k]);
            full += term + std::exp(zm * t) * um * dzm;
        }
        full *= plan.tau / i2pi;
        double rel = std::abs(full - half) / std::abs(half);
        push(out, "half-sum-equivalence", rel <= 1e-13, rel,
             "half sum vs mirrored 2N-term sum");
    }

    // Scalar resolvent vs the 1x1 FEM system with M = K = 1.
    {
        FractionalOrders orders(0.2, 0.77);
        ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 40);
        auto fhat = scalar_ex1_fhat(orders);
        ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, fhat);
        FemSystem unit = FemSystem::scalar_system();
        FeVec u0h{1.0};
        TransformedSource src(
            [&fhat](Complex z, std::vector<Complex>& v) { v[0] = fhat(z); }, 1);
        NodeSolutionSet ns = solve_nodes(orders, plan, unit, u0h, src, 1);
        double worst = 0.0;
        for (int k = 0; k < plan.n_nodes; ++k)
            worst = std::max(worst,
                             std::abs(ns.solutions[k][0] - ss.values[k]) /
                                 std::abs(ss.values[k]));
        push(out, "scalar-vs-1x1-fem", worst <= 1e-14, worst,
             "two resolvent routes agree");
    }

    // Hand-assembled coarse systems.
    {
        FemSystem s1 = assemble(build_mesh(1, 0.5));
        FemSystem s2 = assemble(build_mesh(2, 0.5));
        double k1 = s1.stiffness.coeff(0, 0), m1 = s1.mass.coeff(0, 0);
        double k2 = s2.stiffness.coeff(0, 0), m2 = s2.mass.coeff(0, 0);
        bool ok = std::abs(k1 - 4.0) <= 1e-14 &&
                  std::abs(m1 - 1.0 / 3.0) <= 1e-15 &&
                  std::abs(k2 - 4.0) <= 1e-14 &&
                  std::abs(m2 - 0.125) <= 1e-15;
        push(out, "fem-hand-assembly", ok,
             std::max(std::abs(k2 - 4.0), std::abs(m2 - 0.125)),
             "h=1/2 systems match hand integrals");
    }

    // L2-projection converges at second order for smooth data.
    {
        auto data1 = [](double x) { return std::sin(kPi * x); };
        double e_prev = 0.0;
        bool ok = true;
        double measured = 0.0;
        for (int k = 4; k <= 6; ++k) {
            FemSystem sys = assemble(build_mesh(1, 1.0 / (1 << k)));
            FeVec ph = l2_project(sys, data1);
            double e = l2_error_against(sys, ph, data1);
            if (k > 4) {
                measured = std::log2(e_prev / e);
                if (measured < 1.9 || measured > 2.1) ok = false;
            }
            e_prev = e;
        }
        push(out, "projection-order-2", ok, measured, "1-D sine projection");
    }

    return out;
}

}  // namespace cimfrac
