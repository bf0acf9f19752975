#include "cimfrac/cim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cimfrac/errors.hpp"
#include "cimfrac/parallel.hpp"

namespace cimfrac {

namespace {
constexpr double kPi = std::numbers::pi;
}

NodeSolutionSet solve_nodes(const FractionalOrders& orders,
                            const ContourPlan& plan, const FemSystem& sys,
                            const FeVec& u0h, const TransformedSource& src,
                            int threads) {
    NodeSolutionSet out;
    out.plan = plan;
    out.quad = nodes(plan);
    out.solutions.resize(plan.n_nodes);

    FeVecC u0m;
    if (!u0h.empty()) {
        FeVec m = mass_apply(sys, u0h);
        u0m.assign(m.begin(), m.end());
    }

    parallel_for(out.quad.size(), threads, [&](std::size_t k) {
        Complex z = out.quad.z[k];
        try {
            ShiftedOperator op(sys, z, orders);
            FeVecC fh;
            if (!src.empty()) src.evaluate_into(z, fh);
            out.solutions[k] = op.solve(u0m, fh);
        } catch (const SolveFailure& e) {
            throw SolveFailure("node " + std::to_string(k) + " (z = " +
                               std::to_string(z.real()) + " + " +
                               std::to_string(z.imag()) + "i): " + e.what());
        }
    });
    return out;
}

TimeSample evaluate(const NodeSolutionSet& ns, double t) {
    if (!ns.plan.contains(t))
        throw OutOfWindow("t = " + std::to_string(t) +
                          " outside [t0, lambda*t0]");
    std::size_t n = ns.solutions.empty() ? 0 : ns.solutions[0].size();
    FeVecC acc(n, Complex(0));
    for (int k = ns.plan.n_nodes - 1; k >= 0; --k) {
        Complex w = std::exp(ns.quad.z[k] * t) * ns.quad.dz[k];
        const FeVecC& sol = ns.solutions[k];
        for (std::size_t i = 0; i < n; ++i) acc[i] += w * sol[i];
    }
    TimeSample sample;
    sample.t = t;
    sample.u.resize(n);
    double scale = ns.plan.tau / kPi;
    for (std::size_t i = 0; i < n; ++i) sample.u[i] = scale * acc[i].imag();
    return sample;
}

std::vector<double> chebyshev_lobatto_points(int n_cheb, double lo, double hi) {
    std::vector<double> pts(n_cheb + 1);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int j = 0; j <= n_cheb; ++j)
        pts[j] = mid + half * std::cos(j * kPi / n_cheb);
    return pts;
}

NodeSolutionSet accelerate_at(const FractionalOrders& orders,
                              const ContourPlan& plan, const FemSystem& sys,
                              const FeVec& u0h, const TransformedSource& src,
                              std::span<const double> phi_pts, int threads) {
    int np = static_cast<int>(phi_pts.size());
    if (np < 4 || np > plan.n_nodes)
        throw DomainError("need 4 <= n_cheb+1 <= N interpolation points");

    NodeSolutionSet out;
    out.plan = plan;
    out.quad = nodes(plan);
    out.solutions.resize(plan.n_nodes);

    FeVecC u0m;
    if (!u0h.empty()) {
        FeVec m = mass_apply(sys, u0h);
        u0m.assign(m.begin(), m.end());
    }

    std::vector<FeVecC> at_pts(np);
    parallel_for(np, threads, [&](std::size_t j) {
        Complex z = contour_point(plan, phi_pts[j]);
        ShiftedOperator op(sys, z, orders);
        FeVecC fh;
        if (!src.empty()) src.evaluate_into(z, fh);
        at_pts[j] = op.solve(u0m, fh);
    });

    out.solutions = barycentric_fill(phi_pts, at_pts, out.quad.phi);
    return out;
}

std::vector<FeVecC> barycentric_fill(std::span<const double> pts,
                                     const std::vector<FeVecC>& samples,
                                     std::span<const double> targets) {
    int np = static_cast<int>(pts.size());
    // weights normalized to dodge under/overflow for large n
    std::vector<double> w(np);
    double wmax = 0.0;
    for (int j = 0; j < np; ++j) {
        double prod = 1.0;
        for (int m = 0; m < np; ++m)
            if (m != j) prod *= pts[j] - pts[m];
        w[j] = 1.0 / prod;
        wmax = std::max(wmax, std::abs(w[j]));
    }
    for (double& v : w) v /= wmax;

    double span_scale = std::abs(pts.back() - pts.front());
    std::size_t nvec = samples.empty() ? 0 : samples[0].size();
    std::vector<FeVecC> out(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        double phi = targets[k];
        int hit = -1;
        for (int j = 0; j < np; ++j)
            if (std::abs(phi - pts[j]) <= 1e-13 * span_scale) {
                hit = j;
                break;
            }
        if (hit >= 0) {
            out[k] = samples[hit];
            continue;
        }
        FeVecC numer(nvec, Complex(0));
        double denom = 0.0;
        for (int j = 0; j < np; ++j) {
            double q = w[j] / (phi - pts[j]);
            denom += q;
            const FeVecC& uj = samples[j];
            for (std::size_t i = 0; i < nvec; ++i) numer[i] += q * uj[i];
        }
        for (std::size_t i = 0; i < nvec; ++i) numer[i] /= denom;
        out[k] = std::move(numer);
    }
    return out;
}

NodeSolutionSet accelerate(const FractionalOrders& orders,
                           const ContourPlan& plan, const FemSystem& sys,
                           const FeVec& u0h, const TransformedSource& src,
                           int n_cheb, int threads) {
    double lo = 0.5 * plan.tau;
    double hi = (plan.n_nodes - 0.5) * plan.tau;
    auto pts = chebyshev_lobatto_points(n_cheb, lo, hi);
    return accelerate_at(orders, plan, sys, u0h, src, pts, threads);
}

ScalarSolution solve_nodes_scalar(const FractionalOrders& orders,
                                  const ContourPlan& plan, double u0,
                                  const ScalarTransform& fhat) {
    ScalarSolution out;
    out.plan = plan;
    out.quad = nodes(plan);
    out.values.resize(plan.n_nodes);
    for (int k = 0; k < plan.n_nodes; ++k) {
        Complex z = out.quad.z[k];
        Complex fh = fhat ? fhat(z) : Complex(0);
        out.values[k] = scalar_resolvent(z, orders, u0, fh);
    }
    return out;
}

double evaluate_scalar(const ScalarSolution& ss, double t) {
    if (!ss.plan.contains(t))
        throw OutOfWindow("t = " + std::to_string(t) +
                          " outside [t0, lambda*t0]");
    Complex acc(0);
    for (int k = ss.plan.n_nodes - 1; k >= 0; --k)
        acc += std::exp(ss.quad.z[k] * t) * ss.values[k] * ss.quad.dz[k];
    return ss.plan.tau / kPi * acc.imag();
}

}  // namespace cimfrac
