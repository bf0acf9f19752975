#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cimfrac/cim.hpp"
#include "cimfrac/errors.hpp"

using namespace cimfrac;
namespace {

constexpr double kPi = std::numbers::pi;

ScalarTransform ex1_fhat(const FractionalOrders& o) {
    double c = 1.5 * std::sqrt(kPi);
    return [c, a = o.alpha, b = o.beta](Complex z) {
        return 1.0 / z +
               c * (std::pow(z, -2.0) + std::pow(z, b - 2.0) +
                    std::pow(z, -a - 2.0)) +
               std::pow(z, -a - 1.0);
    };
}

double ex1_exact(double t) { return 1.0 + 1.5 * std::sqrt(kPi) * t; }

}  // namespace

TEST_CASE("zero data gives the zero solution set") {
    FractionalOrders orders(0.5, 0.5);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 8);
    FemSystem sys = assemble(build_mesh(1, 1.0 / 8));
    NodeSolutionSet ns = solve_nodes(orders, plan, sys, FeVec(7, 0.0), {}, 1);
    for (const auto& sol : ns.solutions)
        for (auto v : sol) CHECK(std::abs(v) == 0.0);
    TimeSample s = evaluate(ns, 0.5);
    for (double v : s.u) CHECK(v == 0.0);
}

TEST_CASE("scalar route agrees with the 1x1 system route") {
    FractionalOrders orders(0.2, 0.77);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 50);
    auto fhat = ex1_fhat(orders);
    ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, fhat);
    FemSystem unit = FemSystem::scalar_system();
    TransformedSource src(
        [&fhat](Complex z, std::vector<Complex>& v) { v[0] = fhat(z); }, 1);
    NodeSolutionSet ns = solve_nodes(orders, plan, unit, FeVec{1.0}, src, 1);
    for (int k = 0; k < plan.n_nodes; ++k)
        CHECK(std::abs(ns.solutions[k][0] - ss.values[k]) <=
              1e-14 * std::abs(ss.values[k]));
}

TEST_CASE("parallel execution is deterministic") {
    FractionalOrders orders(0.4, 0.25);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 24);
    FemSystem sys = assemble(build_mesh(1, 1.0 / 32));
    FeVec u0h = l2_project_load(sys, load_indicator_1d(sys, 2.0 / 3.0, 1.0));
    NodeSolutionSet a = solve_nodes(orders, plan, sys, u0h, {}, 1);
    NodeSolutionSet b = solve_nodes(orders, plan, sys, u0h, {}, 4);
    for (int k = 0; k < plan.n_nodes; ++k)
        CHECK(a.solutions[k] == b.solutions[k]);
    CHECK(evaluate(a, 0.4).u == evaluate(b, 0.4).u);
}

TEST_CASE("evaluate: single term and window guard") {
    FractionalOrders orders(0.5, 0.5);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 1);
    ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, ex1_fhat(orders));
    double t = 0.25;
    Complex term = std::exp(ss.quad.z[0] * t) * ss.values[0] * ss.quad.dz[0];
    CHECK(evaluate_scalar(ss, t) ==
          doctest::Approx(plan.tau / kPi * term.imag()).epsilon(1e-15));
    CHECK_THROWS_AS(evaluate_scalar(ss, 0.05), OutOfWindow);
    CHECK_THROWS_AS(evaluate_scalar(ss, 1.5), OutOfWindow);
}

TEST_CASE("half sum equals the mirrored full midpoint sum") {
    FractionalOrders orders(0.5, 0.5);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 5.0, 5);
    ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, ex1_fhat(orders));
    for (double t : {0.1, 0.3, 0.5}) {
        double half = evaluate_scalar(ss, t);
        Complex full(0.0);
        for (int k = plan.n_nodes - 1; k >= 0; --k) {
            full += std::exp(ss.quad.z[k] * t) * ss.values[k] * ss.quad.dz[k];
            // mirrored node: z(-phi) = conj z, z'(-phi) = -conj z',
            // u-hat(conj z) = conj u-hat
            full += std::exp(std::conj(ss.quad.z[k]) * t) *
                    std::conj(ss.values[k]) * (-std::conj(ss.quad.dz[k]));
        }
        full *= plan.tau / Complex(0.0, 2.0 * kPi);
        CHECK(std::abs(full.imag()) <= 1e-12 * std::abs(full.real()));
        CHECK(std::abs(full.real() - half) <= 1e-13 * std::abs(half));
    }
}

TEST_CASE("scalar spectral accuracy at the reference operating point") {
    FractionalOrders orders(0.2, 0.77);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 60);
    ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, ex1_fhat(orders));
    CHECK(std::abs(evaluate_scalar(ss, 0.5) - ex1_exact(0.5)) <= 1e-9);
}

TEST_CASE("window uniformity of the scalar error") {
    FractionalOrders orders(0.2, 0.77);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 25);
    ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, ex1_fhat(orders));
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 16; ++i) {
        double t = 0.1 + 0.9 * i / 15.0;
        double e = std::abs(evaluate_scalar(ss, t) - ex1_exact(t));
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    CHECK(hi / lo < 10.0);
}

TEST_CASE("tail terms decay past the first quarter of nodes") {
    FractionalOrders orders(0.2, 0.77);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 40);
    ScalarSolution ss = solve_nodes_scalar(orders, plan, 1.0, ex1_fhat(orders));
    for (double t : {0.1, 0.5, 1.0}) {
        double prev = 0.0;
        for (int k = 0; k < plan.n_nodes; ++k) {
            double mag = std::abs(std::exp(ss.quad.z[k] * t) * ss.values[k] *
                                  ss.quad.dz[k]);
            if (k > plan.n_nodes / 4) CHECK(mag < prev);
            prev = mag;
        }
    }
}

TEST_CASE("barycentric fill: polynomial reproduction and coincidence") {
    // interpolating phi^2 from 5 Chebyshev points is exact
    auto pts = chebyshev_lobatto_points(4, 0.2, 3.0);
    std::vector<FeVecC> samples;
    for (double p : pts) samples.push_back({Complex(p * p, -2.0 * p)});
    std::vector<double> targets;
    for (int i = 0; i <= 20; ++i) targets.push_back(0.2 + 2.8 * i / 20.0);
    auto filled = barycentric_fill(pts, samples, targets);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        Complex want(targets[i] * targets[i], -2.0 * targets[i]);
        CHECK(std::abs(filled[i][0] - want) <= 1e-12 * std::abs(want));
    }
    // a target equal to a sample point returns the sample verbatim
    auto hit = barycentric_fill(pts, samples, std::vector<double>{pts[2]});
    CHECK(hit[0][0] == samples[2][0]);
}

TEST_CASE("acceleration with points at the nodes reproduces solve_nodes") {
    FractionalOrders orders(0.4, 0.25);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 12);
    FemSystem sys = assemble(build_mesh(1, 1.0 / 16));
    FeVec u0h = l2_project_load(sys, load_indicator_1d(sys, 2.0 / 3.0, 1.0));
    NodeSolutionSet direct = solve_nodes(orders, plan, sys, u0h, {}, 1);
    QuadratureNodes q = nodes(plan);
    NodeSolutionSet accel =
        accelerate_at(orders, plan, sys, u0h, {}, q.phi, 1);
    for (int k = 0; k < plan.n_nodes; ++k)
        CHECK(accel.solutions[k] == direct.solutions[k]);
}

TEST_CASE("acceleration argument validation") {
    FractionalOrders orders(0.5, 0.5);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 12);
    FemSystem sys = assemble(build_mesh(1, 1.0 / 8));
    CHECK_THROWS_AS(accelerate(orders, plan, sys, FeVec(7, 0.0), {}, 2, 1),
                    DomainError);
    CHECK_THROWS_AS(accelerate(orders, plan, sys, FeVec(7, 0.0), {}, 20, 1),
                    DomainError);
}

TEST_CASE("acceleration fidelity improves with the interpolation degree") {
    FractionalOrders orders(0.2, 0.77);
    ContourPlan plan = make_plan(orders, kDefaultTheta, 0.1, 10.0, 100);
    auto fhat = ex1_fhat(orders);
    FemSystem unit = FemSystem::scalar_system();
    TransformedSource src(
        [&fhat](Complex z, std::vector<Complex>& v) { v[0] = fhat(z); }, 1);
    NodeSolutionSet direct = solve_nodes(orders, plan, unit, FeVec{1.0}, src, 0);

    auto max_rel_dev = [&](int n_cheb) {
        NodeSolutionSet acc =
            accelerate(orders, plan, unit, FeVec{1.0}, src, n_cheb, 0);
        double worst = 0.0;
        for (int k = 0; k < plan.n_nodes; ++k)
            worst = std::max(worst,
                             std::abs(acc.solutions[k][0] -
                                      direct.solutions[k][0]) /
                                 std::abs(direct.solutions[k][0]));
        return worst;
    };
    double d16 = max_rel_dev(16), d32 = max_rel_dev(32), d48 = max_rel_dev(48);
    CHECK(d32 < 0.01 * d16);
    CHECK(d48 < 0.01 * d32);
    CHECK(d48 < 1e-6);
}
