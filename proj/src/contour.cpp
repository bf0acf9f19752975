#include "cimfrac/contour.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cimfrac/errors.hpp"

namespace cimfrac {

namespace {
constexpr double kPi = std::numbers::pi;

void check_unit_interval(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0))
        throw DomainError(std::string(name) + " must lie in (0,1)");
}
}  // namespace

FractionalOrders::FractionalOrders(double a, double b, double eps)
    : alpha(a), beta(b), epsilon(eps) {
    check_unit_interval(alpha, "alpha");
    check_unit_interval(beta, "beta");
    check_unit_interval(epsilon, "epsilon");
    if (!(epsilon < alpha + beta))
        throw DomainError("epsilon must be smaller than alpha+beta");
}

FractionalOrders::FractionalOrders(double a, double b)
    : FractionalOrders(a, b, default_epsilon(a, b)) {}

double FractionalOrders::sector_angle() const {
    return (sum() + epsilon) * kPi / (2.0 * sum());
}

bool FractionalOrders::lemma_window_ok() const {
    return epsilon < sum() && sum() < 2.0 - epsilon;
}

double default_epsilon(double alpha, double beta) {
    return 2.0 * (alpha + beta) * (kDefaultTheta + kDefaultStrip) / kPi;
}

double strip_half_width(const FractionalOrders& orders, double theta) {
    if (!(theta > 0.0 && theta < kPi / 2.0))
        throw DomainError("theta must lie in (0, pi/2)");
    double second = orders.epsilon * kPi / (2.0 * orders.sum()) - theta;
    if (second <= 0.0)
        throw NonPositiveStrip("contour angle too large for the sector");
    return std::min(theta, second);
}

double p_of_eta(double eta, double lambda, double theta, double c_work) {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
    if (!(lambda >= 1.0)) throw DomainError("lambda must be >= 1");
    if (!(c_work > 0.0 && c_work < theta))
        throw DomainError("c_work must lie in (0, theta)");
    double arg = lambda / ((1.0 - eta) * std::sin(theta - c_work));
    if (arg < 1.0) throw DomainError("arcosh argument below 1");
    return std::acosh(arg);
}

EtaOptimum optimize_eta(double lambda, double theta, double c_work) {
    auto q = [&](double eta) {
        return 2.0 * kPi * c_work * eta / p_of_eta(eta, lambda, theta, c_work);
    };

    constexpr int kGrid = 4096;
    constexpr double kLo = 0.001, kHi = 0.999;
    double best_eta = kLo, best_q = q(kLo);
    double step = (kHi - kLo) / (kGrid - 1);
    for (int i = 1; i < kGrid; ++i) {
        double eta = kLo + i * step;
        double v = q(eta);
        if (v > best_q) {
            best_q = v;
            best_eta = eta;
        }
    }

    double lo = std::max(kLo, best_eta - step);
    double hi = std::min(kHi, best_eta + step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = q(x1), f2 = q(x2);
    while (hi - lo > 1e-8) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = q(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = q(x1);
        }
    }
    double eta = 0.5 * (lo + hi);
    return {eta, q(eta)};
}

namespace {
ContourPlan finish_plan(double c_tilde, double theta, double t0, double lambda,
                        int n_nodes) {
    if (n_nodes < 1) throw DomainError("n_nodes must be positive");
    if (!(t0 > 0.0)) throw DomainError("t0 must be positive");
    if (!(lambda >= 1.0)) throw DomainError("lambda must be >= 1");

    // With c_tilde == theta the first branch of the min degenerates
    // sin(theta - c) to zero; cap the working value below theta.
    double c_work = std::min(c_tilde, 0.9 * theta);

    EtaOptimum opt = optimize_eta(lambda, theta, c_work);
    double p = p_of_eta(opt.eta_star, lambda, theta, c_work);

    ContourPlan plan;
    plan.theta = theta;
    plan.c_tilde = c_tilde;
    plan.c_work = c_work;
    plan.n_nodes = n_nodes;
    plan.eta_star = opt.eta_star;
    plan.q_star = opt.q_star;
    plan.t0 = t0;
    plan.lambda = lambda;
    plan.tau = p / n_nodes;
    plan.mu = 2.0 * kPi * c_work * n_nodes * (1.0 - opt.eta_star) /
              (lambda * t0 * p);
    return plan;
}
}  // namespace

ContourPlan make_plan(const FractionalOrders& orders, double theta, double t0,
                      double lambda, int n_nodes) {
    return finish_plan(strip_half_width(orders, theta), theta, t0, lambda,
                       n_nodes);
}

ContourPlan make_plan_with_strip(double c_tilde, double theta, double t0,
                                 double lambda, int n_nodes) {
    if (!(c_tilde > 0.0)) throw NonPositiveStrip("strip must be positive");
    return finish_plan(c_tilde, theta, t0, lambda, n_nodes);
}

std::complex<double> contour_point(const ContourPlan& plan, double phi) {
    return {plan.mu * (1.0 - std::sin(plan.theta) * std::cosh(phi)),
            plan.mu * std::cos(plan.theta) * std::sinh(phi)};
}

std::complex<double> contour_derivative(const ContourPlan& plan, double phi) {
    return {-plan.mu * std::sin(plan.theta) * std::sinh(phi),
            plan.mu * std::cos(plan.theta) * std::cosh(phi)};
}

QuadratureNodes nodes(const ContourPlan& plan) {
    QuadratureNodes out;
    out.phi.resize(plan.n_nodes);
    out.z.resize(plan.n_nodes);
    out.dz.resize(plan.n_nodes);
    for (int k = 0; k < plan.n_nodes; ++k) {
        double phi = (k + 0.5) * plan.tau;
        out.phi[k] = phi;
        out.z[k] = contour_point(plan, phi);
        out.dz[k] = contour_derivative(plan, phi);
    }
    return out;
}

}  // namespace cimfrac
