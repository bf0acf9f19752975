#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cimfrac/contour.hpp"
#include "cimfrac/fem.hpp"
#include "cimfrac/symbol.hpp"

namespace cimfrac {

/// Resolvent solutions at every quadrature node of one plan.
struct NodeSolutionSet {
    ContourPlan plan;
    QuadratureNodes quad;
    std::vector<FeVecC> solutions;  ///< u-hat_h(z_k), k = 0..N-1
};

struct TimeSample {
    double t;
    FeVec u;
};

/// Solve the shifted systems at all N nodes.  The solves are independent and
/// run on up to `threads` workers; results are deterministic regardless of
/// the thread count.
NodeSolutionSet solve_nodes(const FractionalOrders& orders,
                            const ContourPlan& plan, const FemSystem& sys,
                            const FeVec& u0h, const TransformedSource& src,
                            int threads = 0);

/// u_h^N(t) = (tau/pi) * Im( sum_k e^{z_k t} u-hat_h(z_k) z'_k ), accumulated
/// from the smallest-magnitude terms (k = N-1 down to 0).
/// Throws OutOfWindow for t outside [t0, lambda*t0].
TimeSample evaluate(const NodeSolutionSet& ns, double t);

/// Solve only at interpolation points phi_pts and fill the N node solutions
/// by barycentric Lagrange interpolation in the contour parameter.
NodeSolutionSet accelerate_at(const FractionalOrders& orders,
                              const ContourPlan& plan, const FemSystem& sys,
                              const FeVec& u0h, const TransformedSource& src,
                              std::span<const double> phi_pts, int threads = 0);

/// Chebyshev–Gauss–Lobatto points (n_cheb+1 of them) on [phi_0, phi_{N-1}].
NodeSolutionSet accelerate(const FractionalOrders& orders,
                           const ContourPlan& plan, const FemSystem& sys,
                           const FeVec& u0h, const TransformedSource& src,
                           int n_cheb, int threads = 0);

std::vector<double> chebyshev_lobatto_points(int n_cheb, double lo, double hi);

/// Barycentric Lagrange interpolation of vector-valued samples: weights
/// w_j = 1 / prod_{m != j} (pts[j] - pts[m]); targets matching a point take
/// its sample verbatim.
std::vector<FeVecC> barycentric_fill(std::span<const double> pts,
                                     const std::vector<FeVecC>& samples,
                                     std::span<const double> targets);

/// Scalar problem (A = 1): closed-form resolvent at every node.
struct ScalarSolution {
    ContourPlan plan;
    QuadratureNodes quad;
    std::vector<Complex> values;
};

using ScalarTransform = std::function<Complex(Complex)>;

ScalarSolution solve_nodes_scalar(const FractionalOrders& orders,
                                  const ContourPlan& plan, double u0,
                                  const ScalarTransform& fhat);

double evaluate_scalar(const ScalarSolution& ss, double t);

}  // namespace cimfrac
