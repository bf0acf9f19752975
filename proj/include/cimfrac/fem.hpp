#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "cimfrac/contour.hpp"
#include "cimfrac/symbol.hpp"

namespace cimfrac {

using FeVec = std::vector<double>;
using FeVecC = std::vector<Complex>;
using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<Complex>;

/// Uniform mesh of (0,1) or (0,1)^2 with homogeneous Dirichlet boundary.
/// 2-D cells are split into two triangles by the diagonal from (x, y) to
/// (x+h, y+h).
struct Mesh {
    int dimension = 1;
    int cells = 0;  ///< cells per side, h = 1/cells
    double h = 0.0;

    std::vector<double> vx, vy;            ///< all vertex coordinates
    std::vector<int> interior_index;       ///< vertex id -> interior id or -1
    std::vector<std::array<int, 3>> tris;  ///< 2-D connectivity (vertex ids)

    int interior_count() const;
    /// Coordinates of interior node i.
    double node_x(int i) const;
    double node_y(int i) const;
};

/// BadMeshSize unless 1/h is an integer number of cells (>= 2).
Mesh build_mesh(int dimension, double h);

/// Mass and stiffness over the interior (Dirichlet-eliminated) P1 basis.
struct FemSystem {
    Mesh mesh;
    SpMat mass;
    SpMat stiffness;

    int size() const { return static_cast<int>(mass.rows()); }

    /// 1x1 system with M = K = 1; the scalar problem as a degenerate mesh.
    static FemSystem scalar_system();
};

/// Exact P1 element integrals, assembled symmetrically.
FemSystem assemble(const Mesh& mesh);

using SpatialFn1 = std::function<double(double)>;
using SpatialFn2 = std::function<double(double, double)>;

/// Load vector b_i = int data * phi_i via per-element Gauss rules
/// (degree-5 exact; quadrature error well below the h^2 error floor).
FeVec load_vector(const FemSystem& sys, const SpatialFn1& data);
FeVec load_vector(const FemSystem& sys, const SpatialFn2& data);

/// Exact load of scale * chi_{(0, cut]} in 1-D, splitting hats at the cut.
FeVec load_indicator_1d(const FemSystem& sys, double cut, double scale);

/// Exact load of scale * chi_{(xcut, 1) x (0,1)} in 2-D; xcut must lie on a
/// mesh line so every triangle is entirely inside or outside.
FeVec load_indicator_halfplane(const FemSystem& sys, double xcut, double scale);

FeVec mass_apply(const FemSystem& sys, const FeVec& v);
FeVecC mass_apply(const FemSystem& sys, const FeVecC& v);

/// M^{-1} b.
FeVec l2_project_load(const FemSystem& sys, const FeVec& load);
FeVec l2_project(const FemSystem& sys, const SpatialFn1& data);
FeVec l2_project(const FemSystem& sys, const SpatialFn2& data);

/// sqrt( Re( conj(v)^T M v ) ).
double l2_norm(const FemSystem& sys, const FeVecC& v);
double l2_norm(const FemSystem& sys, const FeVec& v);

/// || u_h - exact ||_L2 by per-element Gauss quadrature.
double l2_error_against(const FemSystem& sys, const FeVec& u,
                        const SpatialFn1& exact);
double l2_error_against(const FemSystem& sys, const FeVec& u,
                        const SpatialFn2& exact);

/// Factorization of z^beta M + (1 + z^-alpha) K, reusable across right-hand
/// sides.  1-D uses the Thomas algorithm, 2-D a sparse LU.
class ShiftedOperator {
  public:
    ShiftedOperator(const FemSystem& sys, Complex z,
                    const FractionalOrders& orders);
    ~ShiftedOperator();
    ShiftedOperator(ShiftedOperator&&) noexcept;
    ShiftedOperator& operator=(ShiftedOperator&&) noexcept;

    /// Solve A x = rhs for a raw right-hand side.
    FeVecC apply_inverse(const FeVecC& rhs) const;

    /// Solve with the resolvent right-hand side z^{beta-1} M u0h + M fhat_h.
    FeVecC solve(const FeVecC& u0h_mass, const FeVecC& fhat_h) const;

    Complex z() const { return z_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    const FemSystem* sys_;
    Complex z_;
    Complex zbm1_;  ///< z^(beta-1)
};

/// One-shot solve of (z^beta M + (1+z^-alpha) K) u = z^(beta-1) M u0h + M fhat_h.
FeVecC shifted_solve(const FemSystem& sys, Complex z,
                     const FractionalOrders& orders, const FeVec& u0h,
                     const FeVecC& fhat_h);

/// Nodal transfer between nested meshes (h and h/2^levels), exact for P1.
FeVec prolong(const Mesh& coarse, const FeVec& v, int levels);
FeVec restrict_to(const Mesh& coarse, const Mesh& fine, const FeVec& v);

}  // namespace cimfrac
