#include "cimfrac/fem.hpp"

#include <cmath>
#include <cstdlib>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "cimfrac/errors.hpp"

namespace cimfrac {

namespace {

int cells_from_h(double h) {
    if (!(h > 0.0) || h >= 1.0) throw BadMeshSize("mesh size must lie in (0,1)");
    double inv = 1.0 / h;
    int m = static_cast<int>(std::lround(inv));
    if (m < 2 || std::abs(inv - m) > 1e-9 * inv)
        throw BadMeshSize("1/h must be an integer >= 2");
    return m;
}

// 3-point Gauss on [-1,1].
constexpr double kG3x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kG3w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// 7-point degree-5 rule on the reference triangle, barycentric.
struct TriPoint {
    double l0, l1, l2, w;
};
constexpr double kA1 = 0.0597158717897698;
constexpr double kB1 = 0.4701420641051151;
constexpr double kA2 = 0.7974269853530873;
constexpr double kB2 = 0.1012865073234563;
constexpr double kW0 = 0.225;
constexpr double kW1 = 0.1323941527885062;
constexpr double kW2 = 0.1259391805448271;
constexpr TriPoint kTri7[7] = {
    {1.0 / 3, 1.0 / 3, 1.0 / 3, kW0}, {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1},
    {kB1, kB1, kA1, kW1},             {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2},
    {kB2, kB2, kA2, kW2}};

}  // namespace

int Mesh::interior_count() const {
    if (dimension == 0) return 1;
    if (dimension == 1) return cells - 1;
    return (cells - 1) * (cells - 1);
}

double Mesh::node_x(int i) const {
    if (dimension <= 1) return (i + 1) * h;
    return ((i % (cells - 1)) + 1) * h;
}

double Mesh::node_y(int i) const {
    if (dimension <= 1) return 0.0;
    return ((i / (cells - 1)) + 1) * h;
}

Mesh build_mesh(int dimension, double h) {
    if (dimension != 1 && dimension != 2)
        throw BadMeshSize("dimension must be 1 or 2");
    Mesh mesh;
    mesh.dimension = dimension;
    mesh.cells = cells_from_h(h);
    mesh.h = 1.0 / mesh.cells;
    int m = mesh.cells;

    if (dimension == 1) {
        mesh.vx.resize(m + 1);
        mesh.interior_index.assign(m + 1, -1);
        for (int i = 0; i <= m; ++i) {
            mesh.vx[i] = i * mesh.h;
            if (i > 0 && i < m) mesh.interior_index[i] = i - 1;
        }
        return mesh;
    }

    int nv = (m + 1) * (m + 1);
    mesh.vx.resize(nv);
    mesh.vy.resize(nv);
    mesh.interior_index.assign(nv, -1);
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i) {
            int g = j * (m + 1) + i;
            mesh.vx[g] = i * mesh.h;
            mesh.vy[g] = j * mesh.h;
            if (i > 0 && i < m && j > 0 && j < m)
                mesh.interior_index[g] = (j - 1) * (m - 1) + (i - 1);
        }
    mesh.tris.reserve(2 * m * m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            int v00 = j * (m + 1) + i;
            int v10 = v00 + 1;
            int v01 = v00 + (m + 1);
            int v11 = v01 + 1;
            mesh.tris.push_back({v00, v10, v11});
            mesh.tris.push_back({v00, v11, v01});
        }
    return mesh;
}

FemSystem FemSystem::scalar_system() {
    FemSystem sys;
    sys.mesh.dimension = 0;
    sys.mesh.cells = 0;
    sys.mesh.h = 0.0;
    sys.mass.resize(1, 1);
    sys.stiffness.resize(1, 1);
    sys.mass.insert(0, 0) = 1.0;
    sys.stiffness.insert(0, 0) = 1.0;
    sys.mass.makeCompressed();
    sys.stiffness.makeCompressed();
    return sys;
}

FemSystem assemble(const Mesh& mesh) {
    FemSystem sys;
    sys.mesh = mesh;
    int n = mesh.interior_count();
    std::vector<Eigen::Triplet<double>> km, mm;

    if (mesh.dimension == 1) {
        double h = mesh.h;
        for (int e = 0; e < mesh.cells; ++e) {
            int v[2] = {e, e + 1};
            double ke[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
            double me[2][2] = {{h / 3, h / 6}, {h / 6, h / 3}};
            for (int a = 0; a < 2; ++a) {
                int ia = mesh.interior_index[v[a]];
                if (ia < 0) continue;
                for (int b = 0; b < 2; ++b) {
                    int ib = mesh.interior_index[v[b]];
                    if (ib < 0) continue;
                    km.emplace_back(ia, ib, ke[a][b]);
                    mm.emplace_back(ia, ib, me[a][b]);
                }
            }
        }
    } else {
        for (const auto& tri : mesh.tris) {
            double x0 = mesh.vx[tri[0]], y0 = mesh.vy[tri[0]];
            double x1 = mesh.vx[tri[1]], y1 = mesh.vy[tri[1]];
            double x2 = mesh.vx[tri[2]], y2 = mesh.vy[tri[2]];
            double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
            double area = 0.5 * std::abs(det);
            // gradients of the barycentric coordinates
            double gx[3] = {(y1 - y2) / det, (y2 - y0) / det, (y0 - y1) / det};
            double gy[3] = {(x2 - x1) / det, (x0 - x2) / det, (x1 - x0) / det};
            for (int a = 0; a < 3; ++a) {
                int ia = mesh.interior_index[tri[a]];
                if (ia < 0) continue;
                for (int b = 0; b < 3; ++b) {
                    int ib = mesh.interior_index[tri[b]];
                    if (ib < 0) continue;
                    km.emplace_back(ia, ib, area * (gx[a] * gx[b] + gy[a] * gy[b]));
                    mm.emplace_back(ia, ib, area / 12.0 * (a == b ? 2.0 : 1.0));
                }
            }
        }
    }

    sys.stiffness.resize(n, n);
    sys.mass.resize(n, n);
    sys.stiffness.setFromTriplets(km.begin(), km.end());
    sys.mass.setFromTriplets(mm.begin(), mm.end());
    sys.stiffness.makeCompressed();
    sys.mass.makeCompressed();
    return sys;
}

FeVec load_vector(const FemSystem& sys, const SpatialFn1& data) {
    const Mesh& mesh = sys.mesh;
    FeVec b(mesh.interior_count(), 0.0);
    double h = mesh.h;
    for (int e = 0; e < mesh.cells; ++e) {
        double x0 = e * h;
        for (int q = 0; q < 3; ++q) {
            double x = x0 + 0.5 * h * (1.0 + kG3x[q]);
            double w = 0.5 * h * kG3w[q];
            double v = data(x);
            int il = mesh.interior_index[e];
            int ir = mesh.interior_index[e + 1];
            if (il >= 0) b[il] += w * v * (x0 + h - x) / h;
            if (ir >= 0) b[ir] += w * v * (x - x0) / h;
        }
    }
    return b;
}

FeVec load_vector(const FemSystem& sys, const SpatialFn2& data) {
    const Mesh& mesh = sys.mesh;
    FeVec b(mesh.interior_count(), 0.0);
    for (const auto& tri : mesh.tris) {
        double x0 = mesh.vx[tri[0]], y0 = mesh.vy[tri[0]];
        double x1 = mesh.vx[tri[1]], y1 = mesh.vy[tri[1]];
        double x2 = mesh.vx[tri[2]], y2 = mesh.vy[tri[2]];
        double area = 0.5 * std::abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0));
        for (const auto& qp : kTri7) {
            double x = qp.l0 * x0 + qp.l1 * x1 + qp.l2 * x2;
            double y = qp.l0 * y0 + qp.l1 * y1 + qp.l2 * y2;
            double v = area * qp.w * data(x, y);
            double lam[3] = {qp.l0, qp.l1, qp.l2};
            for (int a = 0; a < 3; ++a) {
                int ia = mesh.interior_index[tri[a]];
                if (ia >= 0) b[ia] += v * lam[a];
            }
        }
    }
    return b;
}

FeVec load_indicator_1d(const FemSystem& sys, double cut, double scale) {
    const Mesh& mesh = sys.mesh;
    FeVec b(mesh.interior_count(), 0.0);
    double h = mesh.h;
    for (int e = 0; e < mesh.cells; ++e) {
        double x0 = e * h, x1 = x0 + h;
        double s = x0, t = std::min(x1, cut);
        if (t <= s) continue;
        int il = mesh.interior_index[e];
        int ir = mesh.interior_index[e + 1];
        // int_s^t of the descending hat (x1-x)/h and the ascending hat (x-x0)/h
        if (il >= 0)
            b[il] += scale * ((x1 - s) * (x1 - s) - (x1 - t) * (x1 - t)) / (2 * h);
        if (ir >= 0)
            b[ir] += scale * ((t - x0) * (t - x0) - (s - x0) * (s - x0)) / (2 * h);
    }
    return b;
}

FeVec load_indicator_halfplane(const FemSystem& sys, double xcut, double scale) {
    const Mesh& mesh = sys.mesh;
    double ratio = xcut / mesh.h;
    if (std::abs(ratio - std::lround(ratio)) > 1e-9)
        throw BadMeshSize("indicator cut must lie on a mesh line");
    FeVec b(mesh.interior_count(), 0.0);
    for (const auto& tri : mesh.tris) {
        double cx = (mesh.vx[tri[0]] + mesh.vx[tri[1]] + mesh.vx[tri[2]]) / 3.0;
        if (cx <= xcut) continue;
        double x0 = mesh.vx[tri[0]], y0 = mesh.vy[tri[0]];
        double x1 = mesh.vx[tri[1]], y1 = mesh.vy[tri[1]];
        double x2 = mesh.vx[tri[2]], y2 = mesh.vy[tri[2]];
        double area = 0.5 * std::abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0));
        for (int a = 0; a < 3; ++a) {
            int ia = mesh.interior_index[tri[a]];
            if (ia >= 0) b[ia] += scale * area / 3.0;
        }
    }
    return b;
}

namespace {

template <typename Scalar>
std::vector<Scalar> sparse_apply(const SpMat& m, const std::vector<Scalar>& v) {
    std::vector<Scalar> out(v.size(), Scalar(0));
    for (int col = 0; col < m.outerSize(); ++col)
        for (SpMat::InnerIterator it(m, col); it; ++it)
            out[it.row()] += it.value() * v[col];
    return out;
}

}  // namespace

FeVec mass_apply(const FemSystem& sys, const FeVec& v) {
    return sparse_apply(sys.mass, v);
}

FeVecC mass_apply(const FemSystem& sys, const FeVecC& v) {
    return sparse_apply(sys.mass, v);
}

FeVec l2_project_load(const FemSystem& sys, const FeVec& load) {
    Eigen::SimplicialLDLT<SpMat> chol(sys.mass);
    if (chol.info() != Eigen::Success)
        throw SolveFailure("mass matrix factorization failed");
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(load.data(), load.size());
    Eigen::VectorXd x = chol.solve(b);
    return FeVec(x.data(), x.data() + x.size());
}

FeVec l2_project(const FemSystem& sys, const SpatialFn1& data) {
    return l2_project_load(sys, load_vector(sys, data));
}

FeVec l2_project(const FemSystem& sys, const SpatialFn2& data) {
    return l2_project_load(sys, load_vector(sys, data));
}

double l2_norm(const FemSystem& sys, const FeVecC& v) {
    FeVecC mv = mass_apply(sys, v);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += std::real(std::conj(v[i]) * mv[i]);
    return std::sqrt(std::abs(acc));
}

double l2_norm(const FemSystem& sys, const FeVec& v) {
    FeVec mv = mass_apply(sys, v);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * mv[i];
    return std::sqrt(std::abs(acc));
}

double l2_error_against(const FemSystem& sys, const FeVec& u,
                        const SpatialFn1& exact) {
    const Mesh& mesh = sys.mesh;
    double h = mesh.h, acc = 0.0;
    for (int e = 0; e < mesh.cells; ++e) {
        double x0 = e * h;
        int il = mesh.interior_index[e];
        int ir = mesh.interior_index[e + 1];
        double ul = il >= 0 ? u[il] : 0.0;
        double ur = ir >= 0 ? u[ir] : 0.0;
        for (int q = 0; q < 3; ++q) {
            double x = x0 + 0.5 * h * (1.0 + kG3x[q]);
            double w = 0.5 * h * kG3w[q];
            double uh = ul * (x0 + h - x) / h + ur * (x - x0) / h;
            double d = uh - exact(x);
            acc += w * d * d;
        }
    }
    return std::sqrt(acc);
}

double l2_error_against(const FemSystem& sys, const FeVec& u,
                        const SpatialFn2& exact) {
    const Mesh& mesh = sys.mesh;
    double acc = 0.0;
    for (const auto& tri : mesh.tris) {
        double x0 = mesh.vx[tri[0]], y0 = mesh.vy[tri[0]];
        double x1 = mesh.vx[tri[1]], y1 = mesh.vy[tri[1]];
        double x2 = mesh.vx[tri[2]], y2 = mesh.vy[tri[2]];
        double area = 0.5 * std::abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0));
        double uv[3];
        for (int a = 0; a < 3; ++a) {
            int ia = mesh.interior_index[tri[a]];
            uv[a] = ia >= 0 ? u[ia] : 0.0;
        }
        for (const auto& qp : kTri7) {
            double x = qp.l0 * x0 + qp.l1 * x1 + qp.l2 * x2;
            double y = qp.l0 * y0 + qp.l1 * y1 + qp.l2 * y2;
            double uh = qp.l0 * uv[0] + qp.l1 * uv[1] + qp.l2 * uv[2];
            double d = uh - exact(x, y);
            acc += area * qp.w * d * d;
        }
    }
    return std::sqrt(acc);
}

struct ShiftedOperator::Impl {
    // 0-D/1-D path: LU of a tridiagonal matrix.
    std::vector<Complex> low, diag, up;
    // 2-D path.
    std::unique_ptr<SpMatC> matrix;
    std::unique_ptr<Eigen::SparseLU<SpMatC, Eigen::COLAMDOrdering<int>>> lu;
};

ShiftedOperator::ShiftedOperator(const FemSystem& sys, Complex z,
                                 const FractionalOrders& orders)
    : impl_(std::make_unique<Impl>()), sys_(&sys), z_(z) {
    Complex zb = std::pow(z, orders.beta);
    Complex shift = 1.0 + std::pow(z, -orders.alpha);
    zbm1_ = std::pow(z, orders.beta - 1.0);
    int n = sys.size();

    if (sys.mesh.dimension == 2) {
        impl_->matrix = std::make_unique<SpMatC>(
            (zb * sys.mass.cast<Complex>() + shift * sys.stiffness.cast<Complex>())
                .pruned());
        impl_->matrix->makeCompressed();
        impl_->lu = std::make_unique<
            Eigen::SparseLU<SpMatC, Eigen::COLAMDOrdering<int>>>();
        impl_->lu->compute(*impl_->matrix);
        if (impl_->lu->info() != Eigen::Success)
            throw SolveFailure("sparse LU failed at a quadrature node");
        return;
    }

    // Build the three diagonals from the sparse M and K, then factor in place.
    impl_->diag.assign(n, Complex(0));
    impl_->low.assign(n > 0 ? n - 1 : 0, Complex(0));
    impl_->up.assign(n > 0 ? n - 1 : 0, Complex(0));
    auto accumulate = [&](const SpMat& m, Complex w) {
        for (int col = 0; col < m.outerSize(); ++col)
            for (SpMat::InnerIterator it(m, col); it; ++it) {
                int r = static_cast<int>(it.row());
                if (r == col)
                    impl_->diag[r] += w * it.value();
                else if (r == col + 1)
                    impl_->low[col] += w * it.value();
                else if (r == col - 1)
                    impl_->up[r] += w * it.value();
                else
                    throw SolveFailure("unexpected bandwidth in 1-D system");
            }
    };
    accumulate(sys.mass, zb);
    accumulate(sys.stiffness, shift);
    for (int i = 1; i < n; ++i) {
        if (std::abs(impl_->diag[i - 1]) < 1e-300)
            throw SolveFailure("tridiagonal pivot vanished");
        Complex l = impl_->low[i - 1] / impl_->diag[i - 1];
        impl_->low[i - 1] = l;
        impl_->diag[i] -= l * impl_->up[i - 1];
    }
}

ShiftedOperator::~ShiftedOperator() = default;
ShiftedOperator::ShiftedOperator(ShiftedOperator&&) noexcept = default;
ShiftedOperator& ShiftedOperator::operator=(ShiftedOperator&&) noexcept = default;

FeVecC ShiftedOperator::apply_inverse(const FeVecC& rhs) const {
    int n = sys_->size();
    if (impl_->lu) {
        Eigen::Map<const Eigen::VectorXcd> b(rhs.data(), rhs.size());
        Eigen::VectorXcd x = impl_->lu->solve(b);
        if (impl_->lu->info() != Eigen::Success)
            throw SolveFailure("sparse back-substitution failed");
        return FeVecC(x.data(), x.data() + x.size());
    }
    FeVecC x = rhs;
    for (int i = 1; i < n; ++i) x[i] -= impl_->low[i - 1] * x[i - 1];
    x[n - 1] /= impl_->diag[n - 1];
    for (int i = n - 2; i >= 0; --i)
        x[i] = (x[i] - impl_->up[i] * x[i + 1]) / impl_->diag[i];
    return x;
}

FeVecC ShiftedOperator::solve(const FeVecC& u0h_mass, const FeVecC& fhat_h) const {
    int n = sys_->size();
    FeVecC rhs(n, Complex(0));
    if (!u0h_mass.empty())
        for (int i = 0; i < n; ++i) rhs[i] += zbm1_ * u0h_mass[i];
    if (!fhat_h.empty()) {
        FeVecC mf = mass_apply(*sys_, fhat_h);
        for (int i = 0; i < n; ++i) rhs[i] += mf[i];
    }
    return apply_inverse(rhs);
}

FeVecC shifted_solve(const FemSystem& sys, Complex z,
                     const FractionalOrders& orders, const FeVec& u0h,
                     const FeVecC& fhat_h) {
    ShiftedOperator op(sys, z, orders);
    FeVecC u0m;
    if (!u0h.empty()) {
        FeVec m = mass_apply(sys, u0h);
        u0m.assign(m.begin(), m.end());
    }
    return op.solve(u0m, fhat_h);
}

FeVec prolong(const Mesh& coarse, const FeVec& v, int levels) {
    if (levels <= 0) return v;
    if (coarse.dimension == 1) {
        FeVec cur = v;
        int m = coarse.cells;
        for (int l = 0; l < levels; ++l) {
            std::vector<double> full(m + 1, 0.0);
            for (int i = 1; i < m; ++i) full[i] = cur[i - 1];
            int mf = 2 * m;
            FeVec fine(mf - 1, 0.0);
            for (int j = 1; j < mf; ++j)
                fine[j - 1] = (j % 2 == 0) ? full[j / 2]
                                           : 0.5 * (full[j / 2] + full[j / 2 + 1]);
            cur = std::move(fine);
            m = mf;
        }
        return cur;
    }
    FeVec cur = v;
    int m = coarse.cells;
    for (int l = 0; l < levels; ++l) {
        int n = m + 1;
        std::vector<double> full(n * n, 0.0);
        for (int j = 1; j < m; ++j)
            for (int i = 1; i < m; ++i)
                full[j * n + i] = cur[(j - 1) * (m - 1) + (i - 1)];
        int mf = 2 * m, nf = mf + 1;
        FeVec fine((mf - 1) * (mf - 1), 0.0);
        auto coarse_at = [&](int i, int j) { return full[j * n + i]; };
        for (int j = 1; j < mf; ++j)
            for (int i = 1; i < mf; ++i) {
                double val;
                if (i % 2 == 0 && j % 2 == 0)
                    val = coarse_at(i / 2, j / 2);
                else if (j % 2 == 0)
                    val = 0.5 * (coarse_at(i / 2, j / 2) + coarse_at(i / 2 + 1, j / 2));
                else if (i % 2 == 0)
                    val = 0.5 * (coarse_at(i / 2, j / 2) + coarse_at(i / 2, j / 2 + 1));
                else
                    // cell center lies on the coarse diagonal edge
                    val = 0.5 * (coarse_at(i / 2, j / 2) + coarse_at(i / 2 + 1, j / 2 + 1));
                fine[(j - 1) * (mf - 1) + (i - 1)] = val;
            }
        (void)nf;
        cur = std::move(fine);
        m = mf;
    }
    return cur;
}

FeVec restrict_to(const Mesh& coarse, const Mesh& fine, const FeVec& v) {
    int mc = coarse.cells, mf = fine.cells;
    if (mf % mc != 0) throw BadMeshSize("meshes are not nested");
    int r = mf / mc;
    if (coarse.dimension == 1) {
        FeVec out(mc - 1);
        for (int i = 1; i < mc; ++i) out[i - 1] = v[i * r - 1];
        return out;
    }
    FeVec out((mc - 1) * (mc - 1));
    for (int j = 1; j < mc; ++j)
        for (int i = 1; i < mc; ++i)
            out[(j - 1) * (mc - 1) + (i - 1)] =
                v[(j * r - 1) * (mf - 1) + (i * r - 1)];
    return out;
}

}  // namespace cimfrac
