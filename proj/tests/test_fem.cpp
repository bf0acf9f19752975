#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SparseCholesky>

#include "cimfrac/errors.hpp"
#include "cimfrac/fem.hpp"

using namespace cimfrac;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("mesh construction") {
    Mesh m1 = build_mesh(1, 0.5);
    CHECK(m1.interior_count() == 1);
    CHECK(m1.node_x(0) == doctest::Approx(0.5));

    Mesh m2 = build_mesh(2, 0.5);
    CHECK(m2.interior_count() == 1);
    CHECK(m2.tris.size() == 8);
    CHECK(m2.node_x(0) == doctest::Approx(0.5));
    CHECK(m2.node_y(0) == doctest::Approx(0.5));

    CHECK(build_mesh(1, 0.25).interior_count() == 3);
    CHECK_THROWS_AS(build_mesh(1, 0.3), BadMeshSize);
    CHECK_THROWS_AS(build_mesh(3, 0.25), BadMeshSize);
}

TEST_CASE("hand-assembled coarse systems") {
    FemSystem s2 = assemble(build_mesh(1, 0.5));
    CHECK(s2.stiffness.coeff(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(s2.mass.coeff(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    FemSystem s4 = assemble(build_mesh(1, 0.25));
    for (int i = 0; i < 3; ++i) {
        CHECK(s4.stiffness.coeff(i, i) == doctest::Approx(8.0));
        CHECK(s4.mass.coeff(i, i) == doctest::Approx(1.0 / 6.0));
        if (i > 0) {
            CHECK(s4.stiffness.coeff(i, i - 1) == doctest::Approx(-4.0));
            CHECK(s4.mass.coeff(i, i - 1) == doctest::Approx(1.0 / 24.0));
        }
    }

    // 2-D, h = 1/2: sum over the six incident triangles
    FemSystem q = assemble(build_mesh(2, 0.5));
    CHECK(q.stiffness.coeff(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(q.mass.coeff(0, 0) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("symmetry and definiteness") {
    for (auto sys : {assemble(build_mesh(1, 1.0 / 16)),
                     assemble(build_mesh(2, 1.0 / 8))}) {
        SpMat dk = SpMat(sys.stiffness.transpose()) - sys.stiffness;
        SpMat dm = SpMat(sys.mass.transpose()) - sys.mass;
        CHECK(dk.norm() == 0.0);
        CHECK(dm.norm() == 0.0);
        // positive definiteness via a Cholesky-type factorization
        Eigen::SimplicialLDLT<SpMat> ck(sys.stiffness), cm(sys.mass);
        CHECK(ck.info() == Eigen::Success);
        CHECK(cm.info() == Eigen::Success);
        Eigen::VectorXd dgk = ck.vectorD(), dgm = cm.vectorD();
        CHECK(dgk.minCoeff() > 0.0);
        CHECK(dgm.minCoeff() > 0.0);
    }
}

TEST_CASE("patch test: stiffness annihilates linears away from the boundary") {
    FemSystem sys = assemble(build_mesh(1, 1.0 / 8));
    FeVec v(7);
    for (int i = 0; i < 7; ++i) v[i] = 0.25 + 0.5 * sys.mesh.node_x(i);
    Eigen::VectorXd kv =
        sys.stiffness * Eigen::Map<const Eigen::VectorXd>(v.data(), 7);
    for (int i = 1; i < 6; ++i) CHECK(std::abs(kv[i]) < 1e-13);

    FemSystem sys2 = assemble(build_mesh(2, 1.0 / 8));
    int n = sys2.mesh.interior_count();
    FeVec w(n);
    for (int i = 0; i < n; ++i)
        w[i] = 0.3 * sys2.mesh.node_x(i) - 0.7 * sys2.mesh.node_y(i);
    Eigen::VectorXd kw =
        sys2.stiffness * Eigen::Map<const Eigen::VectorXd>(w.data(), n);
    for (int j = 2; j < 6; ++j)
        for (int i = 2; i < 6; ++i) CHECK(std::abs(kw[(j - 1) * 7 + i - 1]) < 1e-13);
}

TEST_CASE("projection basics") {
    FemSystem sys = assemble(build_mesh(1, 1.0 / 64));
    FeVec zero = l2_project(sys, [](double) { return 0.0; });
    for (double v : zero) CHECK(v == 0.0);

    // constants reproduce away from the boundary (partition of unity)
    FeVec load1 = load_vector(sys, [](double) { return 1.0; });
    for (int i = 1; i < 62; ++i)
        CHECK(load1[i] == doctest::Approx(1.0 / 64).epsilon(1e-13));
    // the mass-inverse boundary wiggle decays like (2-sqrt(3))^d
    FeVec p1 = l2_project_load(sys, load1);
    for (int i = 26; i < 37; ++i)
        CHECK(p1[i] == doctest::Approx(1.0).epsilon(1e-12));

    // projection reproduces members of the FE space exactly
    FeVec hat = l2_project(sys, [](double x) { return std::min(x, 1.0 - x); });
    for (int i = 0; i < 63; ++i)
        CHECK(hat[i] ==
              doctest::Approx(std::min(sys.mesh.node_x(i),
                                       1.0 - sys.mesh.node_x(i)))
                  .epsilon(1e-13));
}

TEST_CASE("indicator loads are exact") {
    FemSystem sys = assemble(build_mesh(1, 0.25));
    FeVec b = load_indicator_1d(sys, 2.0 / 3.0, 1.0);
    CHECK(b[0] == doctest::Approx(0.25).epsilon(1e-15));        // node 0.25
    CHECK(b[1] == doctest::Approx(17.0 / 72.0).epsilon(1e-14)); // node 0.50
    CHECK(b[2] == doctest::Approx(1.0 / 18.0).epsilon(1e-14));  // node 0.75

    // against quadrature on a finer mesh
    FemSystem sys2 = assemble(build_mesh(1, 1.0 / 32));
    FeVec bi = load_indicator_1d(sys2, 2.0 / 3.0, 1.0);
    FeVec bq = load_vector(
        sys2, [](double x) { return x <= 2.0 / 3.0 ? 1.0 : 0.0; });
    // quadrature is only approximate on the cut element; compare elsewhere
    for (int i = 0; i < 31; ++i) {
        double x = sys2.mesh.node_x(i);
        if (std::abs(x - 2.0 / 3.0) > 2.0 / 32)
            CHECK(bi[i] == doctest::Approx(bq[i]).epsilon(1e-12));
    }

    FemSystem q = assemble(build_mesh(2, 0.25));
    FeVec b2 = load_indicator_halfplane(q, 0.5, 1.0);
    // load of chi_{x>1/2} sums to its area minus boundary strips
    double total = 0.0;
    for (double v : b2) total += v;
    CHECK(total > 0.0);
    CHECK_THROWS_AS(load_indicator_halfplane(q, 0.4, 1.0), BadMeshSize);
}

TEST_CASE("l2 norm") {
    FemSystem sys = assemble(build_mesh(1, 0.5));
    CHECK(l2_norm(sys, FeVec{1.0}) ==
          doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
    CHECK(l2_norm(sys, FeVec{0.0}) == 0.0);
    FemSystem sys2 = assemble(build_mesh(1, 1.0 / 16));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    FeVecC v(15);
    for (auto& x : v) x = Complex(u(rng), u(rng));
    double n1 = l2_norm(sys2, v);
    for (auto& x : v) x *= Complex(0.0, -2.5);
    CHECK(l2_norm(sys2, v) == doctest::Approx(2.5 * n1).epsilon(1e-13));
}

TEST_CASE("shifted solve: closed form, residual, conjugation") {
    FractionalOrders orders(0.5, 0.5);
    FemSystem sys = assemble(build_mesh(1, 0.5));
    FeVecC got = shifted_solve(sys, {2.0, 0.0}, orders, FeVec{1.0}, {});
    CHECK(std::abs(got[0] - Complex(0.032288725526925441, 0.0)) < 1e-15);

    FeVecC zero = shifted_solve(sys, {2.0, 0.0}, orders, FeVec{0.0}, {});
    CHECK(std::abs(zero[0]) == 0.0);

    // residual oracle on a 2-D system
    FemSystem q = assemble(build_mesh(2, 1.0 / 8));
    int n = q.size();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    FeVec u0(n);
    for (auto& x : u0) x = u(rng);
    Complex z(1.5, 2.5);
    FeVecC uh = shifted_solve(q, z, orders, u0, {});
    Complex zb = std::pow(z, orders.beta);
    Complex sh = 1.0 + std::pow(z, -orders.alpha);
    Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(uh.data(), n);
    Eigen::VectorXcd resid = zb * (q.mass.cast<Complex>() * x) +
                             sh * (q.stiffness.cast<Complex>() * x);
    FeVec mu0 = mass_apply(q, u0);
    for (int i = 0; i < n; ++i)
        resid[i] -= std::pow(z, orders.beta - 1.0) * mu0[i];
    CHECK(resid.norm() <= 1e-12 * x.norm() * (std::abs(zb) + 8.0));

    // conjugation for real data
    for (int trial = 0; trial < 10; ++trial) {
        Complex zt(0.3 + u(rng) * 0.2 + 1.0, 1.0 + u(rng));
        FeVecC a = shifted_solve(q, zt, orders, u0, {});
        FeVecC b = shifted_solve(q, std::conj(zt), orders, u0, {});
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(b[i] - std::conj(a[i])));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("error quadrature and projection order") {
    auto data = [](double x) { return std::sin(kPi * x); };
    double prev = 0.0;
    for (int k = 4; k <= 6; ++k) {
        FemSystem sys = assemble(build_mesh(1, 1.0 / (1 << k)));
        double e = l2_error_against(sys, l2_project(sys, data), data);
        if (k > 4) CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.05));
        prev = e;
    }
    auto data2 = [](double x, double y) {
        return std::sin(kPi * x) * std::sin(2 * kPi * y);
    };
    prev = 0.0;
    for (int k = 3; k <= 5; ++k) {
        FemSystem sys = assemble(build_mesh(2, 1.0 / (1 << k)));
        double e = l2_error_against(sys, l2_project(sys, data2), data2);
        if (k > 3) CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.06));
        prev = e;
    }
}

namespace {

// pointwise evaluation of a P1 function from interior coefficients
double eval_p1_1d(const Mesh& mesh, const FeVec& v, double x) {
    int e = std::min(static_cast<int>(x / mesh.h), mesh.cells - 1);
    double x0 = e * mesh.h;
    double ul = e >= 1 ? v[e - 1] : 0.0;
    double ur = e + 1 <= mesh.cells - 1 ? v[e] : 0.0;
    return ul * (x0 + mesh.h - x) / mesh.h + ur * (x - x0) / mesh.h;
}

double eval_p1_2d(const Mesh& mesh, const FeVec& v, double x, double y) {
    int m = mesh.cells;
    int ci = std::min(static_cast<int>(x / mesh.h), m - 1);
    int cj = std::min(static_cast<int>(y / mesh.h), m - 1);
    double lx = x / mesh.h - ci, ly = y / mesh.h - cj;
    auto nodal = [&](int i, int j) {
        int g = j * (m + 1) + i;
        int id = mesh.interior_index[g];
        return id >= 0 ? v[id] : 0.0;
    };
    // the cell splits along the diagonal from (ci,cj) to (ci+1,cj+1)
    if (lx >= ly)  // lower triangle {v00, v10, v11}
        return nodal(ci, cj) * (1 - lx) + nodal(ci + 1, cj) * (lx - ly) +
               nodal(ci + 1, cj + 1) * ly;
    return nodal(ci, cj) * (1 - ly) + nodal(ci + 1, cj + 1) * lx +
           nodal(ci, cj + 1) * (ly - lx);
}

}  // namespace

TEST_CASE("nodal transfer between nested meshes") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);

    // prolongation reproduces the coarse FE function exactly
    Mesh c1 = build_mesh(1, 1.0 / 8);
    FeVec v(7);
    for (auto& x : v) x = u(rng);
    FeVec f = prolong(c1, v, 2);
    Mesh f1 = build_mesh(1, 1.0 / 32);
    for (int i = 0; i < 31; ++i)
        CHECK(f[i] ==
              doctest::Approx(eval_p1_1d(c1, v, f1.node_x(i))).epsilon(1e-14));
    CHECK(restrict_to(c1, f1, f) == v);

    Mesh c2 = build_mesh(2, 1.0 / 4);
    FeVec w(9);
    for (auto& x : w) x = u(rng);
    FeVec fw = prolong(c2, w, 2);
    Mesh f2 = build_mesh(2, 1.0 / 16);
    for (int i = 0; i < f2.interior_count(); ++i)
        CHECK(fw[i] == doctest::Approx(eval_p1_2d(c2, w, f2.node_x(i),
                                                  f2.node_y(i)))
                           .epsilon(1e-14));
    CHECK(restrict_to(c2, f2, fw) == w);
}
