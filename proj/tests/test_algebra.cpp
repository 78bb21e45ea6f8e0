#include <doctest.h>

#include "helpers.hpp"
#include "mlq/algebra.hpp"

using namespace mlq;
using th::pi;

TEST_CASE("bilinear and hermitian forms") {
    C4 e1 = C4::Unit(0), e3 = C4::Unit(2);
    CHECK(minkowski_form(e1, e1) == cplx(-1));
    CHECK(minkowski_form(e3, e3) == cplx(1));
    CHECK(minkowski_form(e1, e3) == cplx(0));
    C4 z(cplx(1, 2), cplx(0, 1), cplx(3, -1), cplx(0.5, 0));
    // (z, z) = <z, conj z> is real
    CHECK(std::abs(hermitian_form(z, z).imag()) < 1e-15);
    CHECK(hermitian_form(z, z).real() == doctest::Approx(-5 - 1 + 10 + 0.25));
    Vec4 x(1, 0, 0, 0);
    CHECK(eta_form(x, x) == -1);
}

TEST_CASE("su11 membership") {
    CHECK(su11_residual(Mat2::Identity()) < 1e-15);
    for (int i = 0; i < 20; ++i) CHECK(su11_residual(th::random_su11()) < 1e-12);
    Mat2 d = Mat2::Zero();
    d(0, 0) = 2;
    d(1, 1) = 0.5;
    CHECK(su11_residual(d) > 0.1);
    CHECK_FALSE(is_su11(d));
    // SU(2) rotation that is not in SU(1,1)
    Mat2 r;
    r << 0, 1, -1, 0;
    CHECK_FALSE(is_su11(r));
}

TEST_CASE("w coordinates") {
    Vec4 x(1.3, -0.2, 0.7, 0.4);
    CHECK((w_coords(w_matrix(x)) - x).norm() < 1e-15);
    Mat2 w = w_matrix(x);
    CHECK(std::abs(w.determinant().real() + eta_form(x, x)) < 1e-14);
    CHECK((w_coords(Mat2::Identity()) - Vec4(1, 0, 0, 0)).norm() == 0);
}

TEST_CASE("psi homomorphism") {
    SUBCASE("identity and minus identity") {
        CHECK((psi_hom(Mat2::Identity(), Mat2::Identity()).m - Mat4::Identity()).norm() < 1e-15);
        CHECK((psi_hom(-Mat2::Identity(), -Mat2::Identity()).m - Mat4::Identity()).norm() < 1e-15);
        CHECK((psi_hom(-Mat2::Identity(), Mat2::Identity()).m + Mat4::Identity()).norm() < 1e-15);
    }
    SUBCASE("diagonal rotation acts on the second plane") {
        const int k = 2;
        for (int l = 1; l < k + 2; ++l) {
            const double t = pi * l / (k + 2);
            Mat2 A = Mat2::Zero();
            A(0, 0) = std::polar(1.0, t);
            A(1, 1) = std::polar(1.0, -t);
            Mat4 m = psi_hom(A, A).m;
            Mat4 want = Mat4::Identity();
            want(2, 2) = want(3, 3) = std::cos(2 * t);
            want(2, 3) = std::sin(2 * t);
            want(3, 2) = -std::sin(2 * t);
            CHECK((m - want).norm() < 1e-14);
        }
    }
    SUBCASE("random pairs") {
        const Mat4 eta = eta4();
        for (int i = 0; i < 100; ++i) {
            Mat2 g1 = th::random_su11(), g2 = th::random_su11(), h1 = th::random_su11(), h2 = th::random_su11();
            Mat4 p1 = psi_hom(g1, h1).m, p2 = psi_hom(g2, h2).m, p12 = psi_hom(g1 * g2, h1 * h2).m;
            CHECK((p12 - p1 * p2).norm() / std::max(1.0, p12.norm()) < 1e-10);
            CHECK((p1.transpose() * eta * p1 - eta).norm() / std::max(1.0, p1.squaredNorm()) < 1e-10);
            CHECK(so22_residual(p1) < 1e-9);
            CHECK(std::abs(p1.determinant() - 1.0) < 1e-8 * std::max(1.0, p1.squaredNorm()));
            // direct action on a W matrix
            Vec4 x(th::uni(-1, 1), th::uni(-1, 1), th::uni(-1, 1), th::uni(-1, 1));
            Vec4 y = w_coords(g1 * w_matrix(x) * inv2(h1));
            CHECK((p1 * x - y).norm() / std::max(1.0, y.norm()) < 1e-10);
        }
    }
    SUBCASE("rejects non-SU(1,1) input") {
        Mat2 d = Mat2::Identity() * 2.0;
        CHECK_THROWS_ERR(psi_hom(d, Mat2::Identity()), Err::InvalidInput);
    }
}

TEST_CASE("su11 vectors and the Poincare disk") {
    Su11Vector v{1.2, -0.3, 0.5};
    Su11Vector w = Su11Vector::from_matrix(v.matrix());
    CHECK(std::abs(w.x1 - v.x1) + std::abs(w.x2 - v.x2) + std::abs(w.x3 - v.x3) < 1e-15);
    CHECK(su11_inner(v, v) == doctest::Approx(v.lorentz_norm()));

    CHECK(std::abs(poincare_project({1, 0, 0})) == 0);
    for (double s : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        cplx p = poincare_project({std::cosh(s), std::sinh(s), 0});
        CHECK(std::abs(p - std::tanh(s / 2)) < 1e-14);
    }
    CHECK_THROWS_ERR(poincare_project({-1, 0, 0}), Err::WrongSheet);
    CHECK_THROWS_ERR(poincare_project({2, 0, 0}), Err::NotOnHyperboloid);

    // lands in the open disk and is injective on a sample
    std::vector<cplx> seen;
    for (int i = 0; i < 50; ++i) {
        double s = th::uni(0, 3), t = th::uni(-pi, pi);
        cplx p = poincare_project({std::cosh(s), std::sinh(s) * std::cos(t), std::sinh(s) * std::sin(t)});
        CHECK(std::abs(p) < 1);
        for (cplx q : seen) CHECK(std::abs(p - q) > 1e-12);
        seen.push_back(p);
    }
}

TEST_CASE("matrix exponential") {
    CHECK(th::dist(mat_exp(Mat2::Zero()), Mat2::Identity()) == 0);
    Mat2 n;
    n << 0, 1, 0, 0;
    Mat2 want;
    want << 1, 1, 0, 1;
    CHECK(th::dist(mat_exp(n), want) < 1e-15);
    for (double s : {0.3, 1.0, 3.0}) {
        Mat2 m;
        m << 0, s, s, 0;
        Mat2 e = mat_exp(m);
        CHECK(std::abs(e(0, 0) - std::cosh(s)) < 1e-14 * std::cosh(s));
        CHECK(std::abs(e(0, 1) - std::sinh(s)) < 1e-14 * std::cosh(s));
    }
    for (int i = 0; i < 100; ++i) {
        Mat2 m = th::random_mat(3.0);
        Mat2 e = mat_exp(m), ei = mat_exp(-m);
        CHECK(th::dist(e * ei, Mat2::Identity()) < 1e-10);
        Mat2 ref = th::exp2_closed(m);
        CHECK(th::dist(e, ref) / std::max(1.0, ref.cwiseAbs().maxCoeff()) < 1e-12);
    }
    Mat2 big;
    big << 0, 60, 60, 0;
    CHECK_THROWS_ERR(mat_exp(big), Err::Overflow);
}
