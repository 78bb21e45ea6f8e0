#include <doctest.h>

#include "helpers.hpp"
#include "mlq/frames.hpp"
#include "mlq/loops.hpp"

using namespace mlq;
using th::dist;
using th::loop_dist;
using th::sampled;

namespace {

Mat2 upper_unipotent(cplx z, cplx l) {
    Mat2 m;
    m << 1, z / l, 0, 1;
    return m;
}

// twisted positive loop diag(rho, 1/rho) exp(lambda X1 + lambda^2 X2)
Mat2 positive_factor(cplx l, double rho, double s = 1) {
    Mat2 x1, x2, d = Mat2::Zero();
    x1 << 0, cplx(0.2, 0.1), cplx(-0.15, 0.05), 0;
    x2 << cplx(0.1, -0.05), 0, 0, cplx(-0.1, 0.05);
    d(0, 0) = rho;
    d(1, 1) = 1 / rho;
    return d * mat_exp(s * (l * x1 + l * l * x2));
}

Mat2 twisted_unitary(cplx l) { return diagonal_frame({0.3, 0.2}, l) * geodesic_frame({0.1, -0.2}, l); }

}  // namespace

TEST_CASE("Laurent loops sample and recover") {
    LaurentLoop g(3, true);
    g.at(0) = Mat2::Identity();
    g.at(1) << 0, cplx(0.5, 0.1), cplx(-0.2, 0), 0;
    g.at(-1) << 0, cplx(0, 0.3), cplx(0.1, 0.1), 0;
    g.at(2) << cplx(0.05, 0), 0, 0, cplx(0, -0.05);
    CHECK(g.parity_residual() == 0);
    SampledLoop s = sample_loop(g, 16);
    CHECK(dist(s[3], g.eval(s.lambda(3))) < 1e-15);
    LaurentLoop h = to_laurent(s, 3, true);
    for (int k = -3; k <= 3; ++k) CHECK(dist(h.at(k), g.at(k)) < 1e-14);
    CHECK(sampled_parity_residual(s) < 1e-14);
    CHECK(dist(interpolate(s, std::polar(1.0, 0.37)), g.eval(std::polar(1.0, 0.37))) < 1e-13);
    // rotated() is lambda -> i lambda
    CHECK(dist(s.rotated(1), g.eval(I * s.lambda(1))) < 1e-14);

    LaurentLoop odd(1, false);
    odd.at(1) = Mat2::Identity();
    CHECK(odd.parity_residual() == doctest::Approx(1.0));
    CHECK(odd.positive_part() == doctest::Approx(1.0));
    CHECK(odd.negative_part() == 0);

    CHECK_THROWS_ERR(check_sample_count(18), Err::InvalidInput);
    CHECK_THROWS_ERR(to_laurent(s, 8, true), Err::InvalidInput);
}

TEST_CASE("pointwise loop group operations") {
    SampledLoop a = sampled(32, [](cplx l) { return twisted_unitary(l); });
    SampledLoop id(32);
    CHECK(loop_dist(loop_mul(a, loop_inv(a)), id) < 1e-13);
    CHECK(sampled_parity_residual(loop_mul(a, a)) < 1e-12);
    for (int j = 0; j < a.size(); ++j) CHECK(su11_residual(loop_inv(a)[j]) < 1e-12);

    SampledLoop d = sampled(16, [](cplx l) {
        Mat2 m = Mat2::Zero();
        m(0, 0) = l;
        m(1, 1) = 1.0 / l;
        return m;
    });
    SampledLoop di = loop_inv(d);
    for (int j = 0; j < 16; ++j) CHECK(std::abs(di[j](0, 0) - 1.0 / d.lambda(j)) < 1e-15);

    SampledLoop sing(8);
    sing[5] = Mat2::Zero();
    CHECK_THROWS_ERR(loop_inv(sing), Err::SingularSample);
    CHECK_THROWS_ERR(loop_mul(SampledLoop(8), SampledLoop(12)), Err::SizeMismatch);
}

TEST_CASE("Iwasawa splitting") {
    IwasawaOptions opt;
    SUBCASE("unitary loops are their own frame") {
        SampledLoop u = sampled(64, twisted_unitary);
        IwasawaResult r = iwasawa_su11(u, opt);
        CHECK(loop_dist(r.F, u) < 1e-10);
        CHECK(r.rho() == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("diagonal potential at z = 1/2") {
        SampledLoop phi = sampled(64, [](cplx l) { return upper_unipotent(0.5, l); });
        IwasawaResult r = iwasawa_su11(phi, opt);
        double worst = 0;
        for (int j = 0; j < 64; ++j) {
            cplx l = phi.lambda(j);
            Mat2 f;
            f << 1, 0.5 / l, 0.5 * l, 1;
            f *= 2 / std::sqrt(3.0);
            worst = std::max(worst, dist(r.F[j], f));
        }
        CHECK(worst < 1e-10);
        CHECK(r.rho() == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(r.B.negative_part() == 0);
        CHECK(r.residual < kTauIwa);
    }
    SUBCASE("recovers a synthetic product") {
        const double rho = 1.7;
        SampledLoop f0 = sampled(64, twisted_unitary);
        SampledLoop b0 = sampled(64, [&](cplx l) { return positive_factor(l, rho); });
        IwasawaResult r = iwasawa_su11(loop_mul(f0, b0), opt);
        CHECK(loop_dist(r.F, f0) < 1e-9);
        CHECK(loop_dist(sample_loop(r.B, 64), b0) < 1e-9);
        CHECK(r.rho() == doctest::Approx(rho).epsilon(1e-10));
        CHECK(sampled_parity_residual(r.F) < 1e-10);
        CHECK(r.B.parity_residual() < 1e-10);
        Mat2 b00 = r.B.at(0);
        CHECK(std::abs(b00(0, 1)) + std::abs(b00(1, 0)) < 1e-12);
        CHECK(std::abs(b00(0, 0).imag()) < 1e-12);
        for (int j = 0; j < 64; ++j) CHECK(su11_residual(r.F[j]) < 1e-10);

        // a warm start lands on the same factorization
        IwasawaResult w = iwasawa_su11(loop_mul(f0, b0), opt, &r.B);
        CHECK(w.used_warm_start);
        CHECK(loop_dist(w.F, r.F) < 1e-12);

        // truncation order, on a milder positive factor
        SampledLoop phi = loop_mul(f0, sampled(64, [&](cplx l) { return positive_factor(l, rho, 0.3); }));
        IwasawaOptions o8 = opt;
        o8.order = 8;
        IwasawaResult r8 = iwasawa_su11(phi, o8), r16 = iwasawa_su11(phi, opt);
        CHECK(loop_dist(r8.F, r16.F) < kTauIwa);
        CHECK(loop_dist(r16.F, f0) < 1e-10);
    }
    SUBCASE("outside the big cell") {
        SampledLoop phi = sampled(64, [](cplx l) { return upper_unipotent(1.2, l); });
        CHECK_THROWS_ERR(iwasawa_su11(phi, opt), Err::OutsideBigCell);
    }
}

TEST_CASE("Birkhoff splitting") {
    SampledLoop id(32);
    BirkhoffResult r = birkhoff_plus_minus(id, 8);
    CHECK(loop_dist(sample_loop(r.minus, 32), id) < 1e-14);
    CHECK(loop_dist(sample_loop(r.plus, 32), id) < 1e-14);

    SampledLoop bp = sampled(64, [](cplx l) { return positive_factor(l, 1.3); });
    r = birkhoff_plus_minus(bp, 16);
    CHECK(loop_dist(sample_loop(r.minus, 64), SampledLoop(64)) < 1e-10);
    CHECK(loop_dist(sample_loop(r.plus, 64), bp) < 1e-10);

    Mat2 y;
    y << 0, cplx(0.3, 0.2), cplx(0.1, -0.4), 0;
    SampledLoop mm = sampled(64, [&](cplx l) { return mat_exp(y / l); });
    SampledLoop phi = loop_mul(mm, bp);
    r = birkhoff_plus_minus(phi, 16);
    CHECK(r.minus.positive_part() < 1e-14);
    CHECK(dist(r.minus.at(0), Mat2::Identity()) < 1e-10);
    CHECK(loop_dist(sample_loop(r.minus, 64), mm) < 1e-9);
    CHECK(loop_dist(loop_mul(sample_loop(r.minus, 64), sample_loop(r.plus, 64)), phi) < 1e-9);
}

TEST_CASE("loop json") {
    LaurentLoop g(2, true);
    g.at(0) = Mat2::Identity() * 1.25;
    g.at(1) << 0, cplx(0.1, 0.2), cplx(0.3, -0.4), 0;
    g.at(-2) << cplx(1e-17, 3), 0, 0, cplx(-2, 0);
    LaurentLoop h = loop_from_json(loop_to_json(g));
    CHECK(h.order == 2);
    CHECK(h.twisted);
    for (int k = -2; k <= 2; ++k) CHECK(h.at(k) == g.at(k));
    CHECK_THROWS_ERR(loop_from_json("{\"order\": 1}"), Err::InvalidInput);
    CHECK_THROWS_ERR(loop_from_json("not json"), Err::InvalidInput);
}
