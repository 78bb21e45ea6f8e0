#pragma once
#include <cmath>
#include <numbers>
#include <random>

#include "mlq/algebra.hpp"
#include "mlq/loops.hpp"

namespace th {

using mlq::cplx;
using mlq::I;
using mlq::Mat2;
constexpr double pi = std::numbers::pi;

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}
inline double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

// [[cosh r e^{it}, sinh r e^{-ip}], [sinh r e^{ip}, cosh r e^{-it}]]
inline Mat2 random_su11(double rmax = 1.5) {
    double r = uni(0, rmax), t = uni(-pi, pi), p = uni(-pi, pi);
    Mat2 m;
    m << std::cosh(r) * std::polar(1.0, t), std::sinh(r) * std::polar(1.0, -p), std::sinh(r) * std::polar(1.0, p),
        std::cosh(r) * std::polar(1.0, -t);
    return m;
}

inline Mat2 random_mat(double scale) {
    Mat2 m;
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = cplx(uni(-scale, scale), uni(-scale, scale));
    return m;
}

inline double dist(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

template <class Fn>
mlq::SampledLoop sampled(int m, Fn f) {
    mlq::SampledLoop g(m);
    for (int j = 0; j < m; ++j) g[j] = f(g.lambda(j));
    return g;
}

inline double loop_dist(const mlq::SampledLoop& a, const mlq::SampledLoop& b) {
    double d = 0;
    for (int j = 0; j < a.size(); ++j) d = std::max(d, dist(a[j], b[j]));
    return d;
}

// 2x2 exponential from exp(M) = e^{t}(cosh d I + sinh(d)/d (M - t I)), t = tr/2, d^2 = -det(M - tI)
inline Mat2 exp2_closed(const Mat2& m) {
    cplx t = m.trace() / 2.0;
    Mat2 n = m - t * Mat2::Identity();
    cplx d = std::sqrt(-n.determinant());
    cplx s = std::abs(d) < 1e-8 ? 1.0 + d * d / 6.0 : std::sinh(d) / d;
    return std::exp(t) * (std::cosh(d) * Mat2::Identity() + s * n);
}

}  // namespace th

#define CHECK_THROWS_ERR(expr, want)                  \
    do {                                              \
        bool caught_ = false;                         \
        try {                                         \
            (void)(expr);                             \
        } catch (const mlq::Error& e_) {              \
            caught_ = true;                           \
            CHECK_MESSAGE(e_.code() == (want), e_.what()); \
        }                                             \
        CHECK_MESSAGE(caught_, "no mlq::Error thrown"); \
    } while (0)
