#include <vector>
#include "mlq/elliptic.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace mlq {

namespace {

SnCnDn landen(cplx u, cplx m, int depth) {
    if (depth > 40) throw Error(Err::NoConvergence, "Landen descent did not converge");
    if (std::abs(m) < 1e-9) {
        cplx s = std::sin(u), c = std::cos(u);
        cplx t = 0.25 * m * (u - s * c);
        return {s - t * c, c + t * s, 1.0 - 0.5 * m * s * s};
    }
    cplx kp = std::sqrt(1.0 - m);
    if (kp.real() < 0) kp = -kp;
    cplx k1 = (1.0 - kp) / (1.0 + kp);
    cplx u1 = u / (1.0 + k1);
    SnCnDn r = landen(u1, k1 * k1, depth + 1);
    cplx s2 = r.sn * r.sn;
    cplx den = 1.0 + k1 * s2;
    return {(1.0 + k1) * r.sn / den, r.cn * r.dn / den, (1.0 - k1 * s2) / den};
}

}  // namespace

SnCnDn jacobi_sncndn(cplx u, cplx m) {
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag()) || !std::isfinite(std::abs(m)))
        throw Error(Err::InvalidInput, "non-finite argument to jacobi_sn");
    if (std::abs(m) > 100.0) throw Error(Err::InvalidInput, "|k| beyond 10");
    if (std::abs(m - 1.0) < 1e-15) {
        cplx t = std::tanh(u), s = 1.0 / std::cosh(u);
        return {t, s, s};
    }
    if (std::abs(m) > 1.0) {
        cplx k = std::sqrt(m);
        SnCnDn r = landen(k * u, 1.0 / m, 0);
        return {r.sn / k, r.dn, r.cn};
    }
    return landen(u, m, 0);
}

cplx jacobi_sn(cplx u, cplx k) { return jacobi_sncndn(u, k * k).sn; }

cplx carlson_rf(cplx x, cplx y, cplx z) {
    // duplication; tolerance chosen for ~1e-16 relative error (Carlson 1995)
    for (int it = 0; it < 200; ++it) {
        cplx a = (x + y + z) / 3.0;
        double dev = std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z)});
        if (dev < 1e-4 * std::abs(a)) {
            cplx X = (a - x) / a, Y = (a - y) / a, Z = -(X + Y);
            cplx e2 = X * Y - Z * Z, e3 = X * Y * Z;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
        }
        cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        cplx lam = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    throw Error(Err::NoConvergence, "carlson_rf");
}

cplx ellip_k(cplx m) { return carlson_rf(0.0, 1.0 - m, 1.0); }

cplx inverse_sn(cplx s, cplx m) {
    cplx w = s * carlson_rf(1.0 - s * s, 1.0 - m * s * s, 1.0);
    for (int it = 0; it < 50; ++it) {
        SnCnDn r = jacobi_sncndn(w, m);
        cplx d = r.cn * r.dn;
        if (std::abs(d) < 1e-300) break;
        cplx step = (r.sn - s) / d;
        w -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    if (std::abs(jacobi_sncndn(w, m).sn - s) > 1e-10 * std::max(1.0, std::abs(s)))
        throw Error(Err::NoConvergence, "inverse_sn");
    return w;
}

cplx EllipticProfile::v_complex(double x) const {
    return sqrtZ1 * jacobi_sncndn(sqrtZ2 * (x - x0), m).sn;
}

double EllipticProfile::v(double x) const { return v_complex(x).real(); }

double EllipticProfile::vp(double x) const {
    SnCnDn r = jacobi_sncndn(sqrtZ2 * (x - x0), m);
    return (sqrtZ1 * sqrtZ2 * r.cn * r.dn).real();
}

double EllipticProfile::ode_residual(double x) const {
    double vv = v(x), d = vp(x);
    double rhs = (vv * vv - 4 * a * a) * (vv * vv - 4 * b * b) + 4 * c * c * vv * vv;
    return std::abs(d * d - rhs) / std::max(1.0, std::abs(rhs));
}

double integrate_v(double a, double b, double c, double x, double tol) {
    using namespace boost::numeric::odeint;
    using state = std::array<double, 2>;
    const double shift = 2 * a * a + 2 * b * b - 2 * c * c;
    auto rhs = [&](const state& s, state& ds, double) {
        ds[0] = s[1];
        ds[1] = 2 * s[0] * (s[0] * s[0] - shift);
    };
    state s{2 * b, -4 * b * c};
    if (x == 0) return s[0];
    auto stepper = make_controlled(tol, tol, runge_kutta_fehlberg78<state>());
    integrate_adaptive(stepper, rhs, s, 0.0, x, x / 1000.0);
    return s[0];
}

EllipticProfile v_profile(double a, double b, double c, bool cross_check) {
    if (a == 0 || b == 0) throw Error(Err::InvalidInput, "a and b must be nonzero");
    EllipticProfile p;
    p.a = a;
    p.b = b;
    p.c = c;
    const double D = a * a + b * b - c * c;
    const double disc = D * D - 4 * a * a * b * b;
    if (std::abs(disc) < 1e-12 * std::max(1.0, D * D))
        throw Error(Err::DegenerateDiscriminant, "(a^2+b^2-c^2)^2 = 4a^2b^2");
    cplx sq = std::sqrt(cplx(disc, 0.0));
    p.Z1 = 2.0 * D - 2.0 * sq;
    p.Z2 = 2.0 * D + 2.0 * sq;
    // the formula is symmetric under Z1 <-> Z2; keep |m| <= 1
    if (std::abs(p.Z1) > std::abs(p.Z2) * (1 + 1e-12)) std::swap(p.Z1, p.Z2);
    p.sqrtZ1 = std::sqrt(p.Z1);
    p.sqrtZ2 = std::sqrt(p.Z2);
    p.m = p.Z1 / p.Z2;
    p.K = ellip_k(p.m);
    p.Kp = ellip_k(1.0 - p.m);

    // sn(w0) = 2b / sqrt(Z1) with w0 = -sqrt(Z2) x0; pick w0 or 2K - w0 by the sign of v'(0)
    const cplx s0 = 2.0 * b / p.sqrtZ1;
    const double vp0 = -4.0 * b * c;
    // v(0) on a root of the quartic (c = 0) is a double point of sn, where Newton only
    // gets half the digits; use K or K + iK' directly there
    std::vector<cplx> cands;
    if (std::abs(s0 * s0 - 1.0) < 1e-10) cands = {p.K, -p.K};
    else if (std::abs(p.m * s0 * s0 - 1.0) < 1e-10) cands = {p.K + I * p.Kp, p.K - I * p.Kp, -p.K + I * p.Kp};
    else {
        cplx w = inverse_sn(s0, p.m);
        cands = {w, 2.0 * p.K - w};
    }
    cplx best = cands[0];
    double best_err = std::numeric_limits<double>::infinity();
    for (cplx cand : cands) {
        SnCnDn r = jacobi_sncndn(cand, p.m);
        double err = std::abs(p.sqrtZ1 * p.sqrtZ2 * r.cn * r.dn - vp0) + std::abs(p.sqrtZ1 * r.sn - 2.0 * b);
        if (err < best_err) {
            best_err = err;
            best = cand;
        }
    }
    p.x0 = -best / p.sqrtZ2;

    // zeros of sn at 2jK + 2ilK', poles at 2jK + (2l+1)iK'; keep those hit by real x
    const cplx w1 = 2.0 * p.K / p.sqrtZ2, w2 = I * p.Kp / p.sqrtZ2;
    double hi = std::numeric_limits<double>::infinity(), lo = -std::numeric_limits<double>::infinity();
    const int J = 64;
    for (int j = -J; j <= J; ++j)
        for (int l = -2 * J; l <= 2 * J; ++l) {
            cplx xc = p.x0 + double(j) * w1 + double(l) * w2;
            if (std::abs(xc.imag()) > 1e-9 * (1.0 + std::abs(xc.real()))) continue;
            double xr = xc.real();
            if (std::abs(xr) < 1e-14) continue;
            if (xr > 0) hi = std::min(hi, xr);
            if (xr < 0) lo = std::max(lo, xr);
        }
    p.kappa2sq = hi;
    p.kappa1sq = -lo;

    if (cross_check) {
        // closed form vs direct integration on half the interval
        double worst = 0;
        for (double side : {-1.0, 1.0}) {
            double end = side > 0 ? p.hi() : p.lo();
            if (!std::isfinite(end)) end = side * 1.0;
            for (int i = 1; i <= 8; ++i) {
                double x = 0.5 * end * i / 8.0;
                double ref = integrate_v(a, b, c, x);
                worst = std::max(worst, std::abs(p.v(x) - ref) / std::max(1.0, std::abs(ref)));
            }
        }
        p.ode_check = worst;
    }
    return p;
}

}  // namespace mlq
