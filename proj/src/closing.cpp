#include "mlq/closing.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace mlq {

namespace {

// Re(lambda0^2) snapped to a nearby small-denominator rational, so that b comes out exact
// for the standard angles.
double snap_rational(double r) {
    for (int q = 1; q <= 24; ++q) {
        double p = std::round(r * q);
        if (std::abs(r - p / q) < 1e-9) return p / q;
    }
    return r;
}

Mat2 exp_by_squaring(const Mat2& x) {
    int k = 0;
    double nrm = x.cwiseAbs().rowwise().sum().maxCoeff();
    while (nrm > 1.0) {
        nrm /= 2;
        ++k;
    }
    Mat2 e = mat_exp(x / std::ldexp(1.0, k));
    for (int i = 0; i < k; ++i) e = e * e;
    return e;
}

}  // namespace

ClosingParams solve_closing(int m, int n, cplx lambda0, double a, int sign_c) {
    if (m <= 0 || n <= 0) throw Error(Err::InvalidInput, "m and n must be positive integers");
    if (a == 0 || !std::isfinite(a)) throw Error(Err::InvalidInput, "a must be a nonzero real");
    if (sign_c != 1 && sign_c != -1) throw Error(Err::InvalidInput, "sign_c must be +1 or -1");
    if (std::abs(std::abs(lambda0) - 1.0) > 1e-12) throw Error(Err::InvalidInput, "lambda0 must be unimodular");
    const double re2 = (lambda0 * lambda0).real();
    if (std::abs(re2) < 1e-12) throw Error(Err::DegenerateLambda0, "Re(lambda0^2) = 0");
    if (m == n) throw Error(Err::ZeroB, "m = n forces b = 0");
    ClosingParams p;
    p.m = m;
    p.n = n;
    p.lambda0 = lambda0;
    p.a = a;
    p.b = double(n * n - m * m) / (16 * a * snap_rational(re2));
    p.c = sign_c * std::sqrt(a * a + p.b * p.b + double(m * m + n * n) / 8);
    const double plus = std::norm(lambda0 * a + p.b / lambda0);
    const double minus = std::norm(lambda0 * a - p.b / lambda0);
    p.residual_m = std::abs(2 * std::sqrt(p.c * p.c - plus) - m);
    p.residual_n = std::abs(2 * std::sqrt(p.c * p.c - minus) - n);
    p.profile = v_profile(p.a, p.b, p.c);
    return p;
}

const char* monodromy_name(MonodromyClass c) {
    switch (c) {
        case MonodromyClass::PlusId: return "plus_id";
        case MonodromyClass::MinusId: return "minus_id";
        case MonodromyClass::Nontrivial: return "nontrivial";
    }
    return "?";
}

Monodromy monodromy(const Potential& pot, cplx lambda, double tol) {
    Monodromy r;
    r.matrix = exp_by_squaring(2 * std::numbers::pi * I * pot.A(lambda));
    const double dp = (r.matrix - Mat2::Identity()).cwiseAbs().maxCoeff();
    const double dm = (r.matrix + Mat2::Identity()).cwiseAbs().maxCoeff();
    r.residual = std::min(dp, dm);
    if (dp < tol) r.cls = MonodromyClass::PlusId;
    else if (dm < tol) r.cls = MonodromyClass::MinusId;
    return r;
}

Diagonalization diagonalize_su11(const Mat2& A, double tol) {
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if (std::abs(A.trace()) > tol * scale) throw Error(Err::NotElliptic, "A is not traceless");
    const cplx mu2 = -A.determinant();
    if (std::abs(mu2.imag()) > tol * scale * scale || mu2.real() <= tol * scale * scale)
        throw Error(Err::NotElliptic, "eigenvalues are not real and distinct");
    const double mu = std::sqrt(mu2.real());
    auto eigvec = [&](double ev) {
        Eigen::Vector2cd r0(A(0, 0) - ev, A(0, 1)), r1(A(1, 0), A(1, 1) - ev);
        Eigen::Vector2cd v;
        if (r0.norm() >= r1.norm()) v << -r0[1], r0[0];
        else v << -r1[1], r1[0];
        return v;
    };
    for (double ev : {-mu, mu}) {
        Eigen::Vector2cd v = eigvec(ev);
        double nrm = std::norm(v[0]) - std::norm(v[1]);
        if (nrm > tol * v.squaredNorm()) {
            // fix the phase so that P(0,0) > 0
            v *= std::conj(v[0]) / (std::abs(v[0]) * std::sqrt(nrm));
            Diagonalization d;
            d.P << v[0], std::conj(v[1]), v[1], std::conj(v[0]);
            d.mu = -ev;
            Mat2 D = Mat2::Zero();
            D(0, 0) = -d.mu;
            D(1, 1) = d.mu;
            d.residual = (inv2(d.P) * A * d.P - D).cwiseAbs().maxCoeff();
            return d;
        }
    }
    throw Error(Err::NotElliptic, "eigenvectors are lightlike");
}

std::vector<double> default_x_samples(const EllipticProfile& prof, int count) {
    if (count < 2) throw Error(Err::InvalidInput, "need at least two x samples");
    const double w = prof.hi() - prof.lo();
    const double lo = prof.lo() + 0.02 * w, hi = prof.hi() - 0.02 * w;
    std::vector<double> xs(count);
    for (int i = 0; i < count; ++i) xs[i] = lo + (hi - lo) * i / (count - 1);
    return xs;
}

ProfileCurves profile_curves(const ClosingParams& p, const std::vector<double>& xs, double y) {
    const Potential pot = p.potential();
    const cplx l0 = p.lambda0, l1 = I * p.lambda0;
    Diagonalization d1 = diagonalize_su11(pot.A(l0)), d2 = diagonalize_su11(pot.A(l1));
    const Mat2 p1i = inv2(d1.P), p2i = inv2(d2.P);
    const Mat2 s = I * sigma3();
    ProfileCurves out;
    out.y = y;
    for (double x : xs) {
        Mat2 F = explicit_frame_equivariant(p.profile, x, y, l0);
        Mat2 G = explicit_frame_equivariant(p.profile, x, y, l1);
        Mat2 phi = p1i * F * s * inv2(F) * d1.P;
        Mat2 psi = p2i * G * s * inv2(G) * d2.P;
        out.x.push_back(x);
        out.w1.push_back(poincare_project(Su11Vector::from_matrix(phi), 1e-8));
        out.w2.push_back(poincare_project(Su11Vector::from_matrix(psi), 1e-8));
    }
    return out;
}

std::pair<double, double> rotation_law_residual(const ClosingParams& p, const std::vector<double>& xs, double y,
                                                double theta) {
    const Potential pot = p.potential();
    const double mu1 = diagonalize_su11(pot.A(p.lambda0)).mu;
    const double mu2 = diagonalize_su11(pot.A(I * p.lambda0)).mu;
    ProfileCurves a = profile_curves(p, xs, y), b = profile_curves(p, xs, y + theta);
    const cplx r1 = std::polar(1.0, -2 * mu1 * theta), r2 = std::polar(1.0, -2 * mu2 * theta);
    double e1 = 0, e2 = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        e1 = std::max(e1, std::abs(b.w1[i] - r1 * a.w1[i]));
        e2 = std::max(e2, std::abs(b.w2[i] - r2 * a.w2[i]));
    }
    return {e1, e2};
}

double catenoid_metric(const ClosingParams& p, double x) {
    if (!p.profile.contains(x)) throw Error(Err::OutOfInterval, "x outside the profile interval");
    const double v = p.profile.v(x);
    return 0.5 * (v * v + 16 * p.a * p.a * p.b * p.b / (v * v));
}

EndDiagnostics end_diagnostics(const ClosingParams& p) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double half = 0.5 * (p.profile.hi() - p.profile.lo());
    auto f = [&](double x) { return std::sqrt(catenoid_metric(p, x)); };
    EndDiagnostics d;
    double prev_r = 0, prev_l = 0, xr = p.profile.lo() + half, xl = xr;
    for (int k = 2; k <= 7; ++k) {
        const double delta = std::pow(10.0, -k) * half;
        const double r_end = p.profile.hi() - delta, l_end = p.profile.lo() + delta;
        // each segment spans one decade of distance to the end, so the integrand stays tame
        prev_r += GK::integrate(f, xr, r_end, 12, 1e-10);
        prev_l += GK::integrate(f, l_end, xl, 12, 1e-10);
        xr = r_end;
        xl = l_end;
        d.right.push_back(prev_r);
        d.left.push_back(prev_l);
    }
    const size_t n = d.right.size();
    d.right_slope = d.right[n - 1] - d.right[n - 2];
    d.left_slope = d.left[n - 1] - d.left[n - 2];
    auto steady = [](const std::vector<double>& s) {
        const size_t m = s.size();
        const double a = s[m - 1] - s[m - 2], b = s[m - 2] - s[m - 3];
        return a > 1e-3 && b > 1e-3 && a > 0.5 * b;
    };
    d.consistent_with_completeness = steady(d.right) && steady(d.left);
    return d;
}

PeriodCheck period_check(const ClosingParams& p, cplx z) {
    auto lift = [&](cplx w) {
        Mat2 F = explicit_frame_equivariant(p.profile, w.real(), w.imag(), p.lambda0);
        Mat2 G = explicit_frame_equivariant(p.profile, w.real(), w.imag(), I * p.lambda0);
        Mat2 gi = inv2(G);
        return w_coords_c(F * gi, I * F * sigma3() * gi);
    };
    C4 a = lift(z), b = lift(z + 2 * std::numbers::pi * I);
    return {(b - a).norm() / a.norm(), (b + a).norm() / a.norm()};
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

std::string profile_csv(const ProfileCurves& c) {
    std::ostringstream os;
    os << "x,re_w1,im_w1,re_w2,im_w2\n";
    for (size_t i = 0; i < c.x.size(); ++i)
        os << fmt(c.x[i]) << ',' << fmt(c.w1[i].real()) << ',' << fmt(c.w1[i].imag()) << ',' << fmt(c.w2[i].real())
           << ',' << fmt(c.w2[i].imag()) << '\n';
    return os.str();
}

std::string profile_svg(const ProfileCurves& c) {
    const double cx = 400, cy = 400, r = 380;
    auto pt = [&](cplx w) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.4f,%.4f", cx + r * w.real(), cy - r * w.imag());
        return std::string(buf);
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
    os << "<circle cx=\"400\" cy=\"400\" r=\"380\" fill=\"none\" stroke=\"black\"/>\n";
    const char* colors[2] = {"#1f5fbf", "#bf3f1f"};
    const std::vector<cplx>* curves[2] = {&c.w1, &c.w2};
    for (int k = 0; k < 2; ++k) {
        os << "<polyline id=\"w" << k + 1 << "\" fill=\"none\" stroke=\"" << colors[k] << "\" points=\"";
        for (size_t i = 0; i < curves[k]->size(); ++i) os << (i ? " " : "") << pt((*curves[k])[i]);
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mlq
