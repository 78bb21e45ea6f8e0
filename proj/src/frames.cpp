#include "mlq/frames.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace mlq {

const char* kind_name(PotentialKind k) {
    switch (k) {
        case PotentialKind::Diagonal: return "diagonal";
        case PotentialKind::GeodesicProduct: return "geodesic";
        case PotentialKind::Equivariant: return "equivariant";
        case PotentialKind::Smyth: return "smyth";
        case PotentialKind::Custom: return "custom";
    }
    return "?";
}

Potential Potential::diagonal() { return {}; }

Potential Potential::geodesic() {
    Potential p;
    p.kind = PotentialKind::GeodesicProduct;
    return p;
}

Potential Potential::equivariant(double a, double b, double c) {
    if (a == 0 || b == 0) throw Error(Err::InvalidInput, "equivariant potential needs a, b nonzero");
    Potential p;
    p.kind = PotentialKind::Equivariant;
    p.a = a;
    p.b = b;
    p.c = c;
    return p;
}

Potential Potential::smyth(cplx c, int k) {
    double r = std::abs(c);
    if (r < 1e-14 || std::abs(r - 1.0) < 1e-14) throw Error(Err::InvalidInput, "Smyth c must avoid 0 and the unit circle");
    if (k < 1) throw Error(Err::InvalidInput, "Smyth exponent must be positive");
    Potential p;
    p.kind = PotentialKind::Smyth;
    p.smyth_c = c;
    p.k = k;
    return p;
}

bool Potential::is_constant() const {
    return kind == PotentialKind::Diagonal || kind == PotentialKind::GeodesicProduct ||
           kind == PotentialKind::Equivariant;
}

Mat2 Potential::A(cplx lambda) const {
    Mat2 m;
    cplx li = 1.0 / lambda;
    switch (kind) {
        case PotentialKind::Diagonal: m << 0, li, 0, 0; return m;
        case PotentialKind::GeodesicProduct: m << 0, li, li, 0; return m;
        case PotentialKind::Equivariant:
            m << c, a * li + b * lambda, -a * lambda - b * li, -c;
            return m;
        default: throw Error(Err::InvalidInput, "A(lambda) exists only for constant potentials");
    }
}

Mat2 Potential::xi(cplx z, cplx lambda) const {
    if (is_constant()) return A(lambda);
    if (kind == PotentialKind::Smyth) {
        Mat2 m;
        m << 0, 1.0, smyth_c * std::pow(z, k), 0;
        return m / lambda;
    }
    if (!custom) throw Error(Err::InvalidInput, "custom potential without coefficient function");
    return custom(z, lambda);
}

std::pair<cplx, cplx> Potential::minus_one(cplx z) const {
    switch (kind) {
        case PotentialKind::Diagonal: return {1.0, 0.0};
        case PotentialKind::GeodesicProduct: return {1.0, 1.0};
        case PotentialKind::Equivariant: return {a, -b};
        case PotentialKind::Smyth: return {1.0, smyth_c * std::pow(z, k)};
        case PotentialKind::Custom: break;
    }
    if (custom_minus_one) return custom_minus_one(z);
    // project onto lambda^{-1} by sampling
    const int m = 32;
    cplx c12 = 0, c21 = 0;
    for (int j = 0; j < m; ++j) {
        cplx l = std::polar(1.0, 2 * std::numbers::pi * j / m);
        Mat2 x = xi(z, l);
        c12 += x(0, 1) * l;
        c21 += x(1, 0) * l;
    }
    return {c12 / double(m), c21 / double(m)};
}

std::vector<cplx> sweep_path(cplx z0, cplx z) { return {z0, cplx(z.real(), z0.imag()), z}; }

namespace {

using State = std::vector<cplx>;

void rk4_segment(const Potential& pot, const std::vector<cplx>& lambdas, State& y, cplx za, cplx zb, int n) {
    namespace odeint = boost::numeric::odeint;
    const int m = static_cast<int>(lambdas.size());
    const cplx dz = zb - za;
    auto rhs = [&](const State& s, State& ds, double t) {
        cplx z = za + t * dz;
        for (int j = 0; j < m; ++j) {
            Mat2 phi;
            phi << s[4 * j], s[4 * j + 1], s[4 * j + 2], s[4 * j + 3];
            Mat2 d = phi * pot.xi(z, lambdas[j]) * dz;
            ds[4 * j] = d(0, 0);
            ds[4 * j + 1] = d(0, 1);
            ds[4 * j + 2] = d(1, 0);
            ds[4 * j + 3] = d(1, 1);
        }
    };
    odeint::runge_kutta4<State> stepper;
    odeint::integrate_n_steps(stepper, rhs, y, 0.0, 1.0 / n, n);
}

double state_diff(const State& a, const State& b) {
    double r = 0;
    for (size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

}  // namespace

SampledLoop solve_frame_ode(const Potential& pot, const SampledLoop& start, const std::vector<cplx>& path,
                            const OdeOptions& opt, int* steps_used) {
    const int m = start.size();
    check_sample_count(m);
    std::vector<cplx> lambdas(m);
    for (int j = 0; j < m; ++j) lambdas[j] = start.lambda(j);
    if (path.empty()) return start;

    if (pot.is_constant()) {
        SampledLoop out(m);
        cplx dz = path.back() - path.front();
        for (int j = 0; j < m; ++j) out[j] = start[j] * mat_exp(dz * pot.A(lambdas[j]));
        if (steps_used) *steps_used = 0;
        return out;
    }

    State y(4 * m);
    for (int j = 0; j < m; ++j) {
        y[4 * j] = start[j](0, 0);
        y[4 * j + 1] = start[j](0, 1);
        y[4 * j + 2] = start[j](1, 0);
        y[4 * j + 3] = start[j](1, 1);
    }
    int total = 0;
    for (size_t s = 1; s < path.size(); ++s) {
        cplx za = path[s - 1], zb = path[s];
        double len = std::abs(zb - za);
        if (len == 0) continue;
        int n = opt.density > 0 ? std::max(opt.min_steps, int(std::ceil(len * opt.density))) : opt.min_steps;
        for (;;) {
            State y1 = y, y2 = y;
            rk4_segment(pot, lambdas, y1, za, zb, n);
            rk4_segment(pot, lambdas, y2, za, zb, 2 * n);
            double err = state_diff(y1, y2) / 15.0;
            double scale = 1.0;
            for (auto& v : y2) scale = std::max(scale, std::abs(v));
            if (opt.density > 0 || err < opt.tol * scale) {
                for (size_t i = 0; i < y.size(); ++i) y[i] = y2[i] + (y2[i] - y1[i]) / 15.0;
                total += 3 * n;
                break;
            }
            n *= 2;
            if (n > opt.max_steps) throw Error(Err::StepUnderflow, "frame ODE step fell below the minimum");
        }
    }
    if (steps_used) *steps_used = total;
    SampledLoop out(m);
    for (int j = 0; j < m; ++j) out[j] << y[4 * j], y[4 * j + 1], y[4 * j + 2], y[4 * j + 3];
    return out;
}

SampledLoop solve_frame_ode(const Potential& pot, cplx z0, const std::vector<cplx>& path, int samples,
                            const OdeOptions& opt) {
    SampledLoop id(samples);
    std::vector<cplx> p = path;
    if (p.empty() || p.front() != z0) p.insert(p.begin(), z0);
    return solve_frame_ode(pot, id, p, opt);
}

DpwSource::DpwSource(Potential pot, cplx z0, IwasawaOptions iwa, int samples, OdeOptions ode)
    : pot_(std::move(pot)), z0_(z0), iwa_(iwa), m_(samples), ode_(ode) {
    check_sample_count(samples);
    if (ode_.density <= 0) ode_.density = 256;
}

SampledLoop DpwSource::phi(cplx z) const {
    return solve_frame_ode(pot_, SampledLoop(m_), sweep_path(z0_, z), ode_);
}

FrameAt DpwSource::factor(cplx z, const SampledLoop& phi, const FrameAt* warm) const {
    IwasawaResult r = iwasawa_su11(phi, iwa_, warm ? &warm->B : nullptr);
    FrameAt f;
    f.z = z;
    f.F = std::move(r.F);
    f.B = std::move(r.B);
    f.rho = f.B.at(0)(0, 0).real();
    f.residual = r.residual;
    auto [x12, x21] = pot_.minus_one(z);
    f.xi12 = x12;
    f.xi21 = x21;
    return f;
}

FrameAt DpwSource::at(cplx z, const FrameAt* warm) const { return factor(z, phi(z), warm); }

Mat2 diagonal_frame(cplx z, cplx lambda) {
    double r = std::norm(z);
    if (r >= 1.0) throw Error(Err::OutsideBigCell, "diagonal frame needs |z| < 1");
    Mat2 f;
    f << 1.0, z / lambda, std::conj(z) * lambda, 1.0;
    return f / std::sqrt(1.0 - r);
}

Mat2 geodesic_frame(cplx z, cplx lambda) {
    cplx s = z / lambda + std::conj(z) * lambda;
    Mat2 f;
    f << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
    return f;
}

cplx equivariant_f(const EllipticProfile& p, double x, cplx lambda) {
    if (x == 0) return 0.0;
    const cplx q = 4.0 * p.a * p.b * lambda * lambda;
    auto integrand = [&](double s) {
        double v = p.v(s);
        return 2.0 / (1.0 + v * v / q);
    };
    double err = 0;
    double lo = std::min(0.0, x), hi = std::max(0.0, x);
    cplx val = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, lo, hi, 10, 1e-11, &err);
    if (!std::isfinite(std::abs(val))) throw Error(Err::BranchCut, "f(x) integrand hits 4ab lambda^2 + v^2 = 0");
    return x < 0 ? -val : val;
}

namespace {

// cosh(sqrt w) and sinh(sqrt w)/sqrt w: both even in sqrt w, hence free of branch choices
void cosh_sinhc(cplx w, cplx& c, cplx& s) {
    if (std::abs(w) < 1e-6) {
        c = 1.0 + w / 2.0 + w * w / 24.0;
        s = 1.0 + w / 6.0 + w * w / 120.0;
        return;
    }
    cplx r = std::sqrt(w);
    c = std::cosh(r);
    s = std::sinh(r) / r;
}

}  // namespace

Mat2 explicit_frame_equivariant(const EllipticProfile& p, double x, double y, cplx lambda) {
    if (!p.contains(x)) throw Error(Err::OutOfInterval, "x outside the profile interval");
    const double a = p.a, b = p.b, c = p.c;
    const cplx l2 = lambda * lambda;
    const cplx z(x, y);
    const double v = p.v(x), vp = p.vp(x);
    const cplx t = a * b + (a * a + b * b - c * c) * l2 + a * b * l2 * l2;
    const cplx g = 4.0 * a * b * l2 + v * v;
    const cplx h = a * l2 + b;
    // R^2 = v h g.  R = 2 sqrt2 b h sqrt(v / 2b) sqrt(g / g(0)); along real v the quotient
    // g / g(0) moves on a straight segment from 1, so the principal root is the continuation
    // from x = 0 unless that segment runs through 0 on the real axis.
    const cplx q = g / (4.0 * a * b * l2 + 4.0 * b * b);
    if (std::abs(h) < 1e-13 || (std::abs(q.imag()) < 1e-13 * std::abs(q) && q.real() <= 1e-13))
        throw Error(Err::BranchCut, "square-root argument crosses the cut");
    const double vr = v / (2.0 * b);
    if (vr <= 0) throw Error(Err::OutOfInterval, "v changed sign");
    const cplx R = 2.0 * std::sqrt(2.0) * b * h * std::sqrt(vr) * std::sqrt(q);
    const cplx fz = equivariant_f(p, x, lambda) - z;
    cplx C, S;
    cosh_sinhc(-t * fz * fz / l2, C, S);
    const double s2 = std::sqrt(2.0);
    Mat2 F;
    F(0, 0) = g * (C - c * fz * S) / (s2 * R);
    F(0, 1) = (-lambda * (2.0 * c * v + vp) * C + (-2.0 * t * v + c * l2 * vp) * fz / lambda * S) / (s2 * R);
    F(1, 0) = R * fz / lambda * S / (v * s2);
    F(1, 1) = v * h * (2.0 * C - (vp / v) * fz * S) / (s2 * R);
    return F;
}

ExplicitSource::ExplicitSource(Potential pot, int samples) : pot_(std::move(pot)), m_(samples) {
    check_sample_count(samples);
    if (pot_.kind == PotentialKind::Equivariant) profile_ = v_profile(pot_.a, pot_.b, pot_.c);
    else if (!(pot_.kind == PotentialKind::Diagonal || pot_.kind == PotentialKind::GeodesicProduct))
        throw Error(Err::InvalidInput, "no closed-form frame for this potential");
}

Mat2 ExplicitSource::frame(cplx z, cplx lambda) const {
    switch (pot_.kind) {
        case PotentialKind::Diagonal: return diagonal_frame(z, lambda);
        case PotentialKind::GeodesicProduct: return geodesic_frame(z, lambda);
        default: return explicit_frame_equivariant(*profile_, z.real(), z.imag(), lambda);
    }
}

FrameAt ExplicitSource::at(cplx z, const FrameAt*) const {
    FrameAt f;
    f.z = z;
    f.F = SampledLoop(m_);
    SampledLoop bl(m_);
    for (int j = 0; j < m_; ++j) {
        cplx l = f.F.lambda(j);
        f.F[j] = frame(z, l);
        bl[j] = inv2(f.F[j]) * mat_exp(z * pot_.A(l));
    }
    int n = std::min(16, m_ / 2 - 1);
    f.B = to_laurent(bl, n, true);
    f.rho = f.B.at(0)(0, 0).real();
    f.residual = std::max(f.B.negative_part(), sampled_parity_residual(f.F));
    for (int j = 0; j < m_; ++j) f.residual = std::max(f.residual, su11_residual(f.F[j]));
    auto [x12, x21] = pot_.minus_one(z);
    f.xi12 = x12;
    f.xi21 = x21;
    return f;
}

FramePair extended_frame(const DpwSource& src, const Grid& grid) {
    FramePair out;
    out.grid = grid;
    out.z0 = src.basepoint();
    out.frames.assign(grid.size(), std::nullopt);
    const int m = src.samples();
    const cplx z0 = src.basepoint();
    const double y0 = z0.imag();
    const Potential& pot = src.potential();

    auto try_factor = [&](cplx z, const SampledLoop& phi, const FrameAt* warm, int i, int j) -> std::optional<FrameAt> {
        try {
            return src.factor(z, phi, warm);
        } catch (const Error& e) {
            if (i >= 0) out.holes.push_back({i, j, z, e.what()});
            return std::nullopt;
        }
    };

    FrameAt base;
    base.z = z0;
    base.F = SampledLoop(m);
    base.B = LaurentLoop::identity(src.iwasawa_options().order);
    base.rho = 1;
    std::tie(base.xi12, base.xi21) = pot.minus_one(z0);

    std::vector<int> right, left;
    for (int i = 0; i < grid.nx; ++i) (grid.x(i) >= z0.real() ? right : left).push_back(i);
    std::reverse(left.begin(), left.end());

    for (const auto* side : {&right, &left}) {
        SampledLoop phi_prev(m);
        cplx z_prev = z0;
        std::optional<FrameAt> warm_spine = base;
        for (int i : *side) {
            cplx zs(grid.x(i), y0);
            SampledLoop phi_s = solve_frame_ode(pot, phi_prev, {z_prev, zs}, src.ode_options());
            std::optional<FrameAt> fs = try_factor(zs, phi_s, warm_spine ? &*warm_spine : nullptr, -1, -1);
            if (fs) warm_spine = fs;
            phi_prev = phi_s;
            z_prev = zs;

            std::vector<int> up, down;
            for (int j = 0; j < grid.ny; ++j) (grid.y(j) >= y0 ? up : down).push_back(j);
            std::reverse(down.begin(), down.end());
            for (const auto* col : {&up, &down}) {
                SampledLoop phi_c = phi_s;
                cplx zc_prev = zs;
                std::optional<FrameAt> warm = fs;
                for (int j : *col) {
                    cplx z = grid.z(i, j);
                    phi_c = solve_frame_ode(pot, phi_c, {zc_prev, z}, src.ode_options());
                    zc_prev = z;
                    std::optional<FrameAt> f = try_factor(z, phi_c, warm ? &*warm : nullptr, i, j);
                    if (f) {
                        warm = f;
                        out.frames[grid.index(i, j)] = std::move(f);
                    }
                }
            }
        }
    }
    std::sort(out.holes.begin(), out.holes.end(),
              [](const Hole& a, const Hole& b) { return a.j != b.j ? a.j < b.j : a.i < b.i; });
    return out;
}

FramePair explicit_frames(const FrameSource& src, const Grid& grid) {
    FramePair out;
    out.grid = grid;
    out.z0 = 0;
    out.frames.assign(grid.size(), std::nullopt);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            try {
                out.frames[grid.index(i, j)] = src.at(grid.z(i, j));
            } catch (const Error& e) {
                out.holes.push_back({i, j, grid.z(i, j), e.what()});
            }
        }
    return out;
}

}  // namespace mlq
