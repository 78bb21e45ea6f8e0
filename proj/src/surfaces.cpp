#include "mlq/surfaces.hpp"

#include <cmath>
#include <numbers>

namespace mlq {

namespace {

Mat2 loop_value(const SampledLoop& g, cplx lambda) {
    const int m = g.size();
    double t = std::arg(lambda) / (2 * std::numbers::pi) * m;
    int j = static_cast<int>(std::lround(t));
    if (std::abs(t - j) < 1e-9) return g[((j % m) + m) % m];
    return interpolate(g, lambda);
}

cplx dot(const C4& a, const C4& b) { return minkowski_form(a, b); }

}  // namespace

FramePoint frame_point(const FrameAt& fa, cplx lambda) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw Error(Err::InvalidInput, "lambda must lie on the unit circle");
    return {loop_value(fa.F, lambda), loop_value(fa.F, I * lambda)};
}

C4 surface_q2(const FramePoint& p) {
    Mat2 fi = inv2(p.Fi);
    Mat2 x = p.F * fi;
    Mat2 y = I * p.F * sigma3() * fi;
    return w_coords_c(x, y);
}

std::pair<Su11Vector, Su11Vector> surface_h2xh2(const FramePoint& p) {
    Mat2 s = I * sigma3();
    return {Su11Vector::from_matrix(p.F * s * inv2(p.F)), Su11Vector::from_matrix(p.Fi * s * inv2(p.Fi))};
}

std::pair<Vec4, Vec4> surface_ads3(const FramePoint& p) {
    const cplx e = std::polar(1.0, std::numbers::pi / 4);
    Mat2 d1 = Mat2::Zero(), d2 = Mat2::Zero();
    d1(0, 0) = std::conj(e);
    d1(1, 1) = e;
    d2(0, 0) = e;
    d2(1, 1) = std::conj(e);
    Mat2 fi = inv2(p.Fi);
    return {w_coords(p.F * d1 * fi), w_coords(p.F * d2 * fi)};
}

C4 horizontal_lift(const FramePoint& p) {
    auto [f, n] = surface_ads3(p);
    return (f.cast<cplx>() + I * n.cast<cplx>()) / std::sqrt(2.0);
}

C4 phase_fixed(const C4& lift) {
    for (int k = 0; k < 4; ++k) {
        if (std::abs(lift[k]) > 1e-12) return lift[k].real() < 0 ? C4(-lift) : lift;
    }
    return lift;
}

FrameInvariants frame_invariants(const FrameAt& fa, cplx lambda) {
    FrameInvariants r;
    const double rho = fa.rho;
    const double e_uhat = 2 * std::pow(rho, 4) * std::norm(fa.xi12);
    if (!(e_uhat > 0)) throw Error(Err::DegenerateFrame, "xi12 vanishes, no metric");
    r.uhat = std::log(e_uhat);
    r.alphahat = 2.0 * fa.xi12 * fa.xi21 / (lambda * lambda);
    const double a2 = std::norm(r.alphahat);
    r.u = std::log(0.5 * (e_uhat + a2 / e_uhat));
    r.betahat = 0.5 * std::abs(e_uhat - a2 / e_uhat);
    return r;
}

SurfaceSample make_sample(const FrameAt& fa, cplx lambda) {
    FramePoint p = frame_point(fa, lambda);
    SurfaceSample s;
    s.z = fa.z;
    s.lift = phase_fixed(surface_q2(p));
    std::tie(s.phi, s.psi) = surface_h2xh2(p);
    std::tie(s.fmax, s.N) = surface_ads3(p);
    FrameInvariants inv = frame_invariants(fa, lambda);
    s.u = inv.u;
    s.uhat = inv.uhat;
    s.alphahat = inv.alphahat;
    s.betahat = inv.betahat;
    s.Q = I * inv.alphahat;
    return s;
}

MetricSplit metric_split(double u, cplx alphahat, double tol) {
    const double eu = std::exp(u);
    const double d = eu * eu - std::norm(alphahat);
    if (d < -tol * std::max(1.0, eu * eu)) throw Error(Err::DomainError, "e^{2u} < |alphahat|^2");
    const double s = std::sqrt(std::max(0.0, d));
    return {eu + s, eu - s};
}

LiftInvariants invariants_from_lift(const Jet& j, double tol) {
    if (j.f.size() != 4) throw Error(Err::SizeMismatch, "lift jet must have 4 components");
    const C4 f = j.f, fz = j.z, fzb = j.zb, fzz = j.zz, fzzb = j.zzb, fzbzb = j.zbzb;
    LiftInvariants r;
    r.horizontality = std::abs(dot(fz, f.conjugate())) + std::abs(dot(fzb, f.conjugate()));
    const double scale = std::max(1.0, f.norm() * fz.norm());
    if (r.horizontality > tol * scale) throw Error(Err::NotHorizontal, "lift is not horizontal");
    r.eu = dot(fz, fz.conjugate()).real();
    r.alpha = dot(fz, fz);
    r.beta = dot(fz, fzb);
    r.phi_min = dot(fzzb, fzb.conjugate()) / r.eu;
    r.alpha_z = 2.0 * dot(fzz, fz);
    r.alpha_zb = 2.0 * dot(fzzb, fz);
    r.beta_z = dot(fzz, fzb) + dot(fz, fzzb);
    r.beta_zb = dot(fzzb, fzb) + dot(fz, fzbzb);
    r.eu_z = dot(fzz, fz.conjugate()) + dot(fz, fzzb.conjugate());
    return r;
}

FrameCoefficients general_frame_coefficients(const LiftInvariants& d, double tol) {
    const double eu = d.eu, e2u = eu * eu;
    const cplx a = d.alpha, ab = std::conj(a), bb = std::conj(d.beta);
    const double D = 2 * eu + 2 * a.real();
    const double G = e2u - std::norm(a);
    const double scale = std::max(1.0, e2u);
    if (D <= tol * std::max(1.0, eu) || G <= tol * scale)
        throw Error(Err::DegenerateFrame, "frame denominators vanish");
    const double s2 = std::sqrt(2.0), sD = std::sqrt(D), sDG = std::sqrt(D * G);
    const cplx uz = d.eu_z / eu;
    const cplx abz = std::conj(d.alpha_zb);  // (conj alpha)_z
    FrameCoefficients c;
    c.p1 = -(a + eu + bb) / (s2 * sD);
    c.p2 = I / s2 * ((std::norm(a) - e2u) - bb * (eu + a)) / sDG;
    c.p3 = I / s2 * (a + eu - bb) / sD;
    c.p4 = ((std::norm(a) - e2u) + bb * (eu + a)) / (s2 * sDG);
    c.q = I *
          (0.5 * eu * (d.alpha_z - abz) + 0.5 * (d.alpha_z * ab - abz * a) - eu * d.phi_min * D -
           uz * eu * (eu + a)) /
          (D * std::sqrt(G));
    c.cond1 = std::abs(e2u - std::norm(d.beta) - std::norm(a)) / scale;
    const cplx abzb = std::conj(d.alpha_z);  // (conj alpha)_zb
    const cplx bbzb = std::conj(d.beta_z);   // (conj beta)_zb
    c.cond2 = std::abs(0.5 * abzb * a - e2u * std::conj(d.phi_min) - std::conj(uz) * e2u + d.beta * bbzb -
                       0.5 * abz * d.beta) /
              scale;
    c.cond3 = std::abs(d.phi_min * d.beta - std::conj(d.phi_min) * a - 0.5 * d.alpha_zb) / std::max(1.0, eu);
    c.min_cond3 = std::abs(0.5 * ab * d.alpha_z + bb * d.beta_z - uz * e2u) / scale;
    return c;
}

const FrameAt& FrameCache::get(cplx z) {
    auto key = std::make_pair(z.real(), z.imag());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    FrameAt f = src_->at(z, last_);
    auto [pos, ok] = cache_.emplace(key, std::move(f));
    last_ = &pos->second;
    return pos->second;
}

AssociatedFamily associated_family(const FramePair& frames, const std::vector<cplx>& lambdas) {
    AssociatedFamily fam;
    fam.grid = frames.grid;
    fam.lambdas = lambdas;
    for (cplx l : lambdas) {
        std::vector<std::optional<SurfaceSample>> row(frames.grid.size());
        for (int k = 0; k < frames.grid.size(); ++k)
            if (frames.frames[k]) row[k] = make_sample(*frames.frames[k], l);
        fam.surfaces.push_back(std::move(row));
    }
    return fam;
}

}  // namespace mlq
