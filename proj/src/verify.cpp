#include "mlq/verify.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>

namespace mlq {

void ResidualReport::add(const std::string& name, double value, double tol) {
    entries.push_back({name, value, tol, std::isfinite(value) && value < tol});
}

void ResidualReport::merge(const ResidualReport& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    for (const auto& [k, v] : other.context) context[k] = v;
}

bool ResidualReport::pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

const ResidualEntry* ResidualReport::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

std::string ResidualReport::to_json() const {
    nlohmann::ordered_json j;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json c;
        c["name"] = e.name;
        // NaN is not valid JSON; a failed evaluation is reported as null
        if (std::isfinite(e.value)) c["value"] = e.value;
        else c["value"] = nullptr;
        c["tol"] = e.tol;
        c["pass"] = e.pass;
        j["checks"].push_back(c);
    }
    j["pass"] = pass();
    if (!context.empty()) {
        nlohmann::ordered_json ctx = nlohmann::ordered_json::object();
        for (const auto& [k, v] : context) ctx[k] = v;
        j["context"] = ctx;
    }
    return j.dump(2);
}

FormFields form_fields(double uhat, cplx uhat_z, cplx alphahat) {
    const double e = std::exp(uhat / 2);
    return {e, alphahat / e, std::conj(alphahat) / e, uhat_z, std::conj(uhat_z)};
}

HatForms hat_forms(const FormFields& q, cplx l) {
    const double s = 1 / std::sqrt(2.0);
    const cplx li = 1.0 / l;
    HatForms h;
    h.U1 << q.uz / 4.0, -I * s * li * q.E, I * s * li * q.Ar, -q.uz / 4.0;
    h.V1 << -q.uzb / 4.0, -I * s * l * q.Ac, I * s * l * q.E, q.uzb / 4.0;
    h.U2 << q.uz / 4.0, -s * li * q.E, s * li * q.Ar, -q.uz / 4.0;
    h.V2 << -q.uzb / 4.0, s * l * q.Ac, -s * l * q.E, q.uzb / 4.0;
    return h;
}

std::pair<Mat4c, Mat4c> tilde_forms(const FormFields& q, cplx l) {
    const double s = std::sqrt(2.0) / 2;
    const double r = 1 / std::sqrt(2.0);
    const cplx lm2 = 1.0 / (l * l), lp2 = l * l;
    const cplx E = q.E, A = lm2 * q.Ar, C = lp2 * q.Ac;
    Mat4c U, V;
    U << 0, 0, -E, -I * E,
         0, 0, I * A, A,
         -E, I * A, 0, -I * r * q.uz,
         -I * E, A, I * r * q.uz, 0;
    V << 0, 0, -E, I * E,
         0, 0, -I * C, C,
         -E, -I * C, 0, I * r * q.uzb,
         I * E, C, -I * r * q.uzb, 0;
    return {s * U, s * V};
}

std::pair<Mat4c, Mat4c> tilde_maurer_cartan(double uhat, cplx uhat_z, cplx alphahat, cplx lambda) {
    return tilde_forms(form_fields(uhat, uhat_z, alphahat), lambda);
}

double so22_algebra_residual(const Mat4c& x) {
    Mat4c ex = eta4().cast<cplx>() * x;
    return (ex + ex.transpose()).cwiseAbs().maxCoeff();
}

SurfaceFields surface_fields(std::shared_ptr<FrameCache> cache, cplx lambda) {
    SurfaceFields f;
    f.lambda = lambda;
    f.lift = [cache, lambda](cplx z) { return VecX(horizontal_lift(frame_point(cache->get(z), lambda))); };
    f.ads = [cache, lambda](cplx z) {
        auto [a, n] = surface_ads3(frame_point(cache->get(z), lambda));
        VecX v(8);
        v << a.cast<cplx>(), n.cast<cplx>();
        return v;
    };
    f.h2 = [cache, lambda](cplx z) {
        auto [p, q] = surface_h2xh2(frame_point(cache->get(z), lambda));
        VecX v(6);
        v << p.x1, p.x2, p.x3, q.x1, q.x2, q.x3;
        return v;
    };
    f.hat = [cache](cplx z) {
        FrameInvariants inv = frame_invariants(cache->get(z), 1.0);
        VecX v(2);
        v << inv.uhat, inv.alphahat;
        return v;
    };
    f.u = [cache](cplx z) {
        FrameInvariants inv = frame_invariants(cache->get(z), 1.0);
        VecX v(2);
        v << inv.u, 0.5 * std::exp(-inv.u) * inv.betahat;
        return v;
    };
    return f;
}

SurfaceFields perturb_alphahat(SurfaceFields f, double eps) {
    Field base = f.hat;
    f.hat = [base, eps](cplx z) {
        VecX v = base(z);
        v[1] += eps * std::conj(z);
        return v;
    };
    return f;
}

CheckSetup check_setup(const Grid& g, int max_per_axis) {
    CheckSetup s;
    auto pick = [&](int n) {
        std::vector<int> idx;
        if (n <= 2) {
            for (int i = 0; i < n; ++i) idx.push_back(i);
            return idx;
        }
        int k = std::min(max_per_axis, n - 2);
        for (int t = 0; t < k; ++t) idx.push_back(1 + (t * (n - 3)) / std::max(1, k - 1));
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        return idx;
    };
    for (int j : pick(g.ny))
        for (int i : pick(g.nx)) s.points.push_back(g.z(i, j));
    s.h = 1e-3 * std::max(g.x_max - g.x_min, g.y_max - g.y_min);
    if (!(s.h > 0)) s.h = 1e-3;
    return s;
}

namespace {

std::string lam_tag(cplx l) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "[arg=%.4f]", std::arg(l));
    return buf;
}

Jet checked_jet(const Field& f, cplx z, const CheckSetup& s) {
    Jet j = jet(f, z, s.h, s.mode);
    if (s.strict && !(j.err <= s.tol_fd))
        throw Error(Err::GridTooCoarse, "finite-difference error estimate exceeds tolerance");
    return j;
}

double flat_residual(const Mat2& uzb, const Mat2& vz, const Mat2& u, const Mat2& v) {
    Mat2 c = u * v - v * u;
    return (uzb - vz - c).cwiseAbs().maxCoeff() / std::max(1.0, c.cwiseAbs().maxCoeff());
}

double flat_residual(const Mat4c& uzb, const Mat4c& vz, const Mat4c& u, const Mat4c& v) {
    Mat4c c = u * v - v * u;
    return (uzb - vz - c).cwiseAbs().maxCoeff() / std::max(1.0, c.cwiseAbs().maxCoeff());
}

cplx dot3(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) { return lorentz3(a, b); }

}  // namespace

ResidualReport check_flatness(const SurfaceFields& base, const std::vector<cplx>& lambdas, const CheckSetup& s) {
    if (lambdas.size() < 3) throw Error(Err::InvalidInput, "flatness needs at least 3 lambda values");
    std::vector<double> hat(lambdas.size(), 0), til(lambdas.size(), 0), alg(lambdas.size(), 0);
    for (cplx z : s.points) {
        Jet j = checked_jet(base.hat, z, s);
        const double uh = j.f[0].real();
        const cplx a = j.f[1];
        const double e = std::exp(uh / 2);
        FormFields q = form_fields(uh, j.z[0], a);
        // derivatives of the linear coordinates (E, Ar, Ac, uz, uzb)
        FormFields qz, qzb;
        qz.E = 0.5 * j.z[0] * e;
        qzb.E = 0.5 * j.zb[0] * e;
        qz.Ar = (j.z[1] - 0.5 * a * j.z[0]) / e;
        qzb.Ar = (j.zb[1] - 0.5 * a * j.zb[0]) / e;
        qz.Ac = (std::conj(j.zb[1]) - 0.5 * std::conj(a) * j.z[0]) / e;
        qzb.Ac = (std::conj(j.z[1]) - 0.5 * std::conj(a) * j.zb[0]) / e;
        qz.uz = j.zz[0];
        qzb.uz = j.zzb[0];
        qz.uzb = j.zzb[0];
        qzb.uzb = j.zbzb[0];
        for (size_t k = 0; k < lambdas.size(); ++k) {
            cplx l = lambdas[k];
            HatForms f = hat_forms(q, l), fz = hat_forms(qz, l), fzb = hat_forms(qzb, l);
            hat[k] = std::max({hat[k], flat_residual(fzb.U1, fz.V1, f.U1, f.V1),
                               flat_residual(fzb.U2, fz.V2, f.U2, f.V2)});
            auto [U, V] = tilde_forms(q, l);
            auto [Uzb, Vzb_unused] = tilde_forms(qzb, l);
            auto [Uz_unused, Vz] = tilde_forms(qz, l);
            (void)Vzb_unused;
            (void)Uz_unused;
            til[k] = std::max(til[k], flat_residual(Uzb, Vz, U, V));
            alg[k] = std::max({alg[k], so22_algebra_residual(U), so22_algebra_residual(V)});
        }
    }
    ResidualReport r;
    for (size_t k = 0; k < lambdas.size(); ++k) {
        r.add("flatness.hat" + lam_tag(lambdas[k]), hat[k], s.tol_fd);
        r.add("flatness.tilde" + lam_tag(lambdas[k]), til[k], s.tol_fd);
        r.add("flatness.tilde_so22" + lam_tag(lambdas[k]), alg[k], kTauAlg);
    }
    return r;
}

ResidualReport check_sinh_gordon(const SurfaceFields& f, const CheckSetup& s) {
    double sg = 0, metric = 0;
    for (cplx z : s.points) {
        Jet j = checked_jet(f.hat, z, s);
        const double eu = std::exp(j.f[0].real());
        const double a2 = std::norm(j.f[1]);
        sg = std::max(sg, std::abs(j.zzb[0] - eu + a2 / eu) / std::max(1.0, eu));
        Jet jl = checked_jet(f.lift, z, s);
        LiftInvariants li = invariants_from_lift(jl, s.tol_fd);
        metric = std::max(metric, std::abs(2 * li.eu - (eu + a2 / eu)) / std::max(1.0, 2 * li.eu));
    }
    ResidualReport r;
    r.add("sinh_gordon", sg, s.tol_fd);
    r.add("sinh_gordon.metric", metric, s.tol_fd);
    return r;
}

ResidualReport check_radial(const SurfaceFields& f, const CheckSetup& s) {
    double dev = 0;
    for (cplx z : s.points) dev = std::max(dev, std::abs(f.hat(z)[0] - f.hat(cplx(std::abs(z), 0))[0]));
    ResidualReport r;
    r.add("radial.uhat", dev, s.tol_fd);
    return r;
}

ResidualReport check_minimality(const SurfaceFields& f, const CheckSetup& s) {
    double phi = 0, azb = 0, horiz = 0, conf = 0, c1 = 0, c2 = 0, c3 = 0, m3 = 0, argdev = 0;
    bool have_arg = false, have_cond = false;
    double arg0 = 0;
    for (cplx z : s.points) {
        Jet j = checked_jet(f.lift, z, s);
        LiftInvariants li = invariants_from_lift(j, s.tol_fd);
        const C4 fz = j.z, fzb = j.zb;
        const double eu = li.eu;
        phi = std::max(phi, std::abs(li.phi_min));
        azb = std::max(azb, std::abs(li.alpha_zb) / std::max(1.0, std::abs(li.alpha)));
        horiz = std::max(horiz, li.horizontality / std::max(1.0, C4(j.f).norm() * fz.norm()));
        conf = std::max({conf, std::abs(hermitian_form(fz, fzb)) / eu,
                         std::abs(hermitian_form(fzb, fzb).real() - eu) / eu});
        if (std::abs(li.beta) >= 1e-6 * eu) {
            double a = std::arg(li.beta);
            if (!have_arg) {
                arg0 = a;
                have_arg = true;
            }
            argdev = std::max(argdev, std::abs(std::remainder(a - arg0, 2 * std::numbers::pi)));
            try {
                FrameCoefficients c = general_frame_coefficients(li);
                c1 = std::max(c1, c.cond1);
                c2 = std::max(c2, c.cond2);
                c3 = std::max(c3, c.cond3);
                m3 = std::max(m3, c.min_cond3);
                have_cond = true;
            } catch (const Error&) {
            }
        }
    }
    ResidualReport r;
    r.add("minimality.phi", phi, s.tol_fd);
    r.add("minimality.alpha_zbar", azb, s.tol_fd);
    r.add("minimality.arg_beta", argdev, s.tol_fd);
    r.add("minimality.horizontal", horiz, s.tol_fd);
    r.add("minimality.conformal", conf, s.tol_fd);
    if (have_cond) {
        r.add("structure.condition1", c1, s.tol_fd);
        r.add("structure.condition2", c2, s.tol_fd);
        r.add("structure.condition3", c3, s.tol_fd);
        r.add("structure.minimal_condition3", m3, s.tol_fd);
    } else {
        r.context["structure"] = "skipped: beta vanishes, frame denominators degenerate";
    }
    return r;
}

ResidualReport check_correspondence(const SurfaceFields& f, const CheckSetup& s, bool swap) {
    double unit = 0, orth = 0, hopf = 0, maxim = 0, split = 0, sasaki = 0;
    for (cplx z : s.points) {
        Jet ja = checked_jet(f.ads, z, s);
        Jet jl = checked_jet(f.lift, z, s);
        LiftInvariants li = invariants_from_lift(jl, s.tol_fd);
        int a = swap ? 4 : 0, b = swap ? 0 : 4;
        const C4 fm = ja.f.segment(a, 4), N = ja.f.segment(b, 4);
        const C4 fz = ja.z.segment(a, 4), fzb = ja.zb.segment(a, 4), fzz = ja.zz.segment(a, 4),
                 fzzb = ja.zzb.segment(a, 4);
        unit = std::max({unit, std::abs(minkowski_form(fm, fm) + 1.0), std::abs(minkowski_form(N, N) + 1.0)});
        orth = std::max(orth, std::abs(minkowski_form(fm, N)));
        const double em = minkowski_form(fz, fzb).real();
        const cplx Q = minkowski_form(fzz, N);
        hopf = std::max(hopf, std::abs(Q - I * li.alpha) / std::max(1.0, std::abs(li.alpha)));
        maxim = std::max(maxim, std::abs(minkowski_form(fzzb, N)) / std::max(1.0, em));
        MetricSplit ms = metric_split(std::log(li.eu), li.alpha, s.tol_fd);
        split = std::max(split, std::min(std::abs(em - ms.e_uhat), std::abs(em - ms.e_utilde)) / std::max(1.0, li.eu));
        sasaki = std::max(sasaki, std::abs(4 * li.eu - 2 * em - 2 * std::norm(Q) / em) / (4 * li.eu));
    }
    ResidualReport r;
    r.add("ads.unit", unit, 1e-8);
    r.add("ads.orthogonal", orth, 1e-8);
    r.add("ads.hopf", hopf, s.tol_fd);
    r.add("ads.maximal", maxim, s.tol_fd);
    r.add("ads.metric_split", split, s.tol_fd);
    r.add("ads.sasaki", sasaki, 1e-6);
    return r;
}

ResidualReport check_general_frame(const SurfaceFields& f, const CheckSetup& s) {
    double theta = 0, gamma = 0, codazzi = 0, gauss = 0, pde = 0, harm = 0, conf = 0;
    const cplx l = f.lambda;
    for (cplx z : s.points) {
        Jet jh = checked_jet(f.h2, z, s);
        Jet jl = checked_jet(f.lift, z, s);
        Jet ju = checked_jet(f.u, z, s);
        Jet jhat = checked_jet(f.hat, z, s);
        LiftInvariants li = invariants_from_lift(jl, s.tol_fd);
        const double eu = li.eu;
        Eigen::Vector3cd pz = jh.z.head(3), qz = jh.z.tail(3), pzb = jh.zb.head(3), qzb = jh.zb.tail(3);
        const cplx Th = 0.5 * (dot3(pz, pz) - dot3(qz, qz));
        const cplx ahat = jhat.f[1] / (l * l);
        theta = std::max(theta, std::abs(Th - 2.0 * ahat) / std::max(1.0, std::abs(ahat)));

        Eigen::Vector3d P = jh.f.head(3).real(), Px = (pz + pzb).real(), Py = (I * (pz - pzb)).real();
        Eigen::Matrix3d M;
        M << P, Px, Py;
        const double G = M.determinant() / (8 * eu);
        gamma = std::max(gamma, std::abs(std::abs(G) - 0.5 * std::abs(li.beta) / eu));
        codazzi = std::max(codazzi, std::abs(std::norm(Th) - 4 * eu * eu * (1 - 4 * G * G)) / std::max(1.0, 4 * eu * eu));

        Eigen::Vector3cd p = jh.f.head(3), q = jh.f.tail(3);
        harm = std::max({harm, (Eigen::Vector3cd(jh.zzb.head(3)) - 2 * eu * p).norm() / std::max(1.0, 2 * eu),
                         (Eigen::Vector3cd(jh.zzb.tail(3)) - 2 * eu * q).norm() / std::max(1.0, 2 * eu)});
        conf = std::max({conf, std::abs(dot3(pz, pz) + dot3(qz, qz)) / (4 * eu),
                         std::abs(dot3(pzb, pz) + dot3(qzb, qz) - 4 * eu) / (4 * eu)});

        // Gauss equation and the second-order PDE on the frame fields
        const double u = ju.f[0].real(), Gh = ju.f[1].real(), e = std::exp(u);
        const cplx Gz = ju.z[1], uz = ju.z[0];
        const double uzzb = ju.zzb[0].real();
        const double rhs_scale = std::max({1.0, std::abs(uzzb), 8 * e * Gh * Gh});
        gauss = std::max(gauss, std::abs(4 * std::norm(Gz) - (1 - 4 * Gh * Gh) * (uzzb - 8 * e * Gh * Gh)) / rhs_scale);
        const cplx a = jhat.f[1], az = jhat.z[1];
        const double bt = 2 * e * Gh;  // |beta|
        const cplx abzb = std::conj(az);
        const cplx val = uzzb * e * bt * bt - 0.25 * std::norm(az) * e - std::norm(uz) * e * std::norm(a) +
                         0.5 * az * std::conj(uz) * e * std::conj(a) + 0.5 * abzb * uz * e * a -
                         2 * std::pow(bt, 4);
        pde = std::max(pde, std::abs(val) / std::max(1.0, 2 * std::pow(bt, 4)));
    }
    ResidualReport r;
    r.add("general.theta", theta, s.tol_fd);
    r.add("general.gamma", gamma, s.tol_fd);
    r.add("general.codazzi", codazzi, s.tol_fd);
    r.add("general.gauss", gauss, s.tol_fd);
    r.add("general.second_order_pde", pde, s.tol_fd);
    r.add("h2xh2.harmonic", harm, s.tol_fd);
    r.add("h2xh2.conformal", conf, s.tol_fd);
    return r;
}

ResidualReport check_degenerate(const SurfaceFields& f, const CheckSetup& s, PotentialKind kind) {
    double g = 0, k = 0;
    const double target_g = kind == PotentialKind::Diagonal ? 0.5 : 0.0;
    const double target_k = kind == PotentialKind::Diagonal ? -2.0 : 0.0;
    for (cplx z : s.points) {
        Jet ju = checked_jet(f.u, z, s);
        const double u = ju.f[0].real();
        g = std::max(g, std::abs(ju.f[1].real() - target_g));
        k = std::max(k, std::abs(-std::exp(-u) * ju.zzb[0].real() - target_k));
    }
    ResidualReport r;
    r.add(std::string("degenerate.gamma_") + (kind == PotentialKind::Diagonal ? "half" : "zero"), g, s.tol_fd);
    r.add(std::string("degenerate.curvature_") + (kind == PotentialKind::Diagonal ? "minus2" : "zero"), k, s.tol_fd);
    return r;
}

ResidualReport check_associated(std::shared_ptr<FrameCache> cache, const std::vector<cplx>& lambdas,
                                const CheckSetup& s) {
    double metric = 0, hopf = 0;
    for (cplx z : s.points) {
        LiftInvariants base = invariants_from_lift(checked_jet(surface_fields(cache, 1.0).lift, z, s), s.tol_fd);
        for (cplx l : lambdas) {
            LiftInvariants li = invariants_from_lift(checked_jet(surface_fields(cache, l).lift, z, s), s.tol_fd);
            metric = std::max(metric, std::abs(li.eu - base.eu) / base.eu);
            if (std::abs(base.alpha) > 1e-8 * base.eu) hopf = std::max(hopf, std::abs(li.alpha * l * l / base.alpha - 1.0));
        }
    }
    ResidualReport r;
    r.add("associated.metric", metric, 1e-6);
    r.add("associated.hopf_scaling", hopf, 1e-6);
    return r;
}

double projective_distance(const C4& a, const C4& b) {
    const double bb = b.squaredNorm();
    if (bb == 0) return a.norm() == 0 ? 0 : 1;
    cplx c = b.dot(a) / bb;  // b^H a
    return (a - c * b).norm() / std::max(a.norm(), 1e-300);
}

ResidualReport check_symmetry(FrameCache& cache, const Potential& pot, cplx lambda, const std::vector<cplx>& points,
                              const std::vector<double>& thetas) {
    ResidualReport r;
    auto lift = [&](cplx z) { return surface_q2(frame_point(cache.get(z), lambda)); };
    if (pot.kind == PotentialKind::Equivariant) {
        for (double th : thetas) {
            Mat4 P = psi_matrix(mat_exp(I * th * pot.A(lambda)), mat_exp(I * th * pot.A(I * lambda)));
            double d = 0;
            for (cplx z : points) d = std::max(d, projective_distance(lift(z + I * th), P.cast<cplx>() * lift(z)));
            char buf[64];
            std::snprintf(buf, sizeof buf, "symmetry.equivariant[theta=%.4f]", th);
            r.add(buf, d, kTauFrame);
        }
    } else if (pot.kind == PotentialKind::Smyth) {
        const int n = pot.k + 2;
        for (int l = 1; l < n; ++l) {
            const cplx e = std::polar(1.0, std::numbers::pi * l / n);
            Mat2 A = Mat2::Zero();
            A(0, 0) = e;
            A(1, 1) = std::conj(e);
            Mat4 P = psi_matrix(A, A);
            const cplx rot = std::polar(1.0, 2 * std::numbers::pi * l / n);
            double d = 0;
            for (cplx z : points) d = std::max(d, projective_distance(lift(rot * z), P.cast<cplx>() * lift(z)));
            r.add("symmetry.smyth[l=" + std::to_string(l) + "]", d, kTauFrame);
        }
    } else {
        throw Error(Err::InvalidInput, "symmetry check needs an equivariant or Smyth potential");
    }
    return r;
}

}  // namespace mlq
