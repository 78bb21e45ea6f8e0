#include "mlq/fd.hpp"

#include <array>

namespace mlq {

namespace {

struct Raw {
    VecX z, zb, zz, zzb, zbzb;
};

Raw stencil(const Field& f, cplx z0, const VecX& c, double h) {
    std::array<VecX, 9> v;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            v[(a + 1) * 3 + (b + 1)] = (a == 0 && b == 0) ? c : f(z0 + cplx(a * h, b * h));
    auto at = [&](int a, int b) -> const VecX& { return v[(a + 1) * 3 + (b + 1)]; };
    VecX fx = (at(1, 0) - at(-1, 0)) / (2 * h);
    VecX fy = (at(0, 1) - at(0, -1)) / (2 * h);
    VecX fxx = (at(1, 0) - 2.0 * c + at(-1, 0)) / (h * h);
    VecX fyy = (at(0, 1) - 2.0 * c + at(0, -1)) / (h * h);
    VecX fxy = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
    Raw r;
    r.z = 0.5 * (fx - I * fy);
    r.zb = 0.5 * (fx + I * fy);
    r.zz = 0.25 * (fxx - fyy - 2.0 * I * fxy);
    r.zzb = 0.25 * (fxx + fyy);
    r.zbzb = 0.25 * (fxx - fyy + 2.0 * I * fxy);
    return r;
}

Raw richardson(const Raw& a, const Raw& b) {
    auto r = [](const VecX& x, const VecX& y) { return VecX((4.0 * y - x) / 3.0); };
    return {r(a.z, b.z), r(a.zb, b.zb), r(a.zz, b.zz), r(a.zzb, b.zzb), r(a.zbzb, b.zbzb)};
}

double max_abs(const Raw& r) {
    double m = 0;
    for (const VecX* v : {&r.z, &r.zb, &r.zz, &r.zzb, &r.zbzb}) m = std::max(m, v->cwiseAbs().maxCoeff());
    return m;
}

double max_diff(const Raw& a, const Raw& b) {
    double m = 0;
    m = std::max(m, (a.z - b.z).cwiseAbs().maxCoeff());
    m = std::max(m, (a.zb - b.zb).cwiseAbs().maxCoeff());
    m = std::max(m, (a.zz - b.zz).cwiseAbs().maxCoeff());
    m = std::max(m, (a.zzb - b.zzb).cwiseAbs().maxCoeff());
    m = std::max(m, (a.zbzb - b.zbzb).cwiseAbs().maxCoeff());
    return m;
}

}  // namespace

Jet jet(const Field& f, cplx z0, double h, JetMode mode) {
    if (!(h > 0)) throw Error(Err::InvalidInput, "finite-difference step must be positive");
    Jet j;
    j.h = h;
    j.f = f(z0);
    Raw out, a = stencil(f, z0, j.f, h);
    if (mode == JetMode::Central) {
        out = a;
        Raw b = stencil(f, z0, j.f, h / 2);
        j.err = max_diff(a, b) * 4.0 / 3.0 / std::max(1.0, max_abs(a));
    } else {
        Raw b = stencil(f, z0, j.f, h / 2);
        Raw c = stencil(f, z0, j.f, h / 4);
        Raw r1 = richardson(a, b);
        out = richardson(b, c);
        j.err = max_diff(r1, out) / 15.0 / std::max(1.0, max_abs(out));
    }
    j.z = out.z;
    j.zb = out.zb;
    j.zz = out.zz;
    j.zzb = out.zzb;
    j.zbzb = out.zbzb;
    return j;
}

}  // namespace mlq
