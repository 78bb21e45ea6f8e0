#pragma once
#include <map>
#include <memory>

#include "mlq/fd.hpp"
#include "mlq/frames.hpp"

namespace mlq {

inline constexpr double kTauGeo = 1e-8;

// F_lambda and F_{i lambda} at one point
struct FramePoint {
    Mat2 F, Fi;
};

// Exact sample when lambda is a sample point, spectral interpolation otherwise.
FramePoint frame_point(const FrameAt& fa, cplx lambda);

// (Re X11 + i Re Y11, Im X11 + i Im Y11, Re X21 + i Re Y21, Im X21 + i Im Y21),
// X = F_l F_il^{-1}, Y = i F_l sigma3 F_il^{-1}
C4 surface_q2(const FramePoint& p);
std::pair<Su11Vector, Su11Vector> surface_h2xh2(const FramePoint& p);
// (f_max, N) in R^4_2
std::pair<Vec4, Vec4> surface_ads3(const FramePoint& p);
// (f_max + i N) / sqrt2; horizontal
C4 horizontal_lift(const FramePoint& p);
// sign flip so the first coordinate with |.| > 1e-12 has positive real part
C4 phase_fixed(const C4& lift);

// Pointwise invariants from B(0) and the lambda^{-1} part of the potential.
struct FrameInvariants {
    double uhat = 0;
    double u = 0;  // 2 e^u = e^uhat + |alphahat|^2 e^-uhat
    cplx alphahat;  // already scaled by lambda^{-2}
    double betahat = 0;
};
FrameInvariants frame_invariants(const FrameAt& fa, cplx lambda = 1.0);

struct SurfaceSample {
    cplx z;
    C4 lift;
    Su11Vector phi, psi;
    Vec4 fmax, N;
    double u = 0, uhat = 0;
    cplx alphahat;
    double betahat = 0;
    cplx Q;  // i alphahat; the finite-difference Hopf check lives in verify
};
SurfaceSample make_sample(const FrameAt& fa, cplx lambda);

struct MetricSplit {
    double e_uhat, e_utilde;
};
MetricSplit metric_split(double u, cplx alphahat, double tol = kTauGeo);

// Invariants of a horizontal lift from its jet.
struct LiftInvariants {
    double eu = 0;
    cplx alpha, beta, phi_min;
    cplx alpha_z, alpha_zb, beta_z, beta_zb, eu_z;
    double horizontality = 0;  // |<f_z, conj f>| + |<f_zb, conj f>|
};
LiftInvariants invariants_from_lift(const Jet& j, double tol = kTauFd);

struct FrameCoefficients {
    cplx p1, p2, p3, p4, q;
    double cond1 = 0, cond2 = 0, cond3 = 0;
    // minimal-case equations
    double min_cond3 = 0;  // (1/2) conj(alpha) alpha_z + conj(beta) beta_z - u_z e^{2u}
};
FrameCoefficients general_frame_coefficients(const LiftInvariants& d, double tol = kTauGeo);

// Frames computed once per z, shared across lambda; warm starts from the last computed point.
class FrameCache {
public:
    explicit FrameCache(std::shared_ptr<const FrameSource> src) : src_(std::move(src)) {}
    const FrameAt& get(cplx z);
    const FrameSource& source() const { return *src_; }
    size_t size() const { return cache_.size(); }

private:
    std::shared_ptr<const FrameSource> src_;
    std::map<std::pair<double, double>, FrameAt> cache_;
    const FrameAt* last_ = nullptr;
};

struct AssociatedFamily {
    Grid grid;
    std::vector<cplx> lambdas;
    // surfaces[l][grid.index(i, j)]
    std::vector<std::vector<std::optional<SurfaceSample>>> surfaces;
};
AssociatedFamily associated_family(const FramePair& frames, const std::vector<cplx>& lambdas);

}  // namespace mlq
