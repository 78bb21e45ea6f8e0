#pragma once
#include <limits>

#include "mlq/algebra.hpp"

namespace mlq {

inline constexpr double kTauOde = 1e-9;

struct SnCnDn {
    cplx sn, cn, dn;
};

// Jacobi functions with parameter m = k^2 (complex), via the descending Landen (Gauss)
// transformation; |m| > 1 goes through the reciprocal-modulus identity first.
SnCnDn jacobi_sncndn(cplx u, cplx m);
cplx jacobi_sn(cplx u, cplx k);

// Carlson symmetric integral R_F for complex arguments off the negative real axis.
cplx carlson_rf(cplx x, cplx y, cplx z);
cplx ellip_k(cplx m);
// w with sn(w | m) = s, principal branch refined by Newton
cplx inverse_sn(cplx s, cplx m);

// v(x) = sqrt(Z1) sn(sqrt(Z2)(x - x0), sqrt(Z1/Z2)) solving
// (v')^2 = (v^2 - 4a^2)(v^2 - 4b^2) + 4c^2 v^2, v(0) = 2b, v'(0) = -4bc.
struct EllipticProfile {
    double a = 0, b = 0, c = 0;
    cplx Z1, Z2, x0;
    cplx sqrtZ1, sqrtZ2, m, K, Kp;
    double kappa1sq = std::numeric_limits<double>::infinity();
    double kappa2sq = std::numeric_limits<double>::infinity();
    double ode_check = 0;  // sup |closed form - RK| on half the interval

    double lo() const { return -kappa1sq; }
    double hi() const { return kappa2sq; }
    bool contains(double x) const { return x > lo() && x < hi(); }
    double v(double x) const;
    double vp(double x) const;
    cplx v_complex(double x) const;
    double ode_residual(double x) const;
};

EllipticProfile v_profile(double a, double b, double c, bool cross_check = true);

// Direct integration of v'' = 2v(v^2 - 2a^2 - 2b^2 + 2c^2) from v(0) = 2b, v'(0) = -4bc.
double integrate_v(double a, double b, double c, double x, double tol = 1e-12);

}  // namespace mlq
