#pragma once
#include <string>

#include "mlq/frames.hpp"

namespace mlq {

inline constexpr double kTauClose = 1e-8;

struct ClosingParams {
    int m = 0, n = 0;
    cplx lambda0;
    double a = 0, b = 0, c = 0;
    EllipticProfile profile;
    // |2 sqrt(c^2 - |l0 a + b/l0|^2) - m| and the same for n with the minus sign
    double residual_m = 0, residual_n = 0;
    Potential potential() const { return Potential::equivariant(a, b, c); }
};

ClosingParams solve_closing(int m, int n, cplx lambda0, double a, int sign_c);

enum class MonodromyClass { PlusId, MinusId, Nontrivial };
const char* monodromy_name(MonodromyClass c);

struct Monodromy {
    Mat2 matrix;
    MonodromyClass cls = MonodromyClass::Nontrivial;
    double residual = 0;  // distance to the nearer of +Id, -Id
};
// exp(2 pi i A(lambda))
Monodromy monodromy(const Potential& pot, cplx lambda, double tol = kTauClose);

struct Diagonalization {
    Mat2 P;     // SU(1,1)
    double mu;  // P^{-1} A P = diag(-mu, mu)
    double residual = 0;
};
// A traceless with eigenvalues +-mu, mu real nonzero and eigenvectors off the light cone.
Diagonalization diagonalize_su11(const Mat2& A, double tol = 1e-12);

struct ProfileCurves {
    std::vector<double> x;
    std::vector<cplx> w1, w2;
    double y = 0;
};
ProfileCurves profile_curves(const ClosingParams& p, const std::vector<double>& xs, double y);
// max |w_k(y + theta) - e^{-i m_k theta} w_k(y)| over the samples, m_1 = m, m_2 = n
std::pair<double, double> rotation_law_residual(const ClosingParams& p, const std::vector<double>& xs, double y,
                                                double theta);
// evenly spaced samples inside the profile interval, staying 2% away from the ends
std::vector<double> default_x_samples(const EllipticProfile& prof, int count);

// 2e^u at x: (v^2 + 16 a^2 b^2 v^{-2}) / 2
double catenoid_metric(const ClosingParams& p, double x);

struct EndDiagnostics {
    // partial lengths int_0^{end -/+ delta} sqrt(2e^u) dx for delta = 10^{-2..-7} times the half-width
    std::vector<double> left, right;
    double left_slope = 0, right_slope = 0;  // growth per decade over the last decades
    bool consistent_with_completeness = false;
};
EndDiagnostics end_diagnostics(const ClosingParams& p);

// lift(z + 2 pi i) against +-lift(z) at lambda0
struct PeriodCheck {
    double plus = 0, minus = 0;  // relative distances to +lift and -lift
};
PeriodCheck period_check(const ClosingParams& p, cplx z);

std::string profile_svg(const ProfileCurves& c);
std::string profile_csv(const ProfileCurves& c);

}  // namespace mlq
