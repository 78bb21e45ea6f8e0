#pragma once
#include <complex>
#include <Eigen/Dense>

#include "mlq/error.hpp"

namespace mlq {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4d;
using C4 = Eigen::Vector4cd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kTauAlg = 1e-10;

Mat2 sigma1();
Mat2 sigma2();
Mat2 sigma3();

// Bilinear form of signature (2,2) on C^4: -z1w1 - z2w2 + z3w3 + z4w4.
cplx minkowski_form(const C4& z, const C4& w);
// (z, w) := <z, conj w>
cplx hermitian_form(const C4& z, const C4& w);
// eta = diag(-1,-1,1,1) on R^4
double eta_form(const Vec4& x, const Vec4& y);
Mat4 eta4();

double su11_residual(const Mat2& m);
bool is_su11(const Mat2& m, double tol = kTauAlg);
Mat2 inv2(const Mat2& m);

// W = [[a, conj b], [b, conj a]]  <->  (Re a, Im a, Re b, Im b).
// det W = -<x, x>_eta, so unit-determinant matrices are unit timelike vectors.
Vec4 w_coords(const Mat2& w);
Mat2 w_matrix(const Vec4& x);
// complex-linear extension: z = x + i y  ->  w_coords(x) + i w_coords(y) for W-type matrices
C4 w_coords_c(const Mat2& re_part, const Mat2& im_part);

struct SO22Element {
    Mat4 m;
    bool identity_component = true;
};

double so22_residual(const Mat4& m);

// Matrix of W -> g W h^{-1} in w_coords.
SO22Element psi_hom(const Mat2& g, const Mat2& h);
// Same map without the SU(1,1) precondition (used for loop interpolation where tiny defects are expected).
Mat4 psi_matrix(const Mat2& g, const Mat2& h);

struct Su11Vector {
    double x1 = 0, x2 = 0, x3 = 0;
    static Su11Vector from_matrix(const Mat2& x);
    Mat2 matrix() const;
    double lorentz_norm() const { return -x1 * x1 + x2 * x2 + x3 * x3; }
    Eigen::Vector3d vec() const { return {x1, x2, x3}; }
};

// <X, Y> = -(1/2) tr(X sigma2 Y^T sigma2), polarized
double su11_inner(const Su11Vector& x, const Su11Vector& y);
cplx lorentz3(const Eigen::Vector3cd& x, const Eigen::Vector3cd& y);

cplx poincare_project(const Su11Vector& x, double tol = kTauAlg);

// Scaling-and-squaring Pade exponential; throws Overflow for ||m|| > 50.
Mat2 mat_exp(const Mat2& m);
inline constexpr double kMatExpMaxNorm = 50.0;

}  // namespace mlq
