#include "mlq/algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace mlq {

Mat2 sigma1() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}
Mat2 sigma2() {
    Mat2 m;
    m << 0, -I, I, 0;
    return m;
}
Mat2 sigma3() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

cplx minkowski_form(const C4& z, const C4& w) {
    return -z(0) * w(0) - z(1) * w(1) + z(2) * w(2) + z(3) * w(3);
}

cplx hermitian_form(const C4& z, const C4& w) { return minkowski_form(z, w.conjugate()); }

double eta_form(const Vec4& x, const Vec4& y) {
    return -x(0) * y(0) - x(1) * y(1) + x(2) * y(2) + x(3) * y(3);
}

Mat4 eta4() { return Vec4(-1, -1, 1, 1).asDiagonal(); }

double su11_residual(const Mat2& m) {
    const Mat2 s = sigma3();
    double r = (m.adjoint() * s * m - s).cwiseAbs().maxCoeff();
    return std::max(r, std::abs(m.determinant() - 1.0));
}

bool is_su11(const Mat2& m, double tol) { return su11_residual(m) < tol; }

Mat2 inv2(const Mat2& m) {
    Mat2 r;
    cplx d = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r / d;
}

Vec4 w_coords(const Mat2& w) { return {w(0, 0).real(), w(0, 0).imag(), w(1, 0).real(), w(1, 0).imag()}; }

Mat2 w_matrix(const Vec4& x) {
    Mat2 w;
    cplx a(x(0), x(1)), b(x(2), x(3));
    w << a, std::conj(b), b, std::conj(a);
    return w;
}

C4 w_coords_c(const Mat2& re_part, const Mat2& im_part) {
    return w_coords(re_part).cast<cplx>() + I * w_coords(im_part).cast<cplx>();
}

double so22_residual(const Mat4& m) {
    const Mat4 e = eta4();
    double r = (m.transpose() * e * m - e).cwiseAbs().maxCoeff();
    return std::max(r, std::abs(m.determinant() - 1.0));
}

Mat4 psi_matrix(const Mat2& g, const Mat2& h) {
    Mat4 out;
    const Mat2 hinv = inv2(h);
    for (int k = 0; k < 4; ++k) {
        Vec4 e = Vec4::Zero();
        e(k) = 1.0;
        out.col(k) = w_coords(g * w_matrix(e) * hinv);
    }
    return out;
}

SO22Element psi_hom(const Mat2& g, const Mat2& h) {
    if (!is_su11(g) || !is_su11(h))
        throw Error(Err::InvalidInput, "psi_hom needs SU(1,1) arguments");
    // image of a connected group: always in the identity component
    return {psi_matrix(g, h), true};
}

Su11Vector Su11Vector::from_matrix(const Mat2& x) {
    return {x(0, 0).imag(), x(0, 1).real(), x(0, 1).imag()};
}

Mat2 Su11Vector::matrix() const {
    Mat2 m;
    m << I * x1, cplx(x2, x3), cplx(x2, -x3), -I * x1;
    return m;
}

double su11_inner(const Su11Vector& x, const Su11Vector& y) {
    return -x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3;
}

cplx lorentz3(const Eigen::Vector3cd& x, const Eigen::Vector3cd& y) {
    return -x(0) * y(0) + x(1) * y(1) + x(2) * y(2);
}

cplx poincare_project(const Su11Vector& x, double tol) {
    double n = x.lorentz_norm();
    if (!std::isfinite(n) || std::abs(n + 1.0) > tol * std::max(1.0, x.x1 * x.x1))
        throw Error(Err::NotOnHyperboloid, "point is not on -x1^2+x2^2+x3^2 = -1");
    if (x.x1 <= 0) throw Error(Err::WrongSheet, "x1 <= 0");
    return cplx(x.x2, x.x3) / (1.0 + x.x1);
}

Mat2 mat_exp(const Mat2& m) {
    double nrm = m.cwiseAbs().rowwise().sum().maxCoeff();
    if (!std::isfinite(nrm) || nrm > kMatExpMaxNorm)
        throw Error(Err::Overflow, "mat_exp argument norm beyond 50");
    Mat2 r = m.exp();
    return r;
}

}  // namespace mlq
