#pragma once
#include <string>
#include <vector>

#include "mlq/algebra.hpp"

namespace mlq {

inline constexpr double kTauLoop = 1e-9;
inline constexpr double kTauIwa = 1e-7;

// Truncated Laurent series sum_{k=-N}^{N} c_k lambda^k.
struct LaurentLoop {
    int order = 0;
    bool twisted = true;
    std::vector<Mat2> coeffs;  // coeffs[k + order]

    LaurentLoop() = default;
    LaurentLoop(int n, bool tw);
    static LaurentLoop identity(int n, bool tw = true);

    Mat2& at(int k) { return coeffs[k + order]; }
    const Mat2& at(int k) const { return coeffs[k + order]; }
    Mat2 eval(cplx lambda) const;
    // largest entry that violates the twist pattern
    double parity_residual() const;
    // largest coefficient with k < 0 (resp. k > 0)
    double negative_part() const;
    double positive_part() const;
};

// Values at lambda_j = exp(2 pi i j / M); M divisible by 4 so that lambda -> i lambda
// is the index rotation j -> j + M/4.
struct SampledLoop {
    std::vector<Mat2> values;

    SampledLoop() = default;
    explicit SampledLoop(int m) : values(m, Mat2::Identity()) {}
    int size() const { return static_cast<int>(values.size()); }
    cplx lambda(int j) const;
    const Mat2& operator[](int j) const { return values[j]; }
    Mat2& operator[](int j) { return values[j]; }
    // F(i lambda_j)
    const Mat2& rotated(int j) const { return values[(j + size() / 4) % size()]; }
};

void check_sample_count(int m);
SampledLoop sample_loop(const LaurentLoop& g, int m);
// DFT; coefficient k of lambda^k is fwd[k mod M] / M.
LaurentLoop to_laurent(const SampledLoop& g, int n, bool twisted);
// Spectral interpolation of a sampled loop at an arbitrary unit lambda.
Mat2 interpolate(const SampledLoop& g, cplx lambda);
double sampled_parity_residual(const SampledLoop& g);

SampledLoop loop_mul(const SampledLoop& a, const SampledLoop& b);
SampledLoop loop_inv(const SampledLoop& a);
double loop_distance(const SampledLoop& a, const SampledLoop& b);

struct BirkhoffResult {
    LaurentLoop minus;  // nonpositive powers, constant term Id
    LaurentLoop plus;   // nonnegative powers
    double residual = 0;
};

BirkhoffResult birkhoff_plus_minus(const SampledLoop& phi, int n);

struct IwasawaOptions {
    int order = 16;
    double tol = kTauIwa;
    int max_iter = 50;
    double polish_tol = 1e-14;
};

struct IwasawaResult {
    SampledLoop F;
    LaurentLoop B;  // k >= 0 only; B(0) = diag(d, 1/d), d > 0
    double residual = 0;
    int newton_iterations = 0;
    bool used_warm_start = false;
    double rho() const { return B.at(0)(0, 0).real(); }
};

IwasawaResult iwasawa_su11(const SampledLoop& phi, const IwasawaOptions& opt = {},
                           const LaurentLoop* warm = nullptr);

std::string loop_to_json(const LaurentLoop& g);
LaurentLoop loop_from_json(const std::string& text);

}  // namespace mlq
