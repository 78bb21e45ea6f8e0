#include "mlq/loops.hpp"

#include <cmath>
#include <numbers>
#include <json.hpp>
#include <unsupported/Eigen/FFT>

namespace mlq {

LaurentLoop::LaurentLoop(int n, bool tw) : order(n), twisted(tw), coeffs(2 * n + 1, Mat2::Zero()) {}

LaurentLoop LaurentLoop::identity(int n, bool tw) {
    LaurentLoop g(n, tw);
    g.at(0) = Mat2::Identity();
    return g;
}

Mat2 LaurentLoop::eval(cplx lambda) const {
    // Horner from both ends
    Mat2 pos = Mat2::Zero(), neg = Mat2::Zero();
    for (int k = order; k >= 1; --k) pos = pos * lambda + at(k);
    cplx inv = 1.0 / lambda;
    for (int k = -order; k <= -1; ++k) neg = neg * inv + at(k);
    return at(0) + pos * lambda + neg * inv;
}

double LaurentLoop::parity_residual() const {
    double r = 0;
    for (int k = -order; k <= order; ++k) {
        const Mat2& c = at(k);
        if (k % 2 == 0)
            r = std::max({r, std::abs(c(0, 1)), std::abs(c(1, 0))});
        else
            r = std::max({r, std::abs(c(0, 0)), std::abs(c(1, 1))});
    }
    return r;
}

double LaurentLoop::negative_part() const {
    double r = 0;
    for (int k = -order; k < 0; ++k) r = std::max(r, at(k).cwiseAbs().maxCoeff());
    return r;
}

double LaurentLoop::positive_part() const {
    double r = 0;
    for (int k = 1; k <= order; ++k) r = std::max(r, at(k).cwiseAbs().maxCoeff());
    return r;
}

void check_sample_count(int m) {
    if (m <= 0 || m % 4 != 0) throw Error(Err::InvalidInput, "sample count must be a positive multiple of 4");
}

cplx SampledLoop::lambda(int j) const {
    return std::polar(1.0, 2.0 * std::numbers::pi * j / size());
}

SampledLoop sample_loop(const LaurentLoop& g, int m) {
    check_sample_count(m);
    SampledLoop s(m);
    for (int j = 0; j < m; ++j) s[j] = g.eval(s.lambda(j));
    return s;
}

namespace {

// per-entry forward transforms, entry e = 2*row + col
std::array<std::vector<cplx>, 4> entry_spectra(const SampledLoop& g) {
    static thread_local Eigen::FFT<double> fft;
    std::array<std::vector<cplx>, 4> out;
    const int m = g.size();
    std::vector<cplx> buf(m);
    for (int e = 0; e < 4; ++e) {
        for (int j = 0; j < m; ++j) buf[j] = g[j](e / 2, e % 2);
        fft.fwd(out[e], buf);
        for (auto& v : out[e]) v /= double(m);
    }
    return out;
}

}  // namespace

LaurentLoop to_laurent(const SampledLoop& g, int n, bool twisted) {
    const int m = g.size();
    check_sample_count(m);
    if (2 * n + 1 > m) throw Error(Err::InvalidInput, "need 2N+1 <= M");
    auto sp = entry_spectra(g);
    LaurentLoop out(n, twisted);
    for (int k = -n; k <= n; ++k) {
        int idx = ((k % m) + m) % m;
        for (int e = 0; e < 4; ++e) out.at(k)(e / 2, e % 2) = sp[e][idx];
    }
    if (twisted) {
        for (int k = -n; k <= n; ++k) {
            Mat2& c = out.at(k);
            if (k % 2 == 0)
                c(0, 1) = c(1, 0) = 0;
            else
                c(0, 0) = c(1, 1) = 0;
        }
    }
    return out;
}

Mat2 interpolate(const SampledLoop& g, cplx lambda) {
    const int m = g.size();
    for (int j = 0; j < m; ++j)
        if (std::abs(g.lambda(j) - lambda) < 1e-15) return g[j];
    // all modes except the Nyquist one, which has no symmetric partner
    LaurentLoop l = to_laurent(g, m / 2 - 1, false);
    return l.eval(lambda);
}

double sampled_parity_residual(const SampledLoop& g) {
    // sigma g(lambda) = g(-lambda) with sigma = Ad diag(1,-1)
    const int m = g.size();
    const Mat2 s = sigma3();
    double r = 0;
    for (int j = 0; j < m; ++j) {
        const Mat2& a = g[j];
        const Mat2& b = g[(j + m / 2) % m];
        r = std::max(r, (s * a * s - b).cwiseAbs().maxCoeff());
    }
    return r;
}

SampledLoop loop_mul(const SampledLoop& a, const SampledLoop& b) {
    if (a.size() != b.size()) throw Error(Err::SizeMismatch, "loop_mul sample counts differ");
    SampledLoop r(a.size());
    for (int j = 0; j < a.size(); ++j) r[j] = a[j] * b[j];
    return r;
}

SampledLoop loop_inv(const SampledLoop& a) {
    SampledLoop r(a.size());
    for (int j = 0; j < a.size(); ++j) {
        cplx d = a[j].determinant();
        if (!(std::abs(d) > 1e-8))
            throw Error(Err::SingularSample, "singular sample at index " + std::to_string(j));
        r[j] = inv2(a[j]);
    }
    return r;
}

double loop_distance(const SampledLoop& a, const SampledLoop& b) {
    if (a.size() != b.size()) throw Error(Err::SizeMismatch, "loop_distance sample counts differ");
    double r = 0;
    for (int j = 0; j < a.size(); ++j) r = std::max(r, (a[j] - b[j]).cwiseAbs().maxCoeff());
    return r;
}

namespace {

// Solve sum_j P[j] Linv[k-j] = delta_k0 Id (k, j = 0..n) for the plus factor of
// L = L_- L_+ with L_-(inf) = Id.  Throws OutsideBigCell when the Toeplitz
// system is (numerically) singular.
LaurentLoop toeplitz_plus(const SampledLoop& l, int n, bool twisted) {
    const int m = l.size();
    if (2 * n + 1 > m) throw Error(Err::InvalidInput, "need 2N+1 <= M");
    LaurentLoop linv = to_laurent(loop_inv(l), n, twisted);
    const int dim = 2 * (n + 1);
    Eigen::MatrixXcd t(dim, dim);
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k) t.block<2, 2>(2 * j, 2 * k) = linv.at(k - j);
    // X T = E  <=>  T^T X^T = E^T
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(dim, 2);
    rhs(0, 0) = rhs(1, 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(t.transpose());
    if (!lu.isInvertible() || lu.rcond() < 1e-13 || !std::isfinite(lu.rcond()))
        throw Error(Err::OutsideBigCell, "Toeplitz system singular");
    Eigen::MatrixXcd xt = lu.solve(rhs);
    LaurentLoop plus(n, twisted);
    for (int j = 0; j <= n; ++j) plus.at(j) = xt.block<2, 2>(2 * j, 0).transpose();
    for (int j = 0; j <= n; ++j)
        if (!plus.at(j).allFinite()) throw Error(Err::OutsideBigCell, "non-finite Birkhoff factor");
    return plus;
}

}  // namespace

BirkhoffResult birkhoff_plus_minus(const SampledLoop& phi, int n) {
    const int m = phi.size();
    check_sample_count(m);
    bool twisted = sampled_parity_residual(phi) < kTauLoop;
    BirkhoffResult r;
    r.plus = toeplitz_plus(phi, n, twisted);
    SampledLoop ps = sample_loop(r.plus, m);
    SampledLoop minus_s = loop_mul(phi, loop_inv(ps));
    r.minus = to_laurent(minus_s, n, twisted);
    // the minus factor must carry no positive modes and equal Id at infinity
    double tail = r.minus.positive_part();
    double norm0 = (r.minus.at(0) - Mat2::Identity()).cwiseAbs().maxCoeff();
    r.residual = loop_distance(loop_mul(sample_loop(r.minus, m), ps), phi);
    if (!(tail < 1e-6 && norm0 < 1e-6)) throw Error(Err::OutsideBigCell, "Birkhoff factorization failed");
    return r;
}

namespace {

double gram_defect(const SampledLoop& f) {
    const Mat2 s = sigma3();
    double r = 0;
    for (int j = 0; j < f.size(); ++j) r = std::max(r, (f[j].adjoint() * s * f[j] - s).cwiseAbs().maxCoeff());
    return r;
}

// Rescale so det B = 1 and B(0) has positive real diagonal.
void normalize_plus(LaurentLoop& b, int m) {
    SampledLoop s = sample_loop(b, m);
    cplx det_mean = 0;
    for (int j = 0; j < m; ++j) det_mean += s[j].determinant();
    det_mean /= double(m);
    cplx scale = 1.0 / std::sqrt(det_mean);
    for (auto& c : b.coeffs) c *= scale;
    for (int k = -b.order; k < 0; ++k) b.at(k).setZero();
    // B(0) is diagonal for twisted loops; rotate a stray phase away (it is a U(1) gauge)
    cplx d = b.at(0)(0, 0);
    if (std::abs(d) > 0) {
        cplx ph = std::abs(d) / d;
        Mat2 g = Mat2::Identity();
        g(0, 0) = ph;
        g(1, 1) = 1.0 / ph;
        for (int k = 0; k <= b.order; ++k) b.at(k) = g * b.at(k);
    }
}

struct PolishOutcome {
    LaurentLoop b;
    SampledLoop f;
    double defect;
    int iterations;
};

// Newton on the Fourier modes of B for the Gram equation B^* sigma3 B = Phi^* sigma3 Phi.
// The linearization at F = Phi B^{-1} decouples: with E = F^* s3 F - s3 (Hermitian on S^1),
// the update is B <- (Id + s3 (E_+ + E_0 / 2)) B.
PolishOutcome newton_polish(const SampledLoop& phi, LaurentLoop b, const IwasawaOptions& opt) {
    const int m = phi.size();
    const Mat2 s3 = sigma3();
    auto frame_of = [&](const LaurentLoop& bb) { return loop_mul(phi, loop_inv(sample_loop(bb, m))); };
    SampledLoop f = frame_of(b);
    double defect = gram_defect(f);
    int it = 0;
    for (; it < opt.max_iter && defect > opt.polish_tol; ++it) {
        SampledLoop e(m);
        for (int j = 0; j < m; ++j) e[j] = f[j].adjoint() * s3 * f[j] - s3;
        LaurentLoop em = to_laurent(e, b.order, b.twisted);
        LaurentLoop delta(b.order, b.twisted);
        delta.at(0) = s3 * em.at(0) * 0.5;
        for (int k = 1; k <= b.order; ++k) delta.at(k) = s3 * em.at(k);
        bool improved = false;
        for (double step = 1.0; step > 1.0 / 1024; step *= 0.5) {
            LaurentLoop cand(b.order, b.twisted);
            for (int k = 0; k <= b.order; ++k) {
                Mat2 acc = b.at(k);
                for (int j = 0; j <= k; ++j) acc += step * delta.at(j) * b.at(k - j);
                cand.at(k) = acc;
            }
            normalize_plus(cand, m);
            SampledLoop fc;
            try {
                fc = frame_of(cand);
            } catch (const Error&) {
                continue;
            }
            double dc = gram_defect(fc);
            if (dc < defect) {
                b = std::move(cand);
                f = std::move(fc);
                defect = dc;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return {std::move(b), std::move(f), defect, it};
}

IwasawaResult finish(const SampledLoop& phi, PolishOutcome&& p) {
    IwasawaResult r;
    r.B = std::move(p.b);
    r.F = std::move(p.f);
    r.newton_iterations = p.iterations;
    SampledLoop recon = loop_mul(r.F, sample_loop(r.B, phi.size()));
    double twist = r.B.twisted ? sampled_parity_residual(r.F) : 0.0;
    r.residual = std::max({p.defect, loop_distance(recon, phi), twist});
    return r;
}

}  // namespace

IwasawaResult iwasawa_su11(const SampledLoop& phi, const IwasawaOptions& opt, const LaurentLoop* warm) {
    const int m = phi.size();
    check_sample_count(m);
    for (int j = 0; j < m; ++j)
        if (!phi[j].allFinite()) throw Error(Err::InvalidInput, "non-finite loop sample");
    bool twisted = sampled_parity_residual(phi) < 1e-8 * std::max(1.0, phi[0].cwiseAbs().maxCoeff());

    if (warm && warm->order == opt.order) {
        try {
            PolishOutcome p = newton_polish(phi, *warm, opt);
            if (p.defect < opt.tol) {
                IwasawaResult r = finish(phi, std::move(p));
                r.used_warm_start = true;
                if (r.residual < opt.tol) return r;
            }
        } catch (const Error&) {
        }
    }

    // G = Phi^* s3 Phi, L = s3 G = (s3 B^* s3) B  -> normalized Birkhoff factorization of L
    const Mat2 s3 = sigma3();
    SampledLoop l(m);
    for (int j = 0; j < m; ++j) l[j] = s3 * phi[j].adjoint() * s3 * phi[j];
    LaurentLoop lp = toeplitz_plus(l, opt.order, twisted);
    cplx d2 = lp.at(0)(0, 0);
    if (!(d2.real() > 0) || std::abs(d2.imag()) > 1e-8 * std::abs(d2))
        throw Error(Err::OutsideBigCell, "lambda^0 Gram block lost its (1,1) signature");
    double d = std::sqrt(d2.real());
    Mat2 g = Mat2::Zero();
    g(0, 0) = 1.0 / d;
    g(1, 1) = d;
    LaurentLoop b(opt.order, twisted);
    for (int k = 0; k <= opt.order; ++k) b.at(k) = g * lp.at(k);
    normalize_plus(b, m);
    PolishOutcome p = newton_polish(phi, std::move(b), opt);
    IwasawaResult r = finish(phi, std::move(p));
    if (!(r.residual < opt.tol))
        throw Error(Err::OutsideBigCell, "Iwasawa residual " + std::to_string(r.residual) + " above tolerance");
    return r;
}

std::string loop_to_json(const LaurentLoop& g) {
    nlohmann::json j;
    j["order"] = g.order;
    j["twisted"] = g.twisted;
    nlohmann::json arr = nlohmann::json::array();
    for (int k = -g.order; k <= g.order; ++k) {
        const Mat2& c = g.at(k);
        arr.push_back({k, c(0, 0).real(), c(0, 0).imag(), c(0, 1).real(), c(0, 1).imag(), c(1, 0).real(),
                       c(1, 0).imag(), c(1, 1).real(), c(1, 1).imag()});
    }
    j["coeffs"] = arr;
    return j.dump();
}

LaurentLoop loop_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(Err::InvalidInput, std::string("loop json: ") + e.what());
    }
    if (!j.contains("order") || !j.contains("twisted") || !j.contains("coeffs"))
        throw Error(Err::InvalidInput, "loop json needs order, twisted, coeffs");
    LaurentLoop g(j["order"].get<int>(), j["twisted"].get<bool>());
    for (const auto& row : j["coeffs"]) {
        if (row.size() != 9) throw Error(Err::InvalidInput, "coefficient rows carry k and 8 reals");
        int k = row[0].get<int>();
        if (k < -g.order || k > g.order) throw Error(Err::InvalidInput, "coefficient index out of range");
        Mat2& c = g.at(k);
        c(0, 0) = {row[1].get<double>(), row[2].get<double>()};
        c(0, 1) = {row[3].get<double>(), row[4].get<double>()};
        c(1, 0) = {row[5].get<double>(), row[6].get<double>()};
        c(1, 1) = {row[7].get<double>(), row[8].get<double>()};
    }
    return g;
}

}  // namespace mlq
