#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlq/elliptic.hpp"
#include "mlq/loops.hpp"

namespace mlq {

inline constexpr double kTauFrame = 1e-6;
inline constexpr double kTauFd = 1e-4;

enum class PotentialKind { Diagonal, GeodesicProduct, Equivariant, Smyth, Custom };

const char* kind_name(PotentialKind k);

// xi(z, lambda) dz; every kind is twisted (odd powers off-diagonal).
struct Potential {
    PotentialKind kind = PotentialKind::Diagonal;
    double a = 0, b = 0, c = 0;  // Equivariant
    cplx smyth_c = 0;            // Smyth
    int k = 1;                   // Smyth exponent
    std::function<Mat2(cplx, cplx)> custom;
    std::function<std::pair<cplx, cplx>(cplx)> custom_minus_one;

    static Potential diagonal();
    static Potential geodesic();
    static Potential equivariant(double a, double b, double c);
    static Potential smyth(cplx c, int k);

    bool is_constant() const;
    Mat2 xi(cplx z, cplx lambda) const;
    // constant kinds only
    Mat2 A(cplx lambda) const;
    // off-diagonal entries of the lambda^{-1} coefficient at z
    std::pair<cplx, cplx> minus_one(cplx z) const;
};

struct OdeOptions {
    double tol = kTauOde;
    int min_steps = 8;
    int max_steps = 1 << 18;
    // steps per unit path length; 0 means pick by step doubling until the Richardson
    // estimate meets tol.  A fixed density keeps results smooth in z.
    double density = 0;
};

// dPhi = Phi xi along a polyline starting at path[0] with Phi(path[0]) = start.
SampledLoop solve_frame_ode(const Potential& xi, const SampledLoop& start, const std::vector<cplx>& path,
                            const OdeOptions& opt = {}, int* steps_used = nullptr);
SampledLoop solve_frame_ode(const Potential& xi, cplx z0, const std::vector<cplx>& path, int samples,
                            const OdeOptions& opt = {});
// horizontal-then-vertical polyline z0 -> (Re z, Im z0) -> z
std::vector<cplx> sweep_path(cplx z0, cplx z);

// Everything the surface layer needs at one z.
struct FrameAt {
    cplx z;
    SampledLoop F;
    LaurentLoop B;
    double rho = 1;   // B(0) = diag(rho, 1/rho)
    cplx xi12, xi21;  // lambda^{-1} coefficient of the potential at z
    double residual = 0;
};

class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual FrameAt at(cplx z, const FrameAt* warm = nullptr) const = 0;
    virtual int samples() const = 0;
};

// DPW: Phi by the frame ODE (or exp for constant potentials), then Iwasawa.
class DpwSource : public FrameSource {
public:
    DpwSource(Potential pot, cplx z0 = 0, IwasawaOptions iwa = {}, int samples = 64, OdeOptions ode = {});
    FrameAt at(cplx z, const FrameAt* warm = nullptr) const override;
    int samples() const override { return m_; }
    SampledLoop phi(cplx z) const;
    FrameAt factor(cplx z, const SampledLoop& phi, const FrameAt* warm) const;
    const Potential& potential() const { return pot_; }
    cplx basepoint() const { return z0_; }
    const IwasawaOptions& iwasawa_options() const { return iwa_; }
    const OdeOptions& ode_options() const { return ode_; }

private:
    Potential pot_;
    cplx z0_;
    IwasawaOptions iwa_;
    int m_;
    OdeOptions ode_;
};

// Closed-form frames (diagonal, geodesic product, equivariant); rho from B = F^{-1} exp(z A).
class ExplicitSource : public FrameSource {
public:
    explicit ExplicitSource(Potential pot, int samples = 64);
    FrameAt at(cplx z, const FrameAt* warm = nullptr) const override;
    int samples() const override { return m_; }
    Mat2 frame(cplx z, cplx lambda) const;

private:
    Potential pot_;
    int m_;
    std::optional<EllipticProfile> profile_;
};

Mat2 diagonal_frame(cplx z, cplx lambda);
Mat2 geodesic_frame(cplx z, cplx lambda);
// Closed-form frame of the R-equivariant family at z = x + iy.
Mat2 explicit_frame_equivariant(const EllipticProfile& p, double x, double y, cplx lambda);
// the lambda-dependent antiderivative f(x) = int_0^x 2 ds / (1 + v(s)^2 / (4ab lambda^2))
cplx equivariant_f(const EllipticProfile& p, double x, cplx lambda);

struct Grid {
    double x_min = -0.5, x_max = 0.5, y_min = -0.5, y_max = 0.5;
    int nx = 9, ny = 9;
    double x(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
    double y(int j) const { return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1); }
    cplx z(int i, int j) const { return {x(i), y(j)}; }
    int index(int i, int j) const { return j * nx + i; }
    int size() const { return nx * ny; }
};

struct Hole {
    int i, j;
    cplx z;
    std::string reason;
};

struct FramePair {
    Grid grid;
    cplx z0;
    std::vector<std::optional<FrameAt>> frames;  // grid.index(i, j)
    std::vector<Hole> holes;
    const FrameAt* at(int i, int j) const {
        const auto& f = frames[grid.index(i, j)];
        return f ? &*f : nullptr;
    }
};

// Deterministic sweep: the row through the basepoint outward from z0, then each column
// outward from that row; warm starts come from the previous node on the same path.
FramePair extended_frame(const DpwSource& src, const Grid& grid);
FramePair explicit_frames(const FrameSource& src, const Grid& grid);

}  // namespace mlq
