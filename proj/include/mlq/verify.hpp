#pragma once
#include <map>
#include <string>

#include "mlq/surfaces.hpp"

namespace mlq {

struct ResidualEntry {
    std::string name;
    double value = 0;
    double tol = 0;
    bool pass = false;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;
    std::map<std::string, std::string> context;

    void add(const std::string& name, double value, double tol);
    void merge(const ResidualReport& other);
    bool pass() const;
    const ResidualEntry* find(const std::string& name) const;
    // {"checks":[{"name","value","tol","pass"}],"pass":bool,"context":{...}}
    std::string to_json() const;
};

// Quantities the hat and tilde forms are linear in.
struct FormFields {
    cplx E;   // e^{uhat/2}
    cplx Ar;  // alphahat e^{-uhat/2}
    cplx Ac;  // conj(alphahat) e^{-uhat/2}
    cplx uz, uzb;
};
FormFields form_fields(double uhat, cplx uhat_z, cplx alphahat);

struct HatForms {
    Mat2 U1, V1, U2, V2;
};
HatForms hat_forms(const FormFields& q, cplx lambda);
std::pair<Mat4c, Mat4c> tilde_forms(const FormFields& q, cplx lambda);
std::pair<Mat4c, Mat4c> tilde_maurer_cartan(double uhat, cplx uhat_z, cplx alphahat, cplx lambda);
// eta X antisymmetric
double so22_algebra_residual(const Mat4c& x);

// Pointwise fields of one surface at fixed lambda.  Each returns a vector so that
// negative controls can wrap and perturb them.
struct SurfaceFields {
    cplx lambda = 1.0;
    Field lift;   // horizontal lift (4)
    Field ads;    // f_max (4), N (4)
    Field h2;     // phi (3), psi (3)
    Field hat;    // uhat, alphahat at lambda = 1 (2)
    Field u;      // u from the frame, Gammahat (2)
};
SurfaceFields surface_fields(std::shared_ptr<FrameCache> cache, cplx lambda);
// alphahat -> alphahat + eps * conj(z) in the hat field
SurfaceFields perturb_alphahat(SurfaceFields f, double eps);

struct CheckSetup {
    std::vector<cplx> points;
    double h = 1e-3;
    double tol_fd = kTauFd;
    // throw GridTooCoarse when a Richardson estimate exceeds this fraction of tol_fd
    bool strict = true;
    JetMode mode = JetMode::Richardson;
};
// Interior points of the grid (at most max_per_axis per direction), h = 1e-3 * extent.
CheckSetup check_setup(const Grid& g, int max_per_axis = 4);

// Hat pair and tilde flatness per lambda; the fields' hat entry supplies (uhat, alphahat).
ResidualReport check_flatness(const SurfaceFields& base, const std::vector<cplx>& lambdas, const CheckSetup& s);
ResidualReport check_sinh_gordon(const SurfaceFields& f, const CheckSetup& s);
// uhat(z) against uhat(|z|)
ResidualReport check_radial(const SurfaceFields& f, const CheckSetup& s);
ResidualReport check_minimality(const SurfaceFields& f, const CheckSetup& s);
ResidualReport check_correspondence(const SurfaceFields& f, const CheckSetup& s, bool swap = false);
ResidualReport check_general_frame(const SurfaceFields& f, const CheckSetup& s);
// Diagonal (Gamma = 1/2, K = -2) and geodesic (Gamma = 0, K = 0) spot checks.
ResidualReport check_degenerate(const SurfaceFields& f, const CheckSetup& s, PotentialKind kind);
ResidualReport check_associated(std::shared_ptr<FrameCache> cache, const std::vector<cplx>& lambdas,
                                const CheckSetup& s);
// Equivariant: lift(z + i theta) = psi(exp(i theta A(l)), exp(i theta A(il))) lift(z).
// Smyth: lift(e^{i theta_l} z) = psi(A_l, A_l) lift(z).
ResidualReport check_symmetry(FrameCache& cache, const Potential& pot, cplx lambda, const std::vector<cplx>& points,
                              const std::vector<double>& thetas = {0.0, 0.3, 1.0});

// projective distance ||a - c b|| / ||a|| with the best complex c
double projective_distance(const C4& a, const C4& b);

}  // namespace mlq
