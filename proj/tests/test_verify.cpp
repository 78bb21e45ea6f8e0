#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "mlq/verify.hpp"

using namespace mlq;
using th::pi;

namespace {

const Potential kEq = Potential::equivariant(1, 6, -std::sqrt(47.0));
const std::vector<cplx> kLambdas = {1.0, std::polar(1.0, pi / 7), I, std::polar(1.0, 2.1)};

std::shared_ptr<FrameCache> cache_for(const Potential& p) {
    return std::make_shared<FrameCache>(std::make_shared<DpwSource>(p));
}

CheckSetup eq_setup() {
    return check_setup(Grid{-0.05, 0.05, -0.3, 0.3, 9, 9}, 3);
}

CheckSetup smyth_setup() {
    return check_setup(Grid{-0.4, 0.4, -0.4, 0.4, 9, 9}, 3);
}

double worst(const ResidualReport& r, const std::string& prefix) {
    double w = 0;
    for (const auto& e : r.entries)
        if (e.name.rfind(prefix, 0) == 0) w = std::max(w, e.value / e.tol);
    return w;
}

// Evaluates F(z s_j, lambda_j) with a lambda-dependent scale: no longer an associated family.
class DistortedSource : public FrameSource {
public:
    explicit DistortedSource(Potential p) : src_(std::move(p)) {}
    FrameAt at(cplx z, const FrameAt* warm) const override {
        FrameAt f = src_.at(z, warm);
        for (int j = 0; j < f.F.size(); ++j) {
            const double s = 1 + 0.1 * std::cos(2 * pi * j / f.F.size());
            f.F[j] = src_.at(z * s).F[j];
        }
        return f;
    }
    int samples() const override { return src_.samples(); }

private:
    DpwSource src_;
};

}  // namespace

TEST_CASE("residual report") {
    ResidualReport r;
    r.add("a", 1e-6, 1e-4);
    r.add("b", NAN, 1e-4);
    CHECK(r.find("a")->pass);
    CHECK_FALSE(r.find("b")->pass);
    CHECK_FALSE(r.pass());
    r.context["note"] = "x";
    auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["checks"][0]["name"] == "a");
    CHECK(j["checks"][1]["value"].is_null());
    CHECK(j["pass"] == false);
    CHECK(j["context"]["note"] == "x");
    ResidualReport ok;
    ok.add("c", 0, 1);
    CHECK(ok.pass());
    ok.merge(r);
    CHECK(ok.entries.size() == 3);
    CHECK(ok.find("missing") == nullptr);
}

TEST_CASE("tilde Maurer-Cartan forms") {
    const double s = std::sqrt(2.0) / 2;
    auto [U, V] = tilde_maurer_cartan(0, 0, 0, 1.0);
    CHECK(std::abs(U(0, 2) + s) < 1e-15);
    CHECK(std::abs(U(0, 3) + I * s) < 1e-15);
    CHECK(std::abs(U(2, 3)) == 0);
    CHECK(std::abs(V(0, 3) - I * s) < 1e-15);
    CHECK(so22_algebra_residual(U) == 0);
    // lambda enters through lambda^2
    auto [U1, V1] = tilde_maurer_cartan(0.3, cplx(0.1, 0.2), cplx(0.5, -0.2), std::polar(1.0, 0.7));
    auto [U2, V2] = tilde_maurer_cartan(0.3, cplx(0.1, 0.2), cplx(0.5, -0.2), -std::polar(1.0, 0.7));
    CHECK((U1 - U2).norm() < 1e-15);
    CHECK((V1 - V2).norm() < 1e-15);
    CHECK(so22_algebra_residual(U1) < 1e-15);
    CHECK(so22_algebra_residual(V1) < 1e-15);
}

TEST_CASE("check setup") {
    CheckSetup s = check_setup(Grid{-1, 1, 0, 0.5, 9, 5}, 4);
    CHECK(s.h == doctest::Approx(2e-3));
    CHECK(s.points.size() == 12);
    for (cplx z : s.points) {
        CHECK(z.real() > -1);
        CHECK(z.real() < 1);
        CHECK(z.imag() > 0);
        CHECK(z.imag() < 0.5);
    }
}

TEST_CASE("equivariant family passes every check") {
    auto cache = cache_for(kEq);
    CheckSetup s = eq_setup();
    SurfaceFields f = surface_fields(cache, 1.0);
    ResidualReport r = check_flatness(f, kLambdas, s);
    CHECK(r.entries.size() == 12);
    r.merge(check_sinh_gordon(f, s));
    for (cplx l : kLambdas) {
        SurfaceFields fl = surface_fields(cache, l);
        r.merge(check_minimality(fl, s));
        r.merge(check_correspondence(fl, s));
        r.merge(check_general_frame(fl, s));
    }
    r.merge(check_associated(cache, kLambdas, s));
    r.merge(check_symmetry(*cache, kEq, 1.0, s.points));
    for (const auto& e : r.entries) CHECK_MESSAGE(e.pass, e.name << " = " << e.value << " (tol " << e.tol << ")");
    CHECK(r.find("structure.condition1"));
}

TEST_CASE("Smyth family: sinh-Gordon, radial symmetry, rotations") {
    for (int k : {1, 2}) {
        Potential p = Potential::smyth(2.0, k);
        auto cache = cache_for(p);
        CheckSetup s = smyth_setup();
        SurfaceFields f = surface_fields(cache, 1.0);
        ResidualReport r = check_sinh_gordon(f, s);
        r.merge(check_radial(f, s));
        r.merge(check_minimality(f, s));
        r.merge(check_symmetry(*cache, p, std::polar(1.0, 0.4), s.points));
        for (const auto& e : r.entries) CHECK_MESSAGE(e.pass, e.name << " = " << e.value);
        CHECK(r.entries.size() == 2 + 1 + 9 + size_t(k + 1));
    }
}

TEST_CASE("degenerate families") {
    CheckSetup s = check_setup(Grid{-0.5, 0.5, -0.5, 0.5, 9, 9}, 3);
    auto diag = surface_fields(cache_for(Potential::diagonal()), std::polar(1.0, 0.3));
    auto geo = surface_fields(cache_for(Potential::geodesic()), std::polar(1.0, 0.3));
    CHECK(check_degenerate(diag, s, PotentialKind::Diagonal).pass());
    CHECK(check_degenerate(geo, s, PotentialKind::GeodesicProduct).pass());
    // each spot check is a negative control for the other family
    CHECK(worst(check_degenerate(geo, s, PotentialKind::Diagonal), "degenerate.") > 10);
    CHECK(worst(check_degenerate(diag, s, PotentialKind::GeodesicProduct), "degenerate.") > 10);
    // beta vanishes on the geodesic family, so the structure equations are skipped with a note
    ResidualReport m = check_minimality(geo, s);
    CHECK(m.pass());
    CHECK(m.context.count("structure"));
}

TEST_CASE("negative controls fail by at least 10x") {
    auto cache = cache_for(kEq);
    CheckSetup s = eq_setup();
    SurfaceFields f = surface_fields(cache, 1.0);
    SurfaceFields bad = perturb_alphahat(f, 0.1);

    SUBCASE("flatness") {
        ResidualReport r = check_flatness(bad, kLambdas, s);
        CHECK(worst(r, "flatness.hat") > 10);
        CHECK(worst(r, "flatness.tilde[") > 10);
    }
    SUBCASE("sinh-Gordon") { CHECK(worst(check_sinh_gordon(bad, s), "sinh_gordon") > 10); }
    SUBCASE("radial") {
        SurfaceFields g = surface_fields(cache_for(Potential::smyth(2.0, 1)), 1.0);
        g.hat = [hat = g.hat](cplx z) {
            VecX v = hat(z);
            v[0] += 0.1 * z.real();
            return v;
        };
        CHECK(worst(check_radial(g, smyth_setup()), "radial") > 10);
    }
    SUBCASE("minimality") {
        // a non-conformal reparametrization keeps the surface but breaks the coordinate identities
        SurfaceFields g = f;
        g.lift = [lift = f.lift](cplx z) { return lift(z + 0.3 * std::conj(z) * std::conj(z)); };
        CHECK(worst(check_minimality(g, s), "minimality.conformal") > 10);
    }
    SUBCASE("correspondence") {
        SurfaceFields g = f;
        g.ads = [ads = f.ads](cplx z) {
            VecX v = ads(z);
            v.tail(4) *= 1.01;
            return v;
        };
        ResidualReport r = check_correspondence(g, s);
        CHECK(worst(r, "ads.unit") > 10);
        CHECK_FALSE(r.pass());
        // f_max and N play symmetric roles
        CHECK(check_correspondence(f, s, true).pass());
    }
    SUBCASE("general") {
        SurfaceFields g = f;
        g.u = [u = f.u](cplx z) {
            VecX v = u(z);
            v[0] += 0.5 * z.real();
            return v;
        };
        CHECK(worst(check_general_frame(g, s), "general.gauss") > 10);
        SurfaceFields h = f;
        h.hat = bad.hat;
        CHECK(worst(check_general_frame(h, s), "general.theta") > 10);
    }
    SUBCASE("associated family") {
        auto distorted = std::make_shared<FrameCache>(std::make_shared<DistortedSource>(kEq));
        CheckSetup sd = s;
        sd.strict = false;
        sd.tol_fd = 1;
        CHECK(worst(check_associated(distorted, kLambdas, sd), "associated.") > 10);
    }
    SUBCASE("symmetry") {
        Potential other = Potential::equivariant(1, 6, -6.0);
        CHECK(worst(check_symmetry(*cache, other, 1.0, s.points), "symmetry.") > 10);
        Potential sm = Potential::smyth(2.0, 1);
        auto sc = cache_for(sm);
        CHECK(worst(check_symmetry(*sc, Potential::smyth(2.0, 2), 1.0, smyth_setup().points), "symmetry.") > 10);
        CHECK_THROWS_ERR(check_symmetry(*cache, Potential::diagonal(), 1.0, s.points), Err::InvalidInput);
    }
}

TEST_CASE("finite-difference residuals converge at second order") {
    auto cache = cache_for(kEq);
    SurfaceFields f = surface_fields(cache, 1.0);
    CheckSetup s;
    s.points = {cplx(0.01, 0.05), cplx(-0.02, -0.1)};
    s.strict = false;
    s.tol_fd = 1;
    s.mode = JetMode::Central;
    auto run = [&](double h) {
        s.h = h;
        ResidualReport r = check_flatness(f, kLambdas, s);
        r.merge(check_sinh_gordon(f, s));
        r.merge(check_minimality(f, s));
        r.merge(check_correspondence(f, s));
        r.merge(check_general_frame(f, s));
        return r;
    };
    ResidualReport a = run(4e-4), b = run(2e-4);
    int measured = 0;
    for (size_t i = 0; i < a.entries.size(); ++i) {
        // identities that hold to rounding have no discretization error to measure
        if (a.entries[i].value < 1e-8) continue;
        ++measured;
        const double order = std::log2(a.entries[i].value / b.entries[i].value);
        CHECK_MESSAGE(order >= 1.8, a.entries[i].name << " order " << order);
    }
    CHECK(measured >= 20);

    // the flatness residual does not depend on lambda
    double lo = 1e300, hi = 0;
    for (const auto& e : b.entries)
        if (e.name.rfind("flatness.hat", 0) == 0 || e.name.rfind("flatness.tilde[", 0) == 0) {
            lo = std::min(lo, e.value);
            hi = std::max(hi, e.value);
        }
    CHECK(hi < 2 * lo);
}

TEST_CASE("coarse steps are refused") {
    auto cache = cache_for(kEq);
    CheckSetup s = eq_setup();
    s.h = 0.05;
    CHECK_THROWS_ERR(check_sinh_gordon(surface_fields(cache, 1.0), s), Err::GridTooCoarse);
    CHECK_THROWS_ERR(check_flatness(surface_fields(cache, 1.0), {1.0, I}, eq_setup()), Err::InvalidInput);
}

TEST_CASE("projective distance") {
    C4 a(1, I, 0.5, 0);
    CHECK(projective_distance(a, cplx(0.3, -2) * a) < 1e-15);
    CHECK(projective_distance(a, C4(0, 0, 0, 1)) == doctest::Approx(1.0));
    CHECK(projective_distance(C4::Zero(), C4::Zero()) == 0);
}
