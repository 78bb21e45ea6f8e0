#include "mlq/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <memory>
#include <numbers>
#include <sstream>

namespace mlq {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

double RunConfig::tol(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

std::vector<cplx> RunConfig::lambda_points() const {
    std::vector<cplx> out;
    for (double t : lambdas) out.push_back(std::polar(1.0, t));
    return out;
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(Err::Config, msg); }

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) bad(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

int integer(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) bad(std::string("'") + key + "' must be an integer");
    return j[key].get<int>();
}

cplx complex_value(const json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
    bad(std::string("'") + what + "' must be a number or [re, im]");
}

Potential potential_from(const json& p, int* order, int* samples) {
    if (!p.is_object()) bad("'potential' must be an object");
    if (!p.contains("kind") || !p["kind"].is_string()) bad("potential.kind missing");
    const std::string kind = p["kind"];
    if (order) *order = integer(p, "order", 16);
    if (samples) *samples = integer(p, "samples", 64);
    try {
        if (kind == "diagonal") return Potential::diagonal();
        if (kind == "geodesic" || kind == "geodesic_product") return Potential::geodesic();
        if (kind == "equivariant") {
            if (!p.contains("a") || !p.contains("b") || !p.contains("c")) bad("equivariant potential needs a, b, c");
            return Potential::equivariant(num(p, "a", 0), num(p, "b", 0), num(p, "c", 0));
        }
        if (kind == "smyth") {
            if (!p.contains("c")) bad("smyth potential needs c");
            return Potential::smyth(complex_value(p["c"], "c"), integer(p, "k", 1));
        }
    } catch (const Error& e) {
        if (e.code() == Err::Config) throw;
        bad(e.what());
    }
    bad("unknown potential kind '" + kind + "'");
}

}  // namespace

Potential parse_potential(const std::string& text, int* order, int* samples) {
    json p;
    try {
        p = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    return potential_from(p, order, samples);
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("config must be a JSON object");
    RunConfig c;
    if (!j.contains("potential")) bad("config needs 'potential'");
    c.potential = potential_from(j["potential"], &c.order, &c.samples);

    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) bad("'grid' must be an object");
        c.grid.x_min = num(g, "x_min", c.grid.x_min);
        c.grid.x_max = num(g, "x_max", c.grid.x_max);
        c.grid.y_min = num(g, "y_min", c.grid.y_min);
        c.grid.y_max = num(g, "y_max", c.grid.y_max);
        int sx = 8, sy = 8;
        if (g.contains("steps")) {
            const json& s = g["steps"];
            if (s.is_number_integer()) sx = sy = s.get<int>();
            else if (s.is_array() && s.size() == 2 && s[0].is_number_integer() && s[1].is_number_integer()) {
                sx = s[0].get<int>();
                sy = s[1].get<int>();
            } else bad("grid.steps must be an integer or [nx, ny]");
        }
        c.grid.nx = sx + 1;
        c.grid.ny = sy + 1;
    } else {
        c.grid.nx = c.grid.ny = 9;
    }
    if (j.contains("basepoint")) c.basepoint = complex_value(j["basepoint"], "basepoint");
    if (j.contains("lambdas")) {
        if (!j["lambdas"].is_array()) bad("'lambdas' must be an array of angles");
        c.lambdas.clear();
        for (const auto& v : j["lambdas"]) {
            if (!v.is_number()) bad("'lambdas' must be an array of angles");
            c.lambdas.push_back(v.get<double>());
        }
    }
    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        if (!o.is_object()) bad("'outputs' must be an object");
        auto str = [&](const char* key, std::string& dst) {
            if (!o.contains(key)) return;
            if (!o[key].is_string()) bad(std::string("outputs.") + key + " must be a string");
            dst = o[key];
        };
        str("mesh_csv", c.outputs.mesh_csv);
        str("mesh_json", c.outputs.mesh_json);
        str("profile_svg", c.outputs.profile_svg);
        str("report_json", c.outputs.report_json);
        str("holes_json", c.outputs.holes_json);
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) bad("'tolerances' must be an object");
        for (const auto& [k, v] : t.items()) {
            if (k != "fd" && k != "h" && k != "iwasawa" && k != "ode") bad("unknown tolerance '" + k + "'");
            if (!v.is_number() || !(v.get<double>() > 0)) bad("tolerance '" + k + "' must be positive");
            c.tolerances[k] = v.get<double>();
        }
    }
    if (j.contains("frames")) {
        if (!j["frames"].is_string()) bad("'frames' must be \"dpw\" or \"explicit\"");
        const std::string f = j["frames"];
        if (f == "explicit") c.explicit_frames = true;
        else if (f != "dpw") bad("'frames' must be \"dpw\" or \"explicit\"");
    }
    if (j.contains("negative_control")) {
        if (!j["negative_control"].is_boolean()) bad("'negative_control' must be a boolean");
        c.negative_control = j["negative_control"];
    }
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    if (c.grid.nx < 9 || c.grid.ny < 9) bad("steps ≥ 8 required in each direction");
    const Grid& g = c.grid;
    for (double v : {g.x_min, g.x_max, g.y_min, g.y_max})
        if (!std::isfinite(v)) bad("grid bounds must be finite");
    if (!(g.x_max > g.x_min) || !(g.y_max > g.y_min)) bad("grid needs x_min < x_max and y_min < y_max");
    if (c.order < 2 || c.order > 64) bad("potential.order must lie in [2, 64]");
    if (c.samples < 8 || c.samples > 1024 || c.samples % 4 != 0) bad("potential.samples must be a multiple of 4 in [8, 1024]");
    if (c.samples < 2 * c.order + 2) bad("potential.samples must exceed 2*order + 1");
    if (c.lambdas.empty()) bad("'lambdas' must not be empty");
    for (size_t i = 0; i < c.lambdas.size(); ++i) {
        if (!std::isfinite(c.lambdas[i])) bad("lambda angles must be finite");
        for (size_t k = 0; k < i; ++k) {
            double d = std::remainder(c.lambdas[i] - c.lambdas[k], 2 * std::numbers::pi);
            if (std::abs(d) < 1e-12) bad("lambda angles must be distinct mod 2π");
        }
    }
    if (c.explicit_frames && (c.potential.kind == PotentialKind::Smyth || c.potential.kind == PotentialKind::Custom))
        bad("explicit frames exist only for diagonal, geodesic and equivariant potentials");
}

namespace {

std::shared_ptr<const FrameSource> make_source(const RunConfig& c) {
    if (c.explicit_frames) return std::make_shared<ExplicitSource>(c.potential, c.samples);
    IwasawaOptions iwa;
    iwa.order = c.order;
    iwa.tol = c.tol("iwasawa", kTauIwa);
    OdeOptions ode;
    ode.tol = c.tol("ode", kTauOde);
    return std::make_shared<DpwSource>(c.potential, c.basepoint, iwa, c.samples, ode);
}

void row_values(const SurfaceSample& s, std::vector<double>& v) {
    v.clear();
    v.push_back(s.z.real());
    v.push_back(s.z.imag());
    for (int k = 0; k < 4; ++k) {
        v.push_back(s.lift[k].real());
        v.push_back(s.lift[k].imag());
    }
    for (double x : {s.phi.x1, s.phi.x2, s.phi.x3}) v.push_back(x);
    for (double x : {s.psi.x1, s.psi.x2, s.psi.x3}) v.push_back(x);
    for (int k = 0; k < 4; ++k) v.push_back(s.fmax[k]);
    for (int k = 0; k < 4; ++k) v.push_back(s.N[k]);
    v.push_back(s.u);
    v.push_back(s.alphahat.real());
    v.push_back(s.alphahat.imag());
}

}  // namespace

std::vector<std::string> mesh_columns() {
    return {"lambda", "x",     "y",     "re_q1", "im_q1", "re_q2", "im_q2", "re_q3", "im_q3", "re_q4",
            "im_q4",  "phi1",  "phi2",  "phi3",  "psi1",  "psi2",  "psi3",  "fmax1", "fmax2", "fmax3",
            "fmax4",  "n1",    "n2",    "n3",    "n4",    "u",     "re_alphahat", "im_alphahat"};
}

BuildResult run_build(const RunConfig& c) {
    validate(c);
    auto src = make_source(c);
    FramePair frames = c.explicit_frames ? explicit_frames(*src, c.grid)
                                         : extended_frame(static_cast<const DpwSource&>(*src), c.grid);
    const auto cols = mesh_columns();
    std::ostringstream csv, js;
    for (size_t k = 0; k < cols.size(); ++k) csv << (k ? "," : "") << cols[k];
    csv << '\n';
    js << "{\n  \"columns\": [";
    for (size_t k = 0; k < cols.size(); ++k) js << (k ? ", " : "") << '"' << cols[k] << '"';
    js << "],\n  \"rows\": [";

    ojson holes = ojson::array();
    for (const Hole& h : frames.holes) {
        ojson e;
        e["i"] = h.i;
        e["j"] = h.j;
        e["x"] = h.z.real();
        e["y"] = h.z.imag();
        e["lambda"] = nullptr;
        e["reason"] = h.reason;
        holes.push_back(e);
    }

    BuildResult r;
    std::vector<double> vals;
    for (double t : c.lambdas) {
        const cplx l = std::polar(1.0, t);
        for (int j = 0; j < c.grid.ny; ++j)
            for (int i = 0; i < c.grid.nx; ++i) {
                const FrameAt* fa = frames.at(i, j);
                if (!fa) continue;
                SurfaceSample s;
                try {
                    s = make_sample(*fa, l);
                } catch (const Error& e) {
                    ojson h;
                    h["i"] = i;
                    h["j"] = j;
                    h["x"] = c.grid.x(i);
                    h["y"] = c.grid.y(j);
                    h["lambda"] = t;
                    h["reason"] = e.what();
                    holes.push_back(h);
                    continue;
                }
                row_values(s, vals);
                csv << fmt17(t);
                js << (r.rows ? ",\n    [" : "\n    [") << fmt17(t);
                for (double v : vals) {
                    csv << ',' << fmt17(v);
                    js << ", " << fmt17(v);
                }
                csv << '\n';
                js << ']';
                ++r.rows;
            }
    }
    js << "\n  ]\n}\n";
    r.mesh_csv = csv.str();
    r.mesh_json = js.str();
    r.holes = holes.size();
    if (r.holes) {
        ojson side;
        side["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"y_min", c.grid.y_min},
                        {"y_max", c.grid.y_max}, {"nx", c.grid.nx},       {"ny", c.grid.ny}};
        side["holes"] = holes;
        r.holes_json = side.dump(2) + "\n";
    }
    return r;
}

namespace {

std::string lambda_suffix(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "[lambda=%.4f]", t);
    return buf;
}

// A check that throws still yields a report entry, so the run reports instead of aborting.
template <class F>
void guarded(ResidualReport& out, const std::string& name, const std::string& suffix, F&& f) {
    try {
        ResidualReport r = f();
        for (auto& e : r.entries) e.name += suffix;
        out.merge(r);
    } catch (const Error& e) {
        out.add(name + ".error" + suffix, std::nan(""), 0);
        out.context[name + suffix] = e.what();
    }
}

}  // namespace

ResidualReport run_verify(const RunConfig& c) {
    validate(c);
    if (c.lambdas.size() < 3) bad("verify needs at least three distinct lambdas");
    auto cache = std::make_shared<FrameCache>(make_source(c));
    CheckSetup s = check_setup(c.grid);
    s.tol_fd = c.tol("fd", kTauFd);
    if (c.tolerances.count("h")) s.h = c.tol("h", s.h);
    const auto lams = c.lambda_points();
    const PotentialKind kind = c.potential.kind;
    auto fields = [&](cplx l) {
        SurfaceFields f = surface_fields(cache, l);
        return c.negative_control ? perturb_alphahat(f, 0.1) : f;
    };

    ResidualReport rep;
    rep.context["family"] = kind_name(kind);
    rep.context["frames"] = c.explicit_frames ? "explicit" : "dpw";
    rep.context["points"] = std::to_string(s.points.size());
    rep.context["h"] = fmt17(s.h);
    rep.context["tol_fd"] = fmt17(s.tol_fd);
    if (c.negative_control) rep.context["negative_control"] = "alphahat + 0.1 conj(z)";
    {
        std::string ls;
        for (double t : c.lambdas) ls += (ls.empty() ? "" : ",") + fmt17(t);
        rep.context["lambdas"] = ls;
    }

    guarded(rep, "flatness", "", [&] { return check_flatness(fields(lams[0]), lams, s); });
    guarded(rep, "sinh_gordon", "", [&] { return check_sinh_gordon(fields(lams[0]), s); });
    for (size_t k = 0; k < lams.size(); ++k) {
        const std::string sfx = lambda_suffix(c.lambdas[k]);
        guarded(rep, "minimality", sfx, [&] { return check_minimality(fields(lams[k]), s); });
        guarded(rep, "correspondence", sfx, [&] { return check_correspondence(fields(lams[k]), s); });
        guarded(rep, "general", sfx, [&] { return check_general_frame(fields(lams[k]), s); });
    }
    if (kind == PotentialKind::Diagonal || kind == PotentialKind::GeodesicProduct)
        guarded(rep, "degenerate", "", [&] { return check_degenerate(fields(lams[0]), s, kind); });
    guarded(rep, "associated", "", [&] { return check_associated(cache, lams, s); });
    if (kind == PotentialKind::Equivariant || kind == PotentialKind::Smyth)
        guarded(rep, "symmetry", "", [&] { return check_symmetry(*cache, c.potential, lams[0], s.points); });
    if (kind == PotentialKind::Smyth) guarded(rep, "radial", "", [&] { return check_radial(fields(lams[0]), s); });
    return rep;
}

AssociateResult run_associate(const RunConfig& c) {
    validate(c);
    auto cache = std::make_shared<FrameCache>(make_source(c));
    const cplx zc{0.5 * (c.grid.x_min + c.grid.x_max), 0.5 * (c.grid.y_min + c.grid.y_max)};
    const FrameAt& fa = cache->get(zc);
    const FrameInvariants base = frame_invariants(fa, 1.0);
    ojson out;
    out["z"] = {zc.real(), zc.imag()};
    out["lambdas"] = ojson::array();
    for (double t : c.lambdas) {
        const cplx l = std::polar(1.0, t);
        const FrameInvariants inv = frame_invariants(fa, l);
        ojson e;
        e["arg"] = t;
        e["eu"] = std::exp(inv.u);
        e["alphahat"] = {inv.alphahat.real(), inv.alphahat.imag()};
        if (std::abs(base.alphahat) > 0) {
            cplx r = inv.alphahat * l * l / base.alphahat;
            e["scaled_ratio"] = {r.real(), r.imag()};
        } else {
            e["scaled_ratio"] = nullptr;
        }
        out["lambdas"].push_back(e);
    }
    CheckSetup s = check_setup(c.grid);
    s.tol_fd = c.tol("fd", kTauFd);
    ResidualReport rep;
    guarded(rep, "associated", "", [&] { return check_associated(cache, c.lambda_points(), s); });
    out["report"] = ojson::parse(rep.to_json());
    AssociateResult r;
    r.pass = rep.pass();
    r.json = out.dump(2) + "\n";
    return r;
}

}  // namespace mlq
