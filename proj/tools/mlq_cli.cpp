// Command-line front end; talks to the library only through the C API.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "mlq/mlq.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitHoles = 2;
constexpr int kExitCheckFailed = 3;

struct Str {
    char* p = nullptr;
    ~Str() { mlq_string_free(p); }
    std::string get() const { return p ? p : ""; }
};

using ConfigPtr = std::unique_ptr<mlq_config, decltype(&mlq_config_free)>;

int report_error(mlq_status s) {
    std::cerr << "error: " << mlq_last_error() << " (" << mlq_status_name(s) << ")\n";
    return kExitError;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    f << text;
    return static_cast<bool>(f);
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot read " << path << "\n";
        return false;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    out = ss.str();
    return true;
}

std::string output(const mlq_config* c, const char* key) {
    Str s;
    if (mlq_config_get_output(c, key, &s.p) != MLQ_OK) return "";
    return s.get();
}

struct CommonOpts {
    std::string config;
    int steps = 0;
    std::vector<double> lambdas;
    std::string mesh_csv, mesh_json, holes_json, report_json;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config, "run configuration (JSON)")->required();
    sub->add_option("--steps", o.steps, "override grid steps in both directions");
    sub->add_option("--lambda", o.lambdas, "override lambda angles (radians)");
    sub->add_option("--report-json", o.report_json, "verification report path");
}

// Loads the config and applies flag overrides; returns 0 on success or an exit code.
int load(const CommonOpts& o, ConfigPtr& cfg) {
    std::string text;
    if (!read_file(o.config, text)) return kExitError;
    mlq_config* raw = nullptr;
    if (mlq_status s = mlq_config_parse(text.c_str(), &raw); s != MLQ_OK) return report_error(s);
    cfg.reset(raw);
    if (o.steps)
        if (mlq_status s = mlq_config_set_steps(raw, o.steps, o.steps); s != MLQ_OK) return report_error(s);
    if (!o.lambdas.empty())
        if (mlq_status s = mlq_config_set_lambdas(raw, o.lambdas.data(), o.lambdas.size()); s != MLQ_OK)
            return report_error(s);
    const std::pair<const char*, const std::string*> outs[] = {{"mesh_csv", &o.mesh_csv},
                                                               {"mesh_json", &o.mesh_json},
                                                               {"holes_json", &o.holes_json},
                                                               {"report_json", &o.report_json}};
    for (auto [key, val] : outs)
        if (!val->empty()) mlq_config_set_output(raw, key, val->c_str());
    return kExitOk;
}

int cmd_build(const CommonOpts& o) {
    ConfigPtr cfg(nullptr, mlq_config_free);
    if (int rc = load(o, cfg)) return rc;
    Str csv, js, holes;
    size_t rows = 0, nholes = 0;
    if (mlq_status s = mlq_build(cfg.get(), &csv.p, &js.p, &holes.p, &rows, &nholes); s != MLQ_OK)
        return report_error(s);
    const std::string csv_path = output(cfg.get(), "mesh_csv"), json_path = output(cfg.get(), "mesh_json");
    if (csv_path.empty() && json_path.empty()) std::cout << csv.get();
    if (!csv_path.empty() && !write_file(csv_path, csv.get())) return kExitError;
    if (!json_path.empty() && !write_file(json_path, js.get())) return kExitError;
    std::cerr << "rows: " << rows << ", holes: " << nholes << "\n";
    if (nholes) {
        std::string hp = output(cfg.get(), "holes_json");
        if (hp.empty()) hp = (!csv_path.empty() ? csv_path : !json_path.empty() ? json_path : "mesh") + ".holes.json";
        if (!write_file(hp, holes.get())) return kExitError;
        std::cerr << "holes written to " << hp << "\n";
    }
    const std::string report_path = output(cfg.get(), "report_json");
    if (!report_path.empty()) {
        Str rep;
        int pass = 0;
        if (mlq_status s = mlq_verify(cfg.get(), &rep.p, &pass); s != MLQ_OK) return report_error(s);
        if (!write_file(report_path, rep.get())) return kExitError;
        std::cerr << "verification: " << (pass ? "pass" : "FAIL") << "\n";
    }
    return nholes ? kExitHoles : kExitOk;
}

int cmd_verify(const CommonOpts& o, bool negative) {
    ConfigPtr cfg(nullptr, mlq_config_free);
    if (int rc = load(o, cfg)) return rc;
    if (negative) mlq_config_set_negative_control(cfg.get(), 1);
    Str rep;
    int pass = 0;
    if (mlq_status s = mlq_verify(cfg.get(), &rep.p, &pass); s != MLQ_OK) return report_error(s);
    const std::string path = output(cfg.get(), "report_json");
    if (path.empty()) std::cout << rep.get();
    else if (!write_file(path, rep.get())) return kExitError;
    std::cerr << "verification: " << (pass ? "pass" : "FAIL") << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_associate(const CommonOpts& o, const std::string& out) {
    ConfigPtr cfg(nullptr, mlq_config_free);
    if (int rc = load(o, cfg)) return rc;
    Str js;
    int pass = 0;
    if (mlq_status s = mlq_associate(cfg.get(), &js.p, &pass); s != MLQ_OK) return report_error(s);
    if (out.empty()) std::cout << js.get();
    else if (!write_file(out, js.get())) return kExitError;
    return pass ? kExitOk : kExitCheckFailed;
}

struct CatenoidOpts {
    int m = 4, n = 8;
    double lambda0_arg = 0.5235987755982988;
    double a = 1;
    int sign_c = -1;
    int x_samples = 200;
    double y = 0.01;
    std::string svg = "profile.svg", csv = "profile.csv";
    bool rotation = false;
    bool ends = false;
};

int cmd_catenoid(const CatenoidOpts& o) {
    mlq_closing* raw = nullptr;
    if (mlq_status s = mlq_closing_solve(o.m, o.n, o.lambda0_arg, o.a, o.sign_c, &raw); s != MLQ_OK)
        return report_error(s);
    std::unique_ptr<mlq_closing, decltype(&mlq_closing_free)> p(raw, mlq_closing_free);
    double b, c, rm, rn, lo, hi;
    mlq_closing_params(raw, &b, &c, &rm, &rn);
    mlq_closing_interval(raw, &lo, &hi);
    std::printf("b = %.17g\nc = %.17g\nc^2 = %.17g\n", b, c, c * c);
    std::printf("closing residuals: m %.3e, n %.3e\n", rm, rn);
    std::printf("profile interval: (%.17g, %.17g)\n", lo, hi);
    for (int w = 0; w < 2; ++w) {
        int cls = 0;
        double res = 0, mu = 0;
        mlq_closing_monodromy(raw, w, &cls, &res);
        const char* names[] = {"+Id", "-Id", "nontrivial"};
        std::printf("monodromy at %s: %s (residual %.3e)", w ? "i*lambda0" : "lambda0", names[cls], res);
        if (mlq_closing_mu(raw, w, &mu) == MLQ_OK) std::printf(", mu = %.12g\n", mu);
        else std::printf(", not diagonalizable: %s\n", mlq_last_error());
    }
    Str csv, svg;
    if (mlq_status s = mlq_closing_profile(raw, o.x_samples, o.y, &csv.p, &svg.p); s != MLQ_OK) return report_error(s);
    if (!write_file(o.csv, csv.get()) || !write_file(o.svg, svg.get())) return kExitError;
    std::printf("wrote %s and %s\n", o.csv.c_str(), o.svg.c_str());
    if (o.rotation) {
        for (double th : {0.3, 1.0}) {
            double r1, r2;
            if (mlq_status s = mlq_closing_rotation_residual(raw, o.x_samples, o.y, th, &r1, &r2); s != MLQ_OK)
                return report_error(s);
            std::printf("rotation law theta=%.1f: w1 %.3e, w2 %.3e\n", th, r1, r2);
        }
    }
    if (o.ends) {
        double ls, rs;
        int ok;
        if (mlq_status s = mlq_closing_ends(raw, &ls, &rs, &ok); s != MLQ_OK) return report_error(s);
        std::printf("end length growth per decade: left %.6g, right %.6g; %s\n", ls, rs,
                    ok ? "consistent with complete ends (numerical evidence only)" : "inconclusive");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal Lagrangian surfaces in the complex hyperbolic quadric"};
    app.require_subcommand(1);

    CommonOpts build_o, verify_o, assoc_o;
    auto* build = app.add_subcommand("build", "compute frames and export surface meshes");
    add_common(build, build_o);
    build->add_option("--mesh-csv", build_o.mesh_csv);
    build->add_option("--mesh-json", build_o.mesh_json);
    build->add_option("--holes-json", build_o.holes_json);

    bool negative = false;
    auto* verify = app.add_subcommand("verify", "run the verification suite and emit a residual report");
    add_common(verify, verify_o);
    verify->add_flag("--negative-control", negative, "perturb alphahat by 0.1 conj(z); the report must fail");

    std::string assoc_out;
    auto* assoc = app.add_subcommand("associate", "sweep the associated family over the configured lambdas");
    add_common(assoc, assoc_o);
    assoc->add_option("--out", assoc_out);

    CatenoidOpts cat_o;
    auto setup_catenoid = [&](CLI::App* sub) {
        sub->add_option("--m", cat_o.m)->required();
        sub->add_option("--n", cat_o.n)->required();
        sub->add_option("--lambda0-arg", cat_o.lambda0_arg, "argument of lambda0 in radians")->required();
        sub->add_option("--a", cat_o.a)->required();
        sub->add_option("--sign-c", cat_o.sign_c)->required()->check(CLI::IsMember({-1, 1}));
        sub->add_option("--x-samples", cat_o.x_samples)->check(CLI::Range(2, 100000));
        sub->add_option("--y", cat_o.y);
        sub->add_option("--svg", cat_o.svg);
        sub->add_option("--csv", cat_o.csv);
        sub->add_flag("--check-rotation", cat_o.rotation, "print rotation-law residuals");
        sub->add_flag("--ends", cat_o.ends, "print end-length diagnostics");
    };
    auto* catenoid = app.add_subcommand("catenoid", "closing conditions and profile curves");
    auto* profile = app.add_subcommand("profile", "alias of catenoid");
    setup_catenoid(catenoid);
    setup_catenoid(profile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }
    if (*build) return cmd_build(build_o);
    if (*verify) return cmd_verify(verify_o, negative);
    if (*assoc) return cmd_associate(assoc_o, assoc_out);
    if (*catenoid || *profile) return cmd_catenoid(cat_o);
    return kExitError;
}
