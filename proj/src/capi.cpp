#include "mlq/mlq.h"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "mlq/closing.hpp"
#include "mlq/pipeline.hpp"

struct mlq_config {
    mlq::RunConfig cfg;
};

struct mlq_closing {
    mlq::ClosingParams params;
};

namespace {

thread_local std::string g_last_error;

mlq_status fail(mlq_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
mlq_status guard(F&& f) {
    try {
        f();
        g_last_error.clear();
        return MLQ_OK;
    } catch (const mlq::Error& e) {
        return fail(static_cast<mlq_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return fail(MLQ_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MLQ_ERR_INTERNAL, e.what());
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void need(const void* p, const char* what) {
    if (!p) throw mlq::Error(mlq::Err::InvalidInput, std::string(what) + " is null");
}

std::string* output_slot(mlq::Outputs& o, const char* key) {
    const std::string k = key;
    if (k == "mesh_csv") return &o.mesh_csv;
    if (k == "mesh_json") return &o.mesh_json;
    if (k == "profile_svg") return &o.profile_svg;
    if (k == "report_json") return &o.report_json;
    if (k == "holes_json") return &o.holes_json;
    throw mlq::Error(mlq::Err::InvalidInput, "unknown output key '" + k + "'");
}

}  // namespace

extern "C" {

const char* mlq_version(void) { return "0.1.0"; }

const char* mlq_status_name(mlq_status s) {
    if (s == MLQ_OK) return "Ok";
    if (s == MLQ_ERR_INTERNAL) return "Internal";
    if (s >= MLQ_ERR_INVALID_INPUT && s <= MLQ_ERR_IO) return mlq::err_name(static_cast<mlq::Err>(static_cast<int>(s)));
    return "Unknown";
}

const char* mlq_last_error(void) { return g_last_error.c_str(); }

void mlq_string_free(char* s) { std::free(s); }

mlq_status mlq_config_parse(const char* json, mlq_config** out) {
    return guard([&] {
        need(json, "json");
        need(out, "out");
        *out = nullptr;
        auto* c = new mlq_config{mlq::parse_config(json)};
        *out = c;
    });
}

void mlq_config_free(mlq_config* cfg) { delete cfg; }

mlq_status mlq_config_set_steps(mlq_config* cfg, int sx, int sy) {
    return guard([&] {
        need(cfg, "cfg");
        mlq::RunConfig c = cfg->cfg;
        c.grid.nx = sx + 1;
        c.grid.ny = sy + 1;
        mlq::validate(c);
        cfg->cfg = c;
    });
}

mlq_status mlq_config_set_lambdas(mlq_config* cfg, const double* angles, size_t count) {
    return guard([&] {
        need(cfg, "cfg");
        if (count) need(angles, "angles");
        mlq::RunConfig c = cfg->cfg;
        c.lambdas.assign(angles, angles + count);
        mlq::validate(c);
        cfg->cfg = c;
    });
}

mlq_status mlq_config_set_negative_control(mlq_config* cfg, int enabled) {
    return guard([&] {
        need(cfg, "cfg");
        cfg->cfg.negative_control = enabled != 0;
    });
}

mlq_status mlq_config_set_output(mlq_config* cfg, const char* key, const char* path) {
    return guard([&] {
        need(cfg, "cfg");
        need(key, "key");
        *output_slot(cfg->cfg.outputs, key) = path ? path : "";
    });
}

mlq_status mlq_config_get_output(const mlq_config* cfg, const char* key, char** path) {
    return guard([&] {
        need(cfg, "cfg");
        need(key, "key");
        need(path, "path");
        mlq::Outputs o = cfg->cfg.outputs;
        *path = dup(*output_slot(o, key));
    });
}

mlq_status mlq_build(const mlq_config* cfg, char** mesh_csv, char** mesh_json, char** holes_json, size_t* rows,
                     size_t* holes) {
    return guard([&] {
        need(cfg, "cfg");
        mlq::BuildResult r = mlq::run_build(cfg->cfg);
        if (mesh_csv) *mesh_csv = dup(r.mesh_csv);
        if (mesh_json) *mesh_json = dup(r.mesh_json);
        if (holes_json) *holes_json = r.holes ? dup(r.holes_json) : nullptr;
        if (rows) *rows = r.rows;
        if (holes) *holes = r.holes;
    });
}

mlq_status mlq_verify(const mlq_config* cfg, char** report_json, int* pass) {
    return guard([&] {
        need(cfg, "cfg");
        mlq::ResidualReport r = mlq::run_verify(cfg->cfg);
        if (report_json) *report_json = dup(r.to_json() + "\n");
        if (pass) *pass = r.pass() ? 1 : 0;
    });
}

mlq_status mlq_associate(const mlq_config* cfg, char** json, int* pass) {
    return guard([&] {
        need(cfg, "cfg");
        mlq::AssociateResult r = mlq::run_associate(cfg->cfg);
        if (json) *json = dup(r.json);
        if (pass) *pass = r.pass ? 1 : 0;
    });
}

mlq_status mlq_closing_solve(int m, int n, double lambda0_arg, double a, int sign_c, mlq_closing** out) {
    return guard([&] {
        need(out, "out");
        *out = nullptr;
        if (!std::isfinite(lambda0_arg)) throw mlq::Error(mlq::Err::InvalidInput, "lambda0 angle must be finite");
        *out = new mlq_closing{mlq::solve_closing(m, n, std::polar(1.0, lambda0_arg), a, sign_c)};
    });
}

void mlq_closing_free(mlq_closing* p) { delete p; }

mlq_status mlq_closing_params(const mlq_closing* p, double* b, double* c, double* rm, double* rn) {
    return guard([&] {
        need(p, "closing");
        if (b) *b = p->params.b;
        if (c) *c = p->params.c;
        if (rm) *rm = p->params.residual_m;
        if (rn) *rn = p->params.residual_n;
    });
}

mlq_status mlq_closing_interval(const mlq_closing* p, double* lo, double* hi) {
    return guard([&] {
        need(p, "closing");
        if (lo) *lo = p->params.profile.lo();
        if (hi) *hi = p->params.profile.hi();
    });
}

namespace {
std::complex<double> which_lambda(const mlq_closing* p, int which) {
    if (which != 0 && which != 1) throw mlq::Error(mlq::Err::InvalidInput, "which must be 0 or 1");
    return which ? mlq::I * p->params.lambda0 : p->params.lambda0;
}
}  // namespace

mlq_status mlq_closing_monodromy(const mlq_closing* p, int which, int* cls, double* residual) {
    return guard([&] {
        need(p, "closing");
        mlq::Monodromy m = mlq::monodromy(p->params.potential(), which_lambda(p, which));
        if (cls) *cls = static_cast<int>(m.cls);
        if (residual) *residual = m.residual;
    });
}

mlq_status mlq_closing_mu(const mlq_closing* p, int which, double* mu) {
    return guard([&] {
        need(p, "closing");
        need(mu, "mu");
        *mu = mlq::diagonalize_su11(p->params.potential().A(which_lambda(p, which))).mu;
    });
}

mlq_status mlq_closing_metric(const mlq_closing* p, double x, double* metric) {
    return guard([&] {
        need(p, "closing");
        need(metric, "metric");
        *metric = mlq::catenoid_metric(p->params, x);
    });
}

mlq_status mlq_closing_profile(const mlq_closing* p, int x_samples, double y, char** csv, char** svg) {
    return guard([&] {
        need(p, "closing");
        auto curves = mlq::profile_curves(p->params, mlq::default_x_samples(p->params.profile, x_samples), y);
        char* c = csv ? dup(mlq::profile_csv(curves)) : nullptr;
        try {
            if (svg) *svg = dup(mlq::profile_svg(curves));
        } catch (...) {
            std::free(c);
            throw;
        }
        if (csv) *csv = c;
    });
}

mlq_status mlq_closing_rotation_residual(const mlq_closing* p, int x_samples, double y, double theta, double* r1,
                                         double* r2) {
    return guard([&] {
        need(p, "closing");
        auto [a, b] =
            mlq::rotation_law_residual(p->params, mlq::default_x_samples(p->params.profile, x_samples), y, theta);
        if (r1) *r1 = a;
        if (r2) *r2 = b;
    });
}

mlq_status mlq_closing_ends(const mlq_closing* p, double* left_slope, double* right_slope, int* consistent) {
    return guard([&] {
        need(p, "closing");
        mlq::EndDiagnostics d = mlq::end_diagnostics(p->params);
        if (left_slope) *left_slope = d.left_slope;
        if (right_slope) *right_slope = d.right_slope;
        if (consistent) *consistent = d.consistent_with_completeness ? 1 : 0;
    });
}

mlq_status mlq_closing_period(const mlq_closing* p, double x, double y, double* plus, double* minus) {
    return guard([&] {
        need(p, "closing");
        mlq::PeriodCheck c = mlq::period_check(p->params, {x, y});
        if (plus) *plus = c.plus;
        if (minus) *minus = c.minus;
    });
}

}  // extern "C"
