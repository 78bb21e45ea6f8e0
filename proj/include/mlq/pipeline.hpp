#pragma once
#include <map>
#include <string>
#include <vector>

#include "mlq/verify.hpp"

namespace mlq {

struct Outputs {
    std::string mesh_csv, mesh_json, profile_svg, report_json, holes_json;
};

struct RunConfig {
    Potential potential;
    int order = 16;
    int samples = 64;
    Grid grid;
    cplx basepoint = 0;
    std::vector<double> lambdas{0.0};  // angles
    Outputs outputs;
    // "fd", "h", "iwasawa", "ode"
    std::map<std::string, double> tolerances;
    bool explicit_frames = false;
    bool negative_control = false;

    double tol(const std::string& key, double fallback) const;
    std::vector<cplx> lambda_points() const;
};

// Throws Error(Config) with a readable message.
RunConfig parse_config(const std::string& json_text);
void validate(const RunConfig& c);
Potential parse_potential(const std::string& json_text, int* order = nullptr, int* samples = nullptr);

std::vector<std::string> mesh_columns();

struct BuildResult {
    std::string mesh_csv, mesh_json, holes_json;
    size_t rows = 0;
    size_t holes = 0;
    int exit_code() const { return holes ? 2 : 0; }
};
BuildResult run_build(const RunConfig& c);

ResidualReport run_verify(const RunConfig& c);

// JSON: per-lambda e^u and lambda^2 alphahat / alphahat(1) at the grid centre plus the
// associated-family checks
struct AssociateResult {
    std::string json;
    bool pass = false;
};
AssociateResult run_associate(const RunConfig& c);

// "%.16e"
std::string fmt17(double v);

}  // namespace mlq
