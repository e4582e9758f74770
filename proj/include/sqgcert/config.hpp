#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sqgcert/spectral.hpp"

namespace sqgcert {

enum class Command { min_i, e3, theta_a3, e6, gershgorin, defect, certify_all, regen_matrices };

const std::vector<std::string>& command_names();
Command parse_command(const std::string& s);

struct RunConfig {
    Command command = Command::certify_all;
    int n = 512;
    double abs_tol = 1e-5;
    double rel_tol = 1e-5;
    long budget = 500;  // pops per adaptive sub-integral
    int threads = 1;
    std::string out_dir = "out";
    std::string matrix_dir = "data";
    bool fast = false;
    bool reuse = false;
    int m = 0;  // 0 means both 3 and 6
    DefectMesh mesh;
    int quad_points = 6;  // regen-matrices
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string>& config_keys();

// Applies one key=value pair; throws ConfigError on unknown keys (listing the
// valid ones) and on malformed values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// key=value lines, '#' starts a comment. Starts from `base`.
RunConfig load_config(const std::string& path, RunConfig base = RunConfig());

// Meshes and rules used by --fast.
void apply_fast_mode(RunConfig& cfg);

// Checks the invariants the pipeline relies on.
void validate(const RunConfig& cfg);

ParameterSet to_parameters(const RunConfig& cfg);

}  // namespace sqgcert
