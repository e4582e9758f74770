#include "sqgcert/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sqgcert {

namespace {

const std::vector<std::pair<std::string, Command>>& commands() {
    static const std::vector<std::pair<std::string, Command>> v = {
        {"min-i", Command::min_i},           {"e3", Command::e3},
        {"theta-a3", Command::theta_a3},     {"e6", Command::e6},
        {"gershgorin", Command::gershgorin}, {"defect", Command::defect},
        {"certify-all", Command::certify_all}, {"regen-matrices", Command::regen_matrices}};
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

long to_long(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw ConfigError(key + ": not an integer: " + v);
    return x;
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') throw ConfigError(key + ": not a number: " + v);
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": not a boolean: " + v);
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> v = [] {
        std::vector<std::string> out;
        for (const auto& [name, c] : commands()) out.push_back(name);
        return out;
    }();
    return v;
}

Command parse_command(const std::string& s) {
    for (const auto& [name, c] : commands())
        if (name == s) return c;
    throw ConfigError("unknown command " + s + " (valid: " + join(command_names()) + ")");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> v = {"abs_tol", "budget", "fast",    "m",           "matrix_dir", "mesh",
                                               "n",       "out_dir", "quad_points", "rel_tol", "reuse",      "threads"};
    return v;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "n") cfg.n = static_cast<int>(to_long(key, value));
    else if (key == "abs_tol") cfg.abs_tol = to_double(key, value);
    else if (key == "rel_tol") cfg.rel_tol = to_double(key, value);
    else if (key == "budget") cfg.budget = to_long(key, value);
    else if (key == "threads") cfg.threads = static_cast<int>(to_long(key, value));
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "matrix_dir") cfg.matrix_dir = value;
    else if (key == "fast") cfg.fast = to_bool(key, value);
    else if (key == "reuse") cfg.reuse = to_bool(key, value);
    else if (key == "m") cfg.m = static_cast<int>(to_long(key, value));
    else if (key == "quad_points") cfg.quad_points = static_cast<int>(to_long(key, value));
    else if (key == "mesh") {
        DefectMesh d;
        char c1 = 0, c2 = 0;
        std::istringstream is(value);
        if (!(is >> d.n1 >> c1 >> d.n2 >> c2 >> d.n3) || c1 != ',' || c2 != ',' || !is.eof())
            throw ConfigError("mesh: expected n1,n2,n3, got " + value);
        cfg.mesh = d;
    } else {
        throw ConfigError("unknown key " + key + " (valid keys: " + join(config_keys()) + ")");
    }
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

void apply_fast_mode(RunConfig& cfg) {
    cfg.mesh = DefectMesh{16, 64, 16};
    cfg.budget = std::min(cfg.budget, 50L);
}

void validate(const RunConfig& cfg) {
    if (cfg.n < 2 || cfg.n % 2 != 0) throw ConfigError("n must be even and at least 2");
    if (!(cfg.abs_tol > 0) || !(cfg.rel_tol > 0)) throw ConfigError("tolerances must be positive");
    if (cfg.budget < 1) throw ConfigError("budget must be positive");
    if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
    if (cfg.m != 0 && cfg.m != 3 && cfg.m != 6) throw ConfigError("m must be 3 or 6");
    if (cfg.mesh.n1 < 1 || cfg.mesh.n2 < 1 || cfg.mesh.n3 < 1) throw ConfigError("mesh sizes must be positive");
    if (cfg.quad_points < 2) throw ConfigError("quad_points must be at least 2");
}

ParameterSet to_parameters(const RunConfig& cfg) {
    ParameterSet p;
    p.abs_tol = cfg.abs_tol;
    p.rel_tol = cfg.rel_tol;
    p.max_elements = cfg.budget;
    p.rule = cfg.fast ? Rule::order0 : Rule::gl2;
    return p;
}

}  // namespace sqgcert
