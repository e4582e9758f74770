#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "sqgcert/config.hpp"
#include "sqgcert/operators.hpp"
#include "sqgcert/spectral.hpp"
#include "sqgcert/verifier.hpp"

using namespace sqgcert;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<int> ms(const RunConfig& cfg) {
    if (cfg.m == 0) return {3, 6};
    return {cfg.m};
}

std::function<void(int, int)> progress(const std::string& label) {
    return [label](int done, int total) {
        if (done == total || done % std::max(1, total / 20) == 0)
            std::fprintf(stderr, "%s %d/%d\n", label.c_str(), done, total);
    };
}

int run_sweep(const RunConfig& cfg, Quantity q) {
    SweepOptions opts{cfg.threads, progress(quantity_name(q))};
    const auto t0 = Clock::now();
    const GridEnclosures g = eval_error_vector(OperatorQuantity::make(q), cfg.n, to_parameters(cfg), opts);
    const double secs = since(t0);
    const std::string path = sweep_file(cfg.out_dir, q, cfg.n);
    write_report(path, g);
    std::printf("%s N=%d written to %s\n", quantity_name(q), cfg.n, path.c_str());
    std::printf("runtime %.1f s (%.3f s per cell), pops %ld, budget hits %d\n", secs, secs / cfg.n, g.pops,
                g.budget_hits);
    if (g.any_flagged()) {
        int bad = 0;
        for (Flag f : g.flags) bad += f == Flag::failed;
        std::printf("FLAGGED: %d cells failed\n", bad);
        return 1;
    }
    if (q == Quantity::ItildeMin) {
        const GridMinimum mn = grid_min(g);
        std::printf("min Itilde >= %.10g (cell %d, enclosure %s)\n", mn.value.lo(), mn.cell,
                    to_string(mn.value).c_str());
        return 0;
    }
    const Interval n = grid_l2_norm(g);
    std::printf("L2 norm %s\n", to_string(n).c_str());
    if (q != Quantity::ThetaA3) {
        try {
            std::printf("|<., B_sj>| %s\n", to_string(grid_inner_Bsj(g)).c_str());
        } catch (const DomainError& e) {
            std::printf("|<., B_sj>| not available: %s\n", e.what());
        }
    }
    return 0;
}

int run_gershgorin(const RunConfig& cfg) {
    for (int m : ms(cfg)) {
        const ProjectionMatrix M = load_matrix(matrix_path(cfg.matrix_dir, m), m);
        const GershgorinBound G = gershgorin_min(M, 1);
        std::printf("T%d_fin fnv1a=%016llx  spectrum of the B_sj complement block >= %.10g (disk row %d)\n", m,
                    static_cast<unsigned long long>(M.checksum()), G.lower.lo(), G.disk);
        const std::string path = (std::filesystem::path(cfg.out_dir) / ("gershgorin_T" + std::to_string(m) + ".txt")).string();
        std::FILE* f = std::fopen(path.c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + path);
        std::fprintf(f, "m=%d lower %.17g %.17g disk %d\n", m, G.lower.lo(), G.lower.hi(), G.disk);
        std::fclose(f);
    }
    return 0;
}

int run_defect(const RunConfig& cfg) {
    int status = 0;
    for (int m : ms(cfg)) {
        const ProjectionMatrix M = load_matrix(matrix_path(cfg.matrix_dir, m), m);
        const auto t0 = Clock::now();
        const DefectResult D =
            op_norm_defect(M, cfg.mesh, Geometry(), SweepOptions{cfg.threads, progress("defect T" + std::to_string(m))});
        const double secs = since(t0);
        const std::string path = defect_file(cfg.out_dir, m);
        write_defect_report(path, m, cfg.mesh, D);
        std::printf("||T%d_S - T%d_fin|| <= %.10g  mesh %d,%d,%d  worst cell %d rho_t in %s\n", m, m, D.bound.hi(),
                    cfg.mesh.n1, cfg.mesh.n2, cfg.mesh.n3, D.worst_cell, to_string(D.worst_cell_rho_t).c_str());
        std::printf("runtime %.1f s, written to %s\n", secs, path.c_str());
        if (D.flagged) {
            std::printf("FLAGGED: %s\n", D.failure.c_str());
            status = 1;
        }
    }
    return status;
}

int run_regen(const RunConfig& cfg) {
    for (int m : ms(cfg)) {
        const auto t0 = Clock::now();
        const ProjectionMatrix R = regen_projection(m, cfg.quad_points);
        const double secs = since(t0);
        const std::string path = (std::filesystem::path(cfg.out_dir) / ("T" + std::to_string(m) + "_regen.txt")).string();
        std::FILE* f = std::fopen(path.c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + path);
        for (int i = 0; i < kBasisSize; ++i)
            for (int j = 0; j < kBasisSize; ++j)
                std::fprintf(f, "%.12f%c", R.entries[i][j].mid(), j + 1 == kBasisSize ? '\n' : ' ');
        std::fclose(f);
        std::printf("T%d regenerated with %d nodes per panel in %.1f s, written to %s\n", m, cfg.quad_points, secs,
                    path.c_str());
        try {
            const ProjectionMatrix M = load_matrix(matrix_path(cfg.matrix_dir, m), m);
            double worst = 0;
            int wi = 0, wj = 0;
            for (int i = 0; i < kBasisSize; ++i)
                for (int j = 0; j < kBasisSize; ++j) {
                    const double d = std::fabs(R.entries[i][j].mid() - M.entries[i][j].mid());
                    if (d > worst) worst = d, wi = i, wj = j;
                }
            std::printf("max |regen - shipped| = %.3e at [%d][%d]; [1][1] %.11f vs %.11f; [4][4] %.11f vs %.11f\n",
                        worst, wi, wj, R.entries[1][1].mid(), M.entries[1][1].mid(), R.entries[4][4].mid(),
                        M.entries[4][4].mid());
        } catch (const std::exception& e) {
            std::printf("no shipped matrix to compare: %s\n", e.what());
        }
    }
    return 0;
}

int run_certify(const RunConfig& cfg) {
    PipelineOptions p;
    p.N = cfg.n;
    p.ctx = to_parameters(cfg);
    p.mesh = cfg.mesh;
    p.matrix_dir = cfg.matrix_dir;
    p.out_dir = cfg.out_dir;
    p.threads = cfg.threads;
    p.reuse = cfg.reuse;
    p.log = [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); };
    const auto t0 = Clock::now();
    CertificateInputs in = gather_inputs(p);
    in.provenance["mode"] = cfg.fast ? "fast" : "full";
    CertificateReport r = compose_certificate(in);
    r.provenance["total_time"] = std::to_string(since(t0)) + "s";
    const std::string path = (std::filesystem::path(cfg.out_dir) / "certificate.txt").string();
    write_certificate(path, r);
    for (const auto& rec : r.records) std::printf("%s\n", format_record(rec).c_str());
    std::printf("global %s%s%s\n", r.global_pass ? "PASS" : "FAIL",
                r.first_failure.empty() ? "" : ", first failure: ", r.first_failure.c_str());
    std::printf("certificate written to %s\n", path.c_str());
    return r.global_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rigorous enclosures for the linearized operators and the certificate checker"};
    std::string command, config_path;
    app.add_option("command", command, "one of: " + [] {
        std::string s;
        for (const auto& c : command_names()) s += (s.empty() ? "" : ", ") + c;
        return s;
    }())->required()->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "key=value file; flags override it")->check(CLI::ExistingFile);

    // every flag is kept as text and applied through the same path as the
    // config file, after it
    std::map<std::string, std::string> raw;
    std::map<std::string, CLI::Option*> given;
    auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
        given[key] = app.add_option(flag, raw[key], help);
    };
    opt("--n", "n", "uniform grid size for the sweeps (default 512)");
    opt("--abs-tol", "abs_tol", "absolute tolerance (default 1e-5)");
    opt("--rel-tol", "rel_tol", "relative tolerance (default 1e-5)");
    opt("--budget", "budget", "pops per adaptive sub-integral (default 500)");
    opt("--threads", "threads", "worker threads (default 1)");
    opt("--out-dir", "out_dir", "output directory (default out)");
    opt("--matrix-dir", "matrix_dir", "directory holding T3_fin.txt and T6_fin.txt (default data)");
    opt("--m", "m", "3 or 6 for gershgorin, defect, regen-matrices (default both)");
    opt("--mesh", "mesh", "defect mesh n1,n2,n3 (default 512,8160,512)");
    opt("--quad-points", "quad_points", "Gauss nodes per panel in regen-matrices (default 6)");
    bool fast = false, reuse = false;
    auto* fast_opt = app.add_flag("--fast", fast, "order-0 rule, small defect mesh, small budget");
    auto* reuse_opt = app.add_flag("--reuse", reuse, "certify-all reads existing per-cell files from --out-dir");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        RunConfig file;
        if (!config_path.empty()) file = load_config(config_path);
        const bool want_fast = fast_opt->count() > 0 ? fast : file.fast;
        if (want_fast) apply_fast_mode(cfg);
        if (!config_path.empty()) cfg = load_config(config_path, cfg);
        for (const auto& [key, o] : given)
            if (o->count() > 0) apply_config_value(cfg, key, raw[key]);
        if (fast_opt->count() > 0) cfg.fast = fast;
        if (reuse_opt->count() > 0) cfg.reuse = reuse;
        cfg.command = parse_command(command);
        validate(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    }

    try {
        std::filesystem::create_directories(cfg.out_dir);
        const auto t0 = Clock::now();
        int status = 0;
        switch (cfg.command) {
            case Command::min_i: status = run_sweep(cfg, Quantity::ItildeMin); break;
            case Command::e3: status = run_sweep(cfg, Quantity::E3); break;
            case Command::theta_a3: status = run_sweep(cfg, Quantity::ThetaA3); break;
            case Command::e6: status = run_sweep(cfg, Quantity::E6); break;
            case Command::gershgorin: status = run_gershgorin(cfg); break;
            case Command::defect: status = run_defect(cfg); break;
            case Command::certify_all: status = run_certify(cfg); break;
            case Command::regen_matrices: status = run_regen(cfg); break;
        }
        std::fprintf(stderr, "total %.1f s\n", since(t0));
        return status;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
