// Batch front end: parse a job config, run the solve, write field grids,
// densities and diagnostics.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vtbem/jobs.hpp"

int main(int argc, char** argv) {
    CLI::App app{"2D Nystrom Helmholtz solver with visco-thermal boundary conditions"};
    std::string config_path, output_dir = ".";
    double tol = 1e-12;
    int threads = 1;
    bool dump_i2i = false;
    app.add_option("--config", config_path, "job config (JSON)")->required();
    app.add_option("--output-dir", output_dir, "directory for output artifacts");
    app.add_option("--tol", tol, "quadrature tolerance (default 1e-12)");
    app.add_option("--threads", threads, "assembly/evaluation threads");
    app.add_flag("--dump-i2i", dump_i2i, "write impedance-to-impedance map caches");
    CLI11_PARSE(app, argc, argv);

    // VTBEM_SEED is reserved; the solver is fully deterministic.

    std::ifstream f(config_path);
    if (!f) {
        std::cerr << "error: cannot open config " << config_path << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << f.rdbuf();

    try {
        vtbem::JobConfig cfg = vtbem::parse_config(ss.str());
        vtbem::JobOptions opt;
        opt.output_dir = output_dir;
        opt.tol = tol;
        opt.threads = threads;
        opt.dump_i2i = dump_i2i;
        vtbem::JobSummary sum = vtbem::run_job(cfg, opt);
        std::cout << "unknowns: " << sum.unknowns << "\n"
                  << "condition estimate: " << sum.cond_estimate << "\n"
                  << "wall time: " << sum.wall_seconds << " s\n";
        if (!sum.field_file.empty()) std::cout << "field: " << sum.field_file << "\n";
        std::cout << "diagnostics: " << sum.diagnostics_file << "\n";
        return 0;
    } catch (const vtbem::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case vtbem::Err::SchemaError:
            case vtbem::Err::UnknownKey: return 2;
            case vtbem::Err::GeometryViolation:
            case vtbem::Err::DegenerateCurve:
            case vtbem::Err::FinTooLong:
            case vtbem::Err::SourceInsideDomain:
            case vtbem::Err::InterfaceMismatch: return 3;
            default: return 4;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
