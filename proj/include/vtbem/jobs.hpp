#ifndef VTBEM_JOBS_HPP
#define VTBEM_JOBS_HPP

#include "vtbem/config.hpp"

namespace vtbem {

struct JobOptions {
    std::string output_dir = ".";
    double tol = 1e-12;
    int threads = 1;
    bool dump_i2i = false;
};

struct JobSummary {
    int unknowns = 0;
    double cond_estimate = 0.0;
    double solve_residual = 0.0;
    double coupling_cond = 0.0;
    double wall_seconds = 0.0;
    std::string field_file, diagnostics_file;
};

// Parse, solve (case I / case II / domain decomposition), write the field
// grid, per-component densities and a diagnostics report.
JobSummary run_job(const JobConfig& cfg, const JobOptions& opt);

} // namespace vtbem

#endif
