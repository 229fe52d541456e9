#ifndef VTBEM_ORACLES_HPP
#define VTBEM_ORACLES_HPP

#include <functional>

#include "vtbem/assembly.hpp"

namespace vtbem {

// u*(x) = G(x, x0) and the derived quantities used to manufacture data
Complex point_source(double k, const Vec2& x, const Vec2& x0);

// true when x0 lies outside the solution region bounded by the problem's
// (chained) boundary loops
bool source_admissible(const Problem& prob, Vec2 x0);

// boundary data generated from the exterior point source; throws
// SourceInsideDomain when x0 lies in the solution region (check_source lets
// callers that validated against the full geometry fill per-component data)
BoundaryData manufactured_data(const Problem& prob, Vec2 x0, bool check_source = true);

// modes indexed n = -N..N as a vector of length 2N+1
std::vector<Complex> disk_fourier_solve(double radius, const PhysicalParams& params,
                                        const std::vector<Complex>& fmodes);
Complex disk_fourier_eval(const std::vector<Complex>& amodes, double k, Vec2 x);

// parallel curve x - h n with the exact offset frame
struct OffsetCurve {
    const BoundaryComponent* base;
    double h = 0.0;
    std::vector<Vec2> x, nrm;
    std::vector<double> kappa, w, speed_scale; // speed_h = speed * (1 - h kappa)
};
OffsetCurve make_offset(const BoundaryComponent& comp, double h);

struct OffsetLimitReport {
    std::vector<double> lemma31_two_sided; // per h: sup |DG S_{+h} - DG S_{-h}| at probes
    double lemma31_rate = 0.0;             // empirical order in h
    double tpp_jump = 0.0;                 // extrapolated T'' half-jump / sigma
    double dpp_alpha = 0.0, dpp_beta = 0.0; // fitted coefficients of DG sigma and sigma
};

// Off-surface limit experiments on a closed component. sigma is given with
// its analytic surface Laplacian for the fit.
OffsetLimitReport offset_limit_test(const BoundaryComponent& comp, double k,
                                    const std::function<Complex(double)>& sigma_of_s,
                                    const std::function<Complex(double)>& lap_sigma_of_s,
                                    double h0, const AssembleOptions& opt = {});

struct CornerScanReport {
    std::vector<double> d, dprime_mag, stau_mag;
    double dprime_slope = 0.0, stau_slope = 0.0;
};

// sample the corner kernels along the diagonal approach s = t = d; with_fins
// adds the image contributions (even on the star side, odd on the circ side)
CornerScanReport corner_kernel_scan(const BoundaryComponent& star, int star_end,
                                    const BoundaryComponent& circ, int circ_end, double k,
                                    bool with_fins, int jmin = 2, int jmax = 12);

} // namespace vtbem

#endif
