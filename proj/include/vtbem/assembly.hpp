#ifndef VTBEM_ASSEMBLY_HPP
#define VTBEM_ASSEMBLY_HPP

#include <vector>

#include "vtbem/linalg.hpp"
#include "vtbem/params.hpp"
#include "vtbem/quadrature.hpp"
#include "vtbem/surface_greens.hpp"

namespace vtbem {

// eq:modf as printed carries no c1 on the boundary-corner data terms, while
// the substitution chain produces one; both variants are available and the
// manufactured-solution test arbitrates (C1Scaled wins, see tests)
enum class HTermScaling { AsPrinted, C1Scaled };

struct Problem {
    PhysicalParams params;
    std::vector<BoundaryComponent> stars;
    std::vector<BoundaryComponent> circs;
    std::vector<Complex> robin; // Robin coefficient per circ component
    AssembleOptions quad;
    HTermScaling h_scaling = HTermScaling::C1Scaled;

    int star_nodes(int i) const { return stars[size_t(i)].nnodes(); }
    int circ_nodes(int j) const { return circs[size_t(j)].nnodes(); }
};

// Dyadically refine every corner end and attach the parity fins; fin_length
// <= 0 uses the pre-refinement corner panel length (the refined region).
// circ_depth < 0 refines circ components to the same depth as the stars.
void prepare_case2_geometry(Problem& prob, int corner_depth = 7, double fin_length = 0.0,
                            int circ_depth = -1);

struct BoundaryData {
    std::vector<Vec> f;                      // per star component
    std::vector<Vec> g;                      // per circ component
    std::vector<Complex> h_plus, h_minus;    // per star component (open ends)
};

BoundaryData zero_data(const Problem& prob);

struct CompRef {
    CompKind kind;
    int idx; // within its kind
};

struct BlockSystem {
    const Problem* prob = nullptr;
    std::vector<CompRef> order;   // unknown order: sigma_1, rho_1, sigma_2, rho_2, ...
    std::vector<int> offset, size;
    int n = 0;
    std::vector<std::vector<Mat>> blocks; // [target][source] in `order` indexing
    // u-trace matrices on circ targets, [circ j][source place]; the Robin
    // coefficient multiplies exactly these, so retargeting a is cheap
    std::vector<std::vector<Mat>> circ_traces;
    std::vector<Complex> robin_used; // per circ, the a baked into `blocks`
    Mat M;

    int place(CompKind kind, int idx) const;
    void assemble_full();
};

// copy of sys with the circ-row blocks retargeted to new Robin coefficients
BlockSystem with_robin(const BlockSystem& sys, const std::vector<Complex>& new_robin);

// closed smooth star, visco-thermal condition only
BlockSystem build_case1(const Problem& prob, int star_idx = 0);
// mixed system with fins (requires prepare_case2_geometry)
BlockSystem build_blocks_case2(const Problem& prob);

Vec build_rhs(const BlockSystem& sys, const BoundaryData& data,
              const std::vector<SurfaceGreens>& sgs);

// surface Green's structures for every star (order matches prob.stars)
std::vector<SurfaceGreens> star_greens(const Problem& prob);

struct SchurReduced {
    Mat Mo;                 // reduced operator on stacked circ nodes
    std::vector<Mat> B;     // sigma_i = B[i] * rho
    std::vector<int> circ_offset;
    double star_block_cond = 0.0;
};

// requires f == 0 and h == 0 on all stars
SchurReduced schur_reduce(const BlockSystem& sys, const BoundaryData& data);

struct FieldSolution;

// split a solution vector of the full system into per-component densities
std::vector<Vec> split_solution(const BlockSystem& sys, const Vec& x);

// row scaling used for conditioning comparisons: star rows by -2/c1, circ by 2
Mat row_scaled(const BlockSystem& sys);

} // namespace vtbem

#endif
