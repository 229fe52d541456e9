#ifndef VTBEM_FIELDEVAL_HPP
#define VTBEM_FIELDEVAL_HPP

#include "vtbem/assembly.hpp"

namespace vtbem {

struct FieldSolution {
    std::vector<Vec2> targets;
    Vec u;
    std::vector<char> too_close; // inside the accuracy guarantee zone
};

// Acoustic pressure from solved densities via the fin-based representation
//   u = sum_i (D~_i - S~_i / c1) sigma_i + sum_j S~_j rho_j
// evaluated by the native panel rule. Targets closer than one smallest-panel
// length to the boundary are flagged, not rejected.
FieldSolution eval_field(const Problem& prob, const std::vector<Vec>& sigma,
                         const std::vector<Vec>& rho, const std::vector<Vec2>& targets,
                         int nthreads = 1);

} // namespace vtbem

#endif
