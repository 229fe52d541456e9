#ifndef VTBEM_SOLVER_DD_HPP
#define VTBEM_SOLVER_DD_HPP

#include <string>

#include "vtbem/assembly.hpp"

namespace vtbem {

struct SolveResult {
    Vec x;
    double cond1 = 0.0;
    double backward_error = 0.0;
};

// LU solve of the full block system with diagnostics
SolveResult dense_solve(const BlockSystem& sys, const Vec& rhs);

struct I2IMap {
    Mat plus_to_minus;  // M_r^- (M_r^+)^{-1} on circ node data
    Mat minus_to_plus;  // M_r^+ (M_r^-)^{-1}
    double cond_plus = 0.0, cond_minus = 0.0;
};

// A subdomain: its own case II problem plus the list of circ components that
// act as artificial interfaces. Incoming impedance data uses a = +ik on the
// interfaces (region normals point outward); physical circ components keep
// their configured Robin coefficient in both +/- variants.
struct Region {
    Problem prob;
    std::vector<int> interface_circs;

    bool is_interface(int circ_idx) const;
};

// Assembled operators of one region, reused across the coupling solve.
struct RegionOps {
    BlockSystem sys_plus, sys_minus;
    std::vector<SurfaceGreens> sgs;
    SchurReduced red_plus, red_minus;
    I2IMap i2i;
    std::vector<int> circ_offset; // node offsets inside the stacked circ vector
    int ncirc_nodes = 0;
};

RegionOps build_region_ops(Region& region);
I2IMap build_i2i(Region& region); // convenience wrapper

struct InterfacePairing {
    int region_a = 0, circ_a = 0;
    int region_b = 0, circ_b = 0;
};

struct DDResult {
    // per region: densities in the region's unknown order
    std::vector<std::vector<Vec>> densities;
    // recovered incoming impedance data per region, stacked over that
    // region's interface components in interface_circs order
    std::vector<Vec> incoming;
    std::vector<double> region_cond;
    double coupling_cond = 0.0;
};

// Couple subdomains by matching incoming and outgoing impedance data
// across each interface; data is per region.
DDResult couple_regions(const std::vector<Region>& regions, std::vector<RegionOps>& ops,
                        const std::vector<InterfacePairing>& interfaces,
                        const std::vector<BoundaryData>& data);

// binary cache of an I2I map (little-endian, 32-byte header)
void write_i2i(const std::string& path, const Mat& map, int direction_tag);
Mat read_i2i(const std::string& path, int* direction_tag = nullptr);

} // namespace vtbem

#endif
