#include "vtbem/solver_dd.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace vtbem {

SolveResult dense_solve(const BlockSystem& sys, const Vec& rhs) {
    DenseSolver solver(sys.M);
    SolveResult res;
    res.x = solver.solve(rhs);
    res.cond1 = solver.cond1();
    res.backward_error = solver.backward_error(res.x, rhs);
    return res;
}

bool Region::is_interface(int circ_idx) const {
    return std::find(interface_circs.begin(), interface_circs.end(), circ_idx) != interface_circs.end();
}

RegionOps build_region_ops(Region& region) {
    Problem& prob = region.prob;
    double k = prob.params.k;
    RegionOps ops;
    ops.sgs = star_greens(prob);

    // + variant: a = +ik on interfaces; physical circs keep their coefficient.
    // The region's problem is left holding the + coefficients (its canonical
    // solve); the - system is derived by retargeting the trace blocks.
    if (prob.robin.empty()) prob.robin.assign(prob.circs.size(), prob.params.robin_a);
    std::vector<Complex> robin_minus = prob.robin;
    for (int j : region.interface_circs) {
        prob.robin[size_t(j)] = Complex(0.0, k);
        robin_minus[size_t(j)] = Complex(0.0, -k);
    }
    ops.sys_plus = build_blocks_case2(prob);
    ops.sys_minus = with_robin(ops.sys_plus, robin_minus);

    BoundaryData zero = zero_data(prob);
    ops.red_plus = schur_reduce(ops.sys_plus, zero);
    ops.red_minus = schur_reduce(ops.sys_minus, zero);

    DenseSolver plus(ops.red_plus.Mo), minus(ops.red_minus.Mo);
    ops.i2i.cond_plus = plus.cond1();
    ops.i2i.cond_minus = minus.cond1();
    if (!(ops.i2i.cond_plus < 1e14))
        fail(Err::SingularReducedSystem, "reduced incoming-impedance system is singular");
    if (!(ops.i2i.cond_minus < 1e14))
        fail(Err::SingularReducedSystem, "reduced outgoing-impedance system is singular");
    int n = int(ops.red_plus.Mo.rows());
    Mat eye = Mat::Identity(n, n);
    ops.i2i.plus_to_minus = ops.red_minus.Mo * plus.solve(eye);
    ops.i2i.minus_to_plus = ops.red_plus.Mo * minus.solve(eye);

    ops.circ_offset = ops.red_plus.circ_offset;
    ops.ncirc_nodes = n;
    return ops;
}

I2IMap build_i2i(Region& region) { return build_region_ops(region).i2i; }

namespace {

// node permutation matching two coincident interface components (opposite
// orientations); entry [i] is the b-node index for a-node i
std::vector<int> match_interface_nodes(const BoundaryComponent& ca, const BoundaryComponent& cb) {
    std::vector<Vec2> xa, xb;
    for (const auto& p : ca.panels)
        for (const auto& v : p.x) xa.push_back(v);
    for (const auto& p : cb.panels)
        for (const auto& v : p.x) xb.push_back(v);
    if (xa.size() != xb.size()) fail(Err::InterfaceMismatch, "interface node counts differ");
    std::vector<int> perm(xa.size(), -1);
    for (size_t i = 0; i < xa.size(); ++i) {
        double best = 1e300;
        int jb = -1;
        for (size_t j = 0; j < xb.size(); ++j) {
            double d = norm(xa[i] - xb[j]);
            if (d < best) {
                best = d;
                jb = int(j);
            }
        }
        if (best > 1e-12) fail(Err::InterfaceMismatch, "interface nodes do not coincide");
        perm[i] = jb;
    }
    return perm;
}

} // namespace

DDResult couple_regions(const std::vector<Region>& regions, std::vector<RegionOps>& ops,
                        const std::vector<InterfacePairing>& interfaces,
                        const std::vector<BoundaryData>& data) {
    size_t nr = regions.size();
    if (ops.size() != nr || data.size() != nr)
        fail(Err::DomainError, "regions, operators and data must align");

    // unknowns: incoming impedance data on every interface component, per region
    struct Slot {
        int region, circ, offset, size;
    };
    std::vector<Slot> slots;
    std::vector<std::vector<int>> slot_of(nr); // per region, per circ index -> slot id or -1
    int ntot = 0;
    for (size_t r = 0; r < nr; ++r) {
        slot_of[r].assign(regions[r].prob.circs.size(), -1);
        for (int j : regions[r].interface_circs) {
            slot_of[r][size_t(j)] = int(slots.size());
            int sz = regions[r].prob.circs[size_t(j)].nnodes();
            slots.push_back({int(r), j, ntot, sz});
            ntot += sz;
        }
    }

    // homogeneous interface-to-interface response of each region:
    // out = R_int I2I_{+-} E lambda, plus the particular outgoing data
    std::vector<Mat> resp(nr);
    std::vector<Vec> part_out(nr);
    std::vector<Vec> part_rhs(nr);
    DDResult result;
    result.densities.resize(nr);
    result.region_cond.resize(nr, 0.0);

    for (size_t r = 0; r < nr; ++r) {
        const auto& reg = regions[r];
        const auto& op = ops[r];
        // particular solve: physical data only, zero incoming on interfaces
        BoundaryData pd = data[r];
        for (int j : reg.interface_circs) pd.g[size_t(j)] = Vec::Zero(reg.prob.circs[size_t(j)].nnodes());
        Vec rhs = build_rhs(op.sys_plus, pd, op.sgs);
        part_rhs[r] = rhs;
        DenseSolver full(op.sys_plus.M);
        result.region_cond[r] = full.cond1();
        Vec xp = full.solve(rhs);
        // outgoing data of the particular solution: circ rows of the minus system
        Vec mall = op.sys_minus.M * xp;
        Vec out_circ(op.ncirc_nodes);
        for (size_t j = 0; j < reg.prob.circs.size(); ++j) {
            int pj = op.sys_plus.place(CompKind::Circ, int(j));
            out_circ.segment(op.circ_offset[j], op.sys_plus.size[size_t(pj)]) =
                mall.segment(op.sys_plus.offset[size_t(pj)], op.sys_plus.size[size_t(pj)]);
        }
        part_out[r] = out_circ;
        resp[r] = op.i2i.plus_to_minus;
    }

    // coupling system: for interface (A,B): lambda_A + P_ab (out_B) = 0 and
    // lambda_B + P_ba (out_A) = 0, where out_R = R_int [resp_R E lambda_R + part_R]
    Mat C = Mat::Identity(ntot, ntot);
    Vec crhs = Vec::Zero(ntot);
    for (const auto& iface : interfaces) {
        const auto& ra = regions[size_t(iface.region_a)];
        const auto& rb = regions[size_t(iface.region_b)];
        auto perm = match_interface_nodes(ra.prob.circs[size_t(iface.circ_a)],
                                          rb.prob.circs[size_t(iface.circ_b)]);
        int sa = slot_of[size_t(iface.region_a)][size_t(iface.circ_a)];
        int sb = slot_of[size_t(iface.region_b)][size_t(iface.circ_b)];
        if (sa < 0 || sb < 0) fail(Err::InterfaceMismatch, "pairing references a non-interface component");
        const Slot& A = slots[size_t(sa)];
        const Slot& B = slots[size_t(sb)];

        auto couple_rows = [&](const Slot& to, const Slot& from, const std::vector<int>& p) {
            // rows of `to`: lambda_to + P [resp_from E lambda_from + part_from]|circ_from = 0
            const auto& opf = ops[size_t(from.region)];
            int cf0 = opf.circ_offset[size_t(from.circ)];
            for (int i = 0; i < to.size; ++i) {
                int row = to.offset + i;
                int from_node = cf0 + p[size_t(i)];
                // homogeneous part: resp row applied to every interface slot of `from.region`
                for (int j : regions[size_t(from.region)].interface_circs) {
                    int sj = slot_of[size_t(from.region)][size_t(j)];
                    const Slot& S = slots[size_t(sj)];
                    int cj0 = opf.circ_offset[size_t(j)];
                    for (int c = 0; c < S.size; ++c)
                        C(row, S.offset + c) += resp[size_t(from.region)](from_node, cj0 + c);
                }
                crhs(row) -= part_out[size_t(from.region)](from_node);
            }
        };
        couple_rows(A, B, perm);
        std::vector<int> inv(perm.size());
        for (size_t i = 0; i < perm.size(); ++i) inv[size_t(perm[i])] = int(i);
        couple_rows(B, A, inv);
    }

    // solve in the sqrt-weight basis: conditioning is then measured in the
    // discrete L2 norm of the interface trace rather than node values
    Eigen::VectorXd wts(ntot);
    for (const auto& sl : slots) {
        int i = 0;
        for (const auto& p : regions[size_t(sl.region)].prob.circs[size_t(sl.circ)].panels)
            for (double w : p.w) wts(sl.offset + i++) = std::sqrt(w);
    }
    Mat Cw = wts.cast<Complex>().asDiagonal() * C * wts.cwiseInverse().cast<Complex>().asDiagonal();
    DenseSolver csolver(Cw);
    result.coupling_cond = csolver.cond1();
    if (result.coupling_cond > 1e6)
        fail(Err::IllConditionedCoupling, "interface coupling system is ill conditioned");
    Vec lambda = csolver.solve(Vec(wts.cast<Complex>().asDiagonal() * crhs));
    lambda = wts.cwiseInverse().cast<Complex>().asDiagonal() * lambda;

    // final per-region solves with the recovered incoming data
    result.incoming.resize(nr);
    for (size_t r = 0; r < nr; ++r) {
        const auto& reg = regions[r];
        const auto& op = ops[r];
        BoundaryData fd = data[r];
        int tot = 0;
        for (int j : reg.interface_circs) tot += reg.prob.circs[size_t(j)].nnodes();
        result.incoming[r].resize(tot);
        int at = 0;
        for (int j : reg.interface_circs) {
            int sj = slot_of[r][size_t(j)];
            const Slot& S = slots[size_t(sj)];
            fd.g[size_t(j)] = lambda.segment(S.offset, S.size);
            result.incoming[r].segment(at, S.size) = fd.g[size_t(j)];
            at += S.size;
        }
        Vec rhs = build_rhs(op.sys_plus, fd, op.sgs);
        DenseSolver full(op.sys_plus.M);
        Vec x = full.solve(rhs);
        result.densities[r] = split_solution(op.sys_plus, x);
    }
    return result;
}

void write_i2i(const std::string& path, const Mat& map, int direction_tag) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Err::IoError, "cannot open " + path + " for writing");
    char header[32] = {};
    std::memcpy(header, "VTBEMI2I", 8);
    std::uint32_t rows = std::uint32_t(map.rows()), cols = std::uint32_t(map.cols());
    std::uint32_t dir = std::uint32_t(direction_tag);
    std::memcpy(header + 8, &rows, 4);
    std::memcpy(header + 12, &cols, 4);
    std::memcpy(header + 16, &dir, 4);
    f.write(header, 32);
    for (int i = 0; i < map.rows(); ++i)
        for (int j = 0; j < map.cols(); ++j) {
            double re = map(i, j).real(), im = map(i, j).imag();
            f.write(reinterpret_cast<const char*>(&re), 8);
            f.write(reinterpret_cast<const char*>(&im), 8);
        }
    if (!f) fail(Err::IoError, "failed writing " + path);
}

Mat read_i2i(const std::string& path, int* direction_tag) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Err::IoError, "cannot open " + path);
    char header[32];
    f.read(header, 32);
    if (!f || std::memcmp(header, "VTBEMI2I", 8) != 0) fail(Err::IoError, "bad I2I file header");
    std::uint32_t rows, cols, dir;
    std::memcpy(&rows, header + 8, 4);
    std::memcpy(&cols, header + 12, 4);
    std::memcpy(&dir, header + 16, 4);
    if (direction_tag) *direction_tag = int(dir);
    Mat out_map(static_cast<int>(rows), static_cast<int>(cols));
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j) {
            double re, im;
            f.read(reinterpret_cast<char*>(&re), 8);
            f.read(reinterpret_cast<char*>(&im), 8);
            out_map(int(i), int(j)) = Complex(re, im);
        }
    if (!f) fail(Err::IoError, "truncated I2I file");
    return out_map;
}

} // namespace vtbem
