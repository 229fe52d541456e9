#include "vtbem/assembly.hpp"

#include <cmath>

namespace vtbem {

namespace {

Vec node_kappa(const BoundaryComponent& comp) {
    Vec v(comp.nnodes());
    int i = 0;
    for (const auto& p : comp.panels)
        for (int q = 0; q < p.order; ++q, ++i) v(i) = p.kappa[size_t(q)];
    return v;
}

struct StarCtx {
    const BoundaryComponent* comp;
    std::vector<TargetPoint> targets;
    SurfaceGreens sg;
    Mat G;
    Vec colL, col0;                 // G(s_i, L), G(s_i, 0)
    Eigen::RowVectorXcd rowL, row0; // endpoint derivative functionals
    Vec kappa;
};

StarCtx make_star_ctx(const Problem& prob, int i) {
    const auto& comp = prob.stars[size_t(i)];
    StarCtx ctx{&comp, surface_targets(comp), make_surface_greens(comp, prob.params.kGamma), {}, {}, {}, {}, {}, {}};
    ctx.G = ctx.sg.matrix(prob.quad);
    if (!comp.closed) {
        ctx.colL = ctx.sg.end_column(1);
        ctx.col0 = ctx.sg.end_column(0);
        ctx.rowL = endpoint_deriv_row(comp, 1);
        ctx.row0 = endpoint_deriv_row(comp, 0);
    }
    ctx.kappa = node_kappa(comp);
    return ctx;
}

// apply F_i to a trace matrix: colL (rowL X) - col0 (row0 X)
Mat apply_F(const StarCtx& ctx, const Mat& X) {
    return ctx.colL * (ctx.rowL * X) - ctx.col0 * (ctx.row0 * X);
}

} // namespace

void prepare_case2_geometry(Problem& prob, int corner_depth, double fin_length, int circ_depth) {
    validate_case2(prob.stars, prob.circs);
    auto process = [&](BoundaryComponent& comp, int depth) {
        if (comp.closed) return;
        double r0 = fin_length > 0.0 ? fin_length : comp.panels.front().len;
        double r1 = fin_length > 0.0 ? fin_length : comp.panels.back().len;
        comp = dyadic_refine(comp, 0, depth);
        comp = dyadic_refine(comp, 1, depth);
        comp.fins.clear();
        comp.fins.push_back(build_fin(comp, 0, r0));
        comp.fins.push_back(build_fin(comp, 1, r1));
    };
    for (auto& s : prob.stars) process(s, corner_depth);
    for (auto& c : prob.circs) process(c, circ_depth >= 0 ? circ_depth : corner_depth);
    if (prob.robin.empty()) prob.robin.assign(prob.circs.size(), prob.params.robin_a);
}

BoundaryData zero_data(const Problem& prob) {
    BoundaryData d;
    for (const auto& s : prob.stars) d.f.push_back(Vec::Zero(s.nnodes()));
    for (const auto& c : prob.circs) d.g.push_back(Vec::Zero(c.nnodes()));
    d.h_plus.assign(prob.stars.size(), Complex(0.0));
    d.h_minus.assign(prob.stars.size(), Complex(0.0));
    return d;
}

int BlockSystem::place(CompKind kind, int idx) const {
    for (size_t p = 0; p < order.size(); ++p)
        if (order[p].kind == kind && order[p].idx == idx) return int(p);
    fail(Err::DomainError, "component not present in block system");
}

void BlockSystem::assemble_full() {
    M = Mat::Zero(n, n);
    for (size_t t = 0; t < order.size(); ++t)
        for (size_t s = 0; s < order.size(); ++s)
            M.block(offset[t], offset[s], size[t], size[s]) = blocks[t][s];
}

std::vector<SurfaceGreens> star_greens(const Problem& prob) {
    std::vector<SurfaceGreens> sgs;
    for (const auto& s : prob.stars) sgs.push_back(make_surface_greens(s, prob.params.kGamma));
    return sgs;
}

namespace {

std::vector<CompRef> interleaved_order(const Problem& prob) {
    std::vector<CompRef> order;
    size_t ns = prob.stars.size(), nc = prob.circs.size();
    for (size_t i = 0; i < std::max(ns, nc); ++i) {
        if (i < ns) order.push_back({CompKind::Star, int(i)});
        if (i < nc) order.push_back({CompKind::Circ, int(i)});
    }
    return order;
}

const BoundaryComponent& comp_of(const Problem& prob, CompRef r) {
    return r.kind == CompKind::Star ? prob.stars[size_t(r.idx)] : prob.circs[size_t(r.idx)];
}

} // namespace

BlockSystem build_case1(const Problem& prob, int star_idx) {
    const auto& comp = prob.stars[size_t(star_idx)];
    if (!comp.closed) fail(Err::GeometryViolation, "case I requires a closed star component");
    const auto& pp = prob.params;
    Complex c1 = pp.c1, c2 = pp.c2;
    double k = pp.k;

    StarCtx ctx = make_star_ctx(prob, star_idx);
    auto S = make_layer_kernel(LayerKind::S, k);
    auto D = make_layer_kernel(LayerKind::D, k);
    auto Sp = make_layer_kernel(LayerKind::Sprime, k);
    auto C = make_layer_kernel(LayerKind::CombinedDpSpp, k);

    Mat Sm = assemble_block(*S, {&comp}, false, ctx.targets, prob.quad).m;
    Mat Dm = assemble_block(*D, {&comp}, false, ctx.targets, prob.quad).m;
    Mat Spm = assemble_block(*Sp, {&comp}, false, ctx.targets, prob.quad).m;
    Mat Cm = assemble_block(*C, {&comp}, false, ctx.targets, prob.quad).m;

    int n = comp.nnodes();
    Mat K = -0.5 * c1 * Mat::Identity(n, n) + c1 * Dm - (1.0 / c1) * (ctx.G * Dm) + ctx.G * Cm +
            (k * k - c2 / c1) * (ctx.G * Sm) +
            ctx.G * ((ctx.kappa.array() - 1.0 / c1).matrix().asDiagonal() * Spm);

    BlockSystem sys;
    sys.prob = &prob;
    sys.order = {{CompKind::Star, star_idx}};
    sys.offset = {0};
    sys.size = {n};
    sys.n = n;
    sys.blocks = {{std::move(K)}};
    sys.assemble_full();
    return sys;
}

BlockSystem build_blocks_case2(const Problem& prob) {
    const auto& pp = prob.params;
    Complex c1 = pp.c1, c2 = pp.c2;
    double k = pp.k;
    size_t ns = prob.stars.size(), nc = prob.circs.size();
    if (prob.robin.size() != nc) fail(Err::DomainError, "robin coefficients not initialized");
    for (const auto& s : prob.stars)
        if (!s.closed && s.fins.empty()) fail(Err::MissingFins, "open star component without fins");
    for (const auto& c : prob.circs)
        if (!c.closed && c.fins.empty()) fail(Err::MissingFins, "open circ component without fins");
    for (const auto& s : prob.stars)
        for (const auto& f : s.fins)
            if (f.parity != 1.0) fail(Err::ParityMismatch, "star fins must extend evenly");
    for (const auto& c : prob.circs)
        for (const auto& f : c.fins)
            if (f.parity != -1.0) fail(Err::ParityMismatch, "circ fins must extend oddly");

    BlockSystem sys;
    sys.prob = &prob;
    sys.order = interleaved_order(prob);
    size_t np = sys.order.size();
    sys.offset.resize(np);
    sys.size.resize(np);
    int off = 0;
    for (size_t p = 0; p < np; ++p) {
        sys.offset[p] = off;
        sys.size[p] = comp_of(prob, sys.order[p]).nnodes();
        off += sys.size[p];
    }
    sys.n = off;
    sys.blocks.assign(np, std::vector<Mat>(np));

    auto S = make_layer_kernel(LayerKind::S, k);
    auto D = make_layer_kernel(LayerKind::D, k);
    auto Sp = make_layer_kernel(LayerKind::Sprime, k);
    auto Dp = make_layer_kernel(LayerKind::Dprime, k);
    auto C = make_layer_kernel(LayerKind::CombinedDpSpp, k);

    std::vector<StarCtx> sctx;
    for (size_t i = 0; i < ns; ++i) sctx.push_back(make_star_ctx(prob, int(i)));
    std::vector<std::vector<TargetPoint>> ctg;
    for (size_t j = 0; j < nc; ++j) ctg.push_back(surface_targets(prob.circs[j]));

    // rows with star targets
    for (size_t i = 0; i < ns; ++i) {
        const auto& ci = *sctx[i].comp;
        const auto& tg = sctx[i].targets;
        const Mat& G = sctx[i].G;
        int ni = ci.nnodes();
        int ti = sys.place(CompKind::Star, int(i));
        for (size_t j = 0; j < ns; ++j) {
            const auto& cj = prob.stars[j];
            Mat Sm = assemble_block(*S, {&cj}, true, tg, prob.quad).m;
            Mat Dm = assemble_block(*D, {&cj}, true, tg, prob.quad).m;
            Mat Spm = assemble_block(*Sp, {&cj}, true, tg, prob.quad).m;
            int sj = sys.place(CompKind::Star, int(j));
            if (j == i) {
                Mat Cm = assemble_block(*C, {&cj}, true, tg, prob.quad).m;
                Mat K = -0.5 * c1 * Mat::Identity(ni, ni) + c1 * Dm - (1.0 / c1) * (G * Dm) + G * Cm +
                        (k * k - c2 / c1) * (G * Sm) +
                        G * ((sctx[i].kappa.array() - 1.0 / c1).matrix().asDiagonal() * Spm);
                if (!ci.closed) K += apply_F(sctx[i], Sm);
                sys.blocks[size_t(ti)][size_t(sj)] = std::move(K);
            } else {
                Mat Dpm = assemble_block(*Dp, {&cj}, true, tg, prob.quad).m;
                Mat trace = Dm - (1.0 / c1) * Sm;
                Mat K = c1 * trace - (1.0 / c1) * (G * trace) + G * (Dpm - (1.0 / c1) * Spm);
                sys.blocks[size_t(ti)][size_t(sj)] = std::move(K);
            }
        }
        for (size_t j = 0; j < nc; ++j) {
            const auto& cj = prob.circs[j];
            Mat Sm = assemble_block(*S, {&cj}, true, tg, prob.quad).m;
            Mat Spm = assemble_block(*Sp, {&cj}, true, tg, prob.quad).m;
            Mat K = c1 * Sm - (1.0 / c1) * (G * Sm) + G * Spm;
            sys.blocks[size_t(ti)][size_t(sys.place(CompKind::Circ, int(j)))] = std::move(K);
        }
    }

    // rows with circ targets
    sys.circ_traces.assign(nc, std::vector<Mat>(np));
    sys.robin_used = prob.robin;
    for (size_t j = 0; j < nc; ++j) {
        const auto& cj = prob.circs[j];
        const auto& tg = ctg[j];
        Complex a = prob.robin[j];
        int nj = cj.nnodes();
        int tj = sys.place(CompKind::Circ, int(j));
        for (size_t i = 0; i < ns; ++i) {
            const auto& ci = prob.stars[i];
            Mat Sm = assemble_block(*S, {&ci}, true, tg, prob.quad).m;
            Mat Dm = assemble_block(*D, {&ci}, true, tg, prob.quad).m;
            Mat Spm = assemble_block(*Sp, {&ci}, true, tg, prob.quad).m;
            Mat Dpm = assemble_block(*Dp, {&ci}, true, tg, prob.quad).m;
            int si = sys.place(CompKind::Star, int(i));
            Mat trace = Dm - (1.0 / c1) * Sm;
            sys.blocks[size_t(tj)][size_t(si)] = a * trace + Dpm - (1.0 / c1) * Spm;
            sys.circ_traces[j][size_t(si)] = std::move(trace);
        }
        for (size_t l = 0; l < nc; ++l) {
            const auto& cl = prob.circs[l];
            Mat Sm = assemble_block(*S, {&cl}, true, tg, prob.quad).m;
            Mat Spm = assemble_block(*Sp, {&cl}, true, tg, prob.quad).m;
            Mat K = a * Sm + Spm;
            if (l == j) K += 0.5 * Mat::Identity(nj, nj);
            int sl = sys.place(CompKind::Circ, int(l));
            sys.blocks[size_t(tj)][size_t(sl)] = std::move(K);
            sys.circ_traces[j][size_t(sl)] = std::move(Sm);
        }
    }

    sys.assemble_full();
    return sys;
}

BlockSystem with_robin(const BlockSystem& sys, const std::vector<Complex>& new_robin) {
    if (sys.circ_traces.empty() && !new_robin.empty())
        fail(Err::DomainError, "block system carries no circ traces");
    BlockSystem out = sys;
    for (size_t j = 0; j < new_robin.size(); ++j) {
        Complex da = new_robin[j] - sys.robin_used[j];
        if (da == Complex(0.0)) continue;
        int tj = out.place(CompKind::Circ, int(j));
        for (size_t s = 0; s < out.order.size(); ++s)
            out.blocks[size_t(tj)][s] += da * sys.circ_traces[j][s];
    }
    out.robin_used = new_robin;
    out.assemble_full();
    return out;
}

Vec build_rhs(const BlockSystem& sys, const BoundaryData& data, const std::vector<SurfaceGreens>& sgs) {
    const Problem& prob = *sys.prob;
    if (data.f.size() != prob.stars.size() || data.g.size() != prob.circs.size())
        fail(Err::DomainError, "boundary data does not match the component lists");
    Vec rhs = Vec::Zero(sys.n);
    Complex cH = (prob.h_scaling == HTermScaling::C1Scaled) ? prob.params.c1 : Complex(1.0);
    for (size_t p = 0; p < sys.order.size(); ++p) {
        CompRef r = sys.order[p];
        if (r.kind == CompKind::Star) {
            const auto& sg = sgs[size_t(r.idx)];
            Vec ftil = sg.matrix(prob.quad) * data.f[size_t(r.idx)];
            if (!prob.stars[size_t(r.idx)].closed) {
                ftil -= cH * (sg.end_column(1) * data.h_plus[size_t(r.idx)] +
                              sg.end_column(0) * data.h_minus[size_t(r.idx)]);
            }
            rhs.segment(sys.offset[p], sys.size[p]) = ftil;
        } else {
            rhs.segment(sys.offset[p], sys.size[p]) = data.g[size_t(r.idx)];
        }
    }
    return rhs;
}

SchurReduced schur_reduce(const BlockSystem& sys, const BoundaryData& data) {
    const Problem& prob = *sys.prob;
    size_t ns = prob.stars.size(), nc = prob.circs.size();
    for (size_t i = 0; i < ns; ++i) {
        bool fz = data.f[i].cwiseAbs().maxCoeff() == 0.0;
        bool hz = data.h_plus[i] == Complex(0.0) && data.h_minus[i] == Complex(0.0);
        if (!fz || !hz) fail(Err::NonzeroStarData, "Schur reduction requires f = 0 and h = 0 on stars");
    }
    int nstar = 0, ncirc = 0;
    std::vector<int> soff(ns), coff(nc);
    for (size_t i = 0; i < ns; ++i) {
        soff[i] = nstar;
        nstar += prob.stars[i].nnodes();
    }
    for (size_t j = 0; j < nc; ++j) {
        coff[j] = ncirc;
        ncirc += prob.circs[j].nnodes();
    }

    Mat Kss(nstar, nstar), Ksc(ncirc, nstar), Kcs(nstar, ncirc), Kcc(ncirc, ncirc);
    for (size_t i = 0; i < ns; ++i) {
        int ti = sys.place(CompKind::Star, int(i));
        for (size_t j = 0; j < ns; ++j)
            Kss.block(soff[i], soff[j], prob.stars[i].nnodes(), prob.stars[j].nnodes()) =
                sys.blocks[size_t(ti)][size_t(sys.place(CompKind::Star, int(j)))];
        for (size_t j = 0; j < nc; ++j)
            Kcs.block(soff[i], coff[j], prob.stars[i].nnodes(), prob.circs[j].nnodes()) =
                sys.blocks[size_t(ti)][size_t(sys.place(CompKind::Circ, int(j)))];
    }
    for (size_t j = 0; j < nc; ++j) {
        int tj = sys.place(CompKind::Circ, int(j));
        for (size_t i = 0; i < ns; ++i)
            Ksc.block(coff[j], soff[i], prob.circs[j].nnodes(), prob.stars[i].nnodes()) =
                sys.blocks[size_t(tj)][size_t(sys.place(CompKind::Star, int(i)))];
        for (size_t l = 0; l < nc; ++l)
            Kcc.block(coff[j], coff[l], prob.circs[j].nnodes(), prob.circs[l].nnodes()) =
                sys.blocks[size_t(tj)][size_t(sys.place(CompKind::Circ, int(l)))];
    }

    DenseSolver star_solver(Kss);
    double cond = star_solver.cond1();
    if (cond > 1e12) fail(Err::SingularStarBlock, "star diagonal block is numerically singular");
    Mat Ball = -star_solver.solve(Kcs); // sigma = Ball * rho

    SchurReduced red;
    red.Mo = Kcc + Ksc * Ball;
    red.circ_offset = coff;
    red.star_block_cond = cond;
    for (size_t i = 0; i < ns; ++i) red.B.push_back(Ball.middleRows(soff[i], prob.stars[i].nnodes()));
    return red;
}

std::vector<Vec> split_solution(const BlockSystem& sys, const Vec& x) {
    std::vector<Vec> parts;
    for (size_t p = 0; p < sys.order.size(); ++p) parts.push_back(x.segment(sys.offset[p], sys.size[p]));
    return parts;
}

Mat row_scaled(const BlockSystem& sys) {
    Mat R = sys.M;
    for (size_t p = 0; p < sys.order.size(); ++p) {
        Complex scale = sys.order[p].kind == CompKind::Star ? Complex(-2.0) / sys.prob->params.c1
                                                            : Complex(2.0);
        R.middleRows(sys.offset[p], sys.size[p]) *= scale;
    }
    return R;
}

} // namespace vtbem
