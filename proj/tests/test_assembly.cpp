#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vtbem/assembly.hpp"
#include "vtbem/oracles.hpp"
#include "vtbem/fieldeval.hpp"
#include "vtbem/solver_dd.hpp"

#include <cmath>

using namespace vtbem;

namespace {

Problem disk_problem(double radius = 1.0, double max_len = 1.1 / 4.0) {
    Problem prob;
    prob.params = make_params(1.1, 1.0 / 160.0, 1.0 / 160.0, 1.4);
    prob.stars.push_back(panelize(make_circle({0.0, 0.0}, radius), CompKind::Star, max_len));
    return prob;
}

// straight duct [0,len] x [0,wid] with flat caps; orientation is positive
Problem duct_problem(double len, double wid, Complex a, double max_len, int depth = 4) {
    Problem prob;
    prob.params = make_params(1.1, 1.0 / 160.0, 1.0 / 160.0, 1.4, a);
    prob.stars.push_back(panelize(make_graph_cosine(0.0, len, {}), CompKind::Star, max_len));
    std::vector<double> top{wid};
    prob.stars.push_back(panelize(make_reversed(make_graph_cosine(0.0, len, top)), CompKind::Star, max_len));
    prob.circs.push_back(panelize(make_segment({0.0, wid}, {0.0, 0.0}), CompKind::Circ, max_len));
    prob.circs.push_back(panelize(make_segment({len, 0.0}, {len, wid}), CompKind::Circ, max_len));
    prepare_case2_geometry(prob, depth);
    return prob;
}

} // namespace

TEST_CASE("case I: zero data gives zero density") {
    Problem prob = disk_problem();
    auto sys = build_case1(prob);
    auto sgs = star_greens(prob);
    Vec rhs = build_rhs(sys, zero_data(prob), sgs);
    CHECK(rhs.norm() == 0.0);
    DenseSolver solver(sys.M);
    Vec sigma = solver.solve(rhs);
    CHECK(sigma.cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("case I rejects open components") {
    Problem prob;
    prob.params = make_params(1.1, 1.0 / 160.0, 1.0 / 160.0, 1.4);
    prob.stars.push_back(panelize(make_graph_cosine(0.0, 1.0, {}), CompKind::Star, 0.3));
    CHECK_THROWS_AS(build_case1(prob), Error);
}

TEST_CASE("case I disk solve matches the Fourier oracle") {
    Problem prob = disk_problem();
    const auto& pp = prob.params;
    auto sys = build_case1(prob);
    auto sgs = star_greens(prob);

    // boundary data with a few azimuthal modes
    int N = 3;
    std::vector<Complex> fmodes(size_t(2 * N + 1), Complex(0.0));
    fmodes[size_t(N + 0)] = Complex(1.0, 0.4);
    fmodes[size_t(N + 1)] = Complex(0.5, -0.2);
    fmodes[size_t(N - 2)] = Complex(-0.3, 0.1);
    auto amodes = disk_fourier_solve(1.0, pp, fmodes);

    BoundaryData data = zero_data(prob);
    {
        int i = 0;
        for (const auto& p : prob.stars[0].panels)
            for (int q = 0; q < p.order; ++q, ++i) {
                double th = std::atan2(p.x[size_t(q)].y, p.x[size_t(q)].x);
                Complex f = 0.0;
                for (int n = -N; n <= N; ++n) f += fmodes[size_t(n + N)] * std::exp(I * double(n) * th);
                data.f[0](i) = f;
            }
    }
    Vec rhs = build_rhs(sys, data, sgs);
    DenseSolver solver(sys.M);
    Vec sigma = solver.solve(rhs);
    CHECK(solver.backward_error(sigma, rhs) <= 1e-13);

    // evaluate u = (D - S/c1) sigma on the r = 1/2 circle and compare
    std::vector<TargetPoint> tg;
    for (int j = 0; j < 40; ++j) {
        double th = 2.0 * PI * j / 40.0;
        TargetPoint t;
        t.x = {0.5 * std::cos(th), 0.5 * std::sin(th)};
        tg.push_back(t);
    }
    auto S = make_layer_kernel(LayerKind::S, pp.k);
    auto D = make_layer_kernel(LayerKind::D, pp.k);
    Vec u = assemble_block(*D, {&prob.stars[0]}, false, tg, prob.quad).m * sigma -
            (1.0 / pp.c1) * (assemble_block(*S, {&prob.stars[0]}, false, tg, prob.quad).m * sigma);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < 40; ++j) {
        Complex want = disk_fourier_eval(amodes, pp.k, tg[size_t(j)].x);
        num += std::norm(u(j) - want);
        den += std::norm(want);
    }
    CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("case I eigenvalues accumulate at -c1/2") {
    Problem prob = disk_problem(1.0, 0.45); // coarse on purpose
    auto sys = build_case1(prob);
    auto eig = eigenvalues(sys.M);
    Complex target = -0.5 * prob.params.c1;
    int close = 0;
    for (auto& ev : eig)
        if (std::abs(ev - target) < 1e-3) ++close;
    CHECK(double(close) / double(eig.size()) > 0.8);

    // refine once: the accumulation point stays put
    Problem prob2 = disk_problem(1.0, 0.225);
    auto sys2 = build_case1(prob2);
    auto eig2 = eigenvalues(sys2.M);
    int close2 = 0;
    for (auto& ev : eig2)
        if (std::abs(ev - target) < 1e-3) ++close2;
    CHECK(double(close2) / double(eig2.size()) > 0.8);
}

TEST_CASE("case II block shapes and the a-dependence pattern") {
    Problem prob = duct_problem(2.0, 1.0, Complex(0.0, 1.0), 0.4, 3);
    auto sys = build_blocks_case2(prob);
    REQUIRE(sys.order.size() == 4);
    // interleaved unknown order sigma1 rho1 sigma2 rho2
    CHECK(sys.order[0].kind == CompKind::Star);
    CHECK(sys.order[1].kind == CompKind::Circ);
    CHECK(sys.order[2].kind == CompKind::Star);
    CHECK(sys.order[3].kind == CompKind::Circ);
    for (size_t t = 0; t < 4; ++t)
        for (size_t s = 0; s < 4; ++s) {
            CHECK(sys.blocks[t][s].rows() == sys.size[t]);
            CHECK(sys.blocks[t][s].cols() == sys.size[s]);
        }
    CHECK(sys.M.rows() == sys.n);

    // flipping a changes exactly the blocks whose rows live on circ components
    Problem prob2 = duct_problem(2.0, 1.0, Complex(0.0, -1.0), 0.4, 3);
    auto sys2 = build_blocks_case2(prob2);
    for (size_t t = 0; t < 4; ++t)
        for (size_t s = 0; s < 4; ++s) {
            double diff = (sys.blocks[t][s] - sys2.blocks[t][s]).cwiseAbs().maxCoeff();
            CAPTURE(t);
            CAPTURE(s);
            if (sys.order[t].kind == CompKind::Circ)
                CHECK(diff > 0.0);
            else
                CHECK(diff == 0.0);
        }
}

TEST_CASE("case II requires fins") {
    Problem prob;
    prob.params = make_params(1.1, 1.0 / 160.0, 1.0 / 160.0, 1.4, Complex(0.0, 1.0));
    prob.stars.push_back(panelize(make_graph_cosine(0.0, 2.0, {}), CompKind::Star, 0.4));
    prob.stars.push_back(
        panelize(make_reversed(make_graph_cosine(0.0, 2.0, {1.0})), CompKind::Star, 0.4));
    prob.circs.push_back(panelize(make_segment({0.0, 1.0}, {0.0, 0.0}), CompKind::Circ, 0.4));
    prob.circs.push_back(panelize(make_segment({2.0, 0.0}, {2.0, 1.0}), CompKind::Circ, 0.4));
    prob.robin.assign(2, Complex(0.0, 1.0));
    CHECK_THROWS_AS(build_blocks_case2(prob), Error);
}

TEST_CASE("assembly is permutation-consistent under component reordering") {
    Problem a = duct_problem(1.6, 0.9, Complex(0.0, 1.0), 0.45, 2);
    Problem b = duct_problem(1.6, 0.9, Complex(0.0, 1.0), 0.45, 2);
    std::swap(b.stars[0], b.stars[1]);
    std::swap(b.circs[0], b.circs[1]);
    auto sa = build_blocks_case2(a);
    auto sb = build_blocks_case2(b);
    // block (t,s) of a equals block (perm t, perm s) of b, exactly
    auto pa = [&](CompKind k, int i) { return sa.blocks[size_t(sa.place(k, i))]; };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Mat& A = sa.blocks[size_t(sa.place(CompKind::Star, i))]
                                    [size_t(sa.place(CompKind::Star, j))];
            const Mat& B = sb.blocks[size_t(sb.place(CompKind::Star, 1 - i))]
                                    [size_t(sb.place(CompKind::Star, 1 - j))];
            CHECK((A - B).cwiseAbs().maxCoeff() == 0.0);
        }
    const Mat& Ac = sa.blocks[size_t(sa.place(CompKind::Circ, 0))]
                            [size_t(sa.place(CompKind::Star, 1))];
    const Mat& Bc = sb.blocks[size_t(sb.place(CompKind::Circ, 1))]
                            [size_t(sb.place(CompKind::Star, 0))];
    CHECK((Ac - Bc).cwiseAbs().maxCoeff() == 0.0);
    (void)pa;
}

TEST_CASE("Schur reduction is algebraically equivalent to the full solve") {
    Problem prob = duct_problem(1.8, 1.0, Complex(0.0, 2.0 * PI / 1.1), 0.3, 4);
    auto sys = build_blocks_case2(prob);
    auto sgs = star_greens(prob);

    BoundaryData data = zero_data(prob);
    {
        int i = 0;
        for (const auto& p : prob.circs[0].panels)
            for (int q = 0; q < p.order; ++q, ++i)
                data.g[0](i) = std::exp(I * 3.0 * p.x[size_t(q)].y) + Complex(0.3, 0.1);
    }
    Vec rhs = build_rhs(sys, data, sgs);
    DenseSolver full(sys.M);
    Vec x = full.solve(rhs);
    auto parts = split_solution(sys, x);

    auto red = schur_reduce(sys, data);
    Vec g_stacked(red.Mo.rows());
    g_stacked.segment(red.circ_offset[0], prob.circs[0].nnodes()) = data.g[0];
    g_stacked.segment(red.circ_offset[1], prob.circs[1].nnodes()) = data.g[1];
    DenseSolver rsolver(red.Mo);
    Vec rho = rsolver.solve(g_stacked);
    Vec sigma0 = red.B[0] * rho, sigma1 = red.B[1] * rho;

    double scale = x.cwiseAbs().maxCoeff();
    CHECK((sigma0 - parts[0]).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    CHECK((rho.segment(red.circ_offset[0], prob.circs[0].nnodes()) - parts[1]).cwiseAbs().maxCoeff() <=
          1e-10 * scale);
    CHECK((sigma1 - parts[2]).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    CHECK((rho.segment(red.circ_offset[1], prob.circs[1].nnodes()) - parts[3]).cwiseAbs().maxCoeff() <=
          1e-10 * scale);

    // nonzero star data is rejected
    BoundaryData bad = zero_data(prob);
    bad.f[0](0) = 1.0;
    CHECK_THROWS_AS(schur_reduce(sys, bad), Error);
    BoundaryData badh = zero_data(prob);
    badh.h_plus[0] = 1.0;
    CHECK_THROWS_AS(schur_reduce(sys, badh), Error);
}

TEST_CASE("case I exterior: radiated field decays like 1/sqrt(r)") {
    Problem prob;
    prob.params = make_params(1.1, 1.0 / 160.0, 1.0 / 160.0, 1.4);
    // clockwise parameterization makes the curve the boundary of the exterior
    prob.stars.push_back(panelize(make_circle({0.0, 0.0}, 1.0, false), CompKind::Star, 1.1 / 4.0));
    auto sys = build_case1(prob);
    auto sgs = star_greens(prob);
    Vec2 src{0.15, -0.1}; // inside the hole, admissible for the exterior domain
    auto data = manufactured_data(prob, src);
    auto res = dense_solve(sys, build_rhs(sys, data, sgs));
    auto parts = split_solution(sys, res.x);

    // manufactured agreement at a moderately far exterior point
    std::vector<Vec2> near_t{{3.0, 1.0}};
    auto un = eval_field(prob, {parts[0]}, {}, near_t);
    CHECK(std::abs(un.u(0) - point_source(prob.params.k, near_t[0], src)) <= 1e-8);

    Vec2 ray{0.6, 0.8};
    auto u50 = eval_field(prob, {parts[0]}, {}, {50.0 * ray});
    auto u100 = eval_field(prob, {parts[0]}, {}, {100.0 * ray});
    double ratio = std::abs(u50.u(0)) / std::abs(u100.u(0));
    CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));

    // interior source placement is rejected for the exterior domain
    CHECK_THROWS_AS(manufactured_data(prob, Vec2{3.0, 0.0}), Error);

    // linearity of the field in the density
    Vec sig2 = 2.5 * parts[0];
    auto ulin = eval_field(prob, {sig2}, {}, near_t);
    CHECK(std::abs(ulin.u(0) - 2.5 * un.u(0)) <= 1e-14);

    // five-point Helmholtz residual at an off-surface target
    double h = 1e-3, k = prob.params.k;
    Vec2 x0{2.0, 0.5};
    auto at = [&](Vec2 x) { return eval_field(prob, {parts[0]}, {}, {x}).u(0); };
    Complex lap = at({x0.x + h, x0.y}) + at({x0.x - h, x0.y}) + at({x0.x, x0.y + h}) +
                  at({x0.x, x0.y - h}) - 4.0 * at(x0);
    CHECK(std::abs(lap / (h * h) + k * k * at(x0)) <= 1e-4);
}

TEST_CASE("degenerate Schur: no star-star cross coupling") {
    Problem prob = duct_problem(1.8, 1.0, Complex(0.0, 2.0 * PI / 1.1), 0.35, 3);
    auto sys = build_blocks_case2(prob);
    // zero the cross star blocks synthetically
    int s0 = sys.place(CompKind::Star, 0), s1 = sys.place(CompKind::Star, 1);
    sys.blocks[size_t(s0)][size_t(s1)].setZero();
    sys.blocks[size_t(s1)][size_t(s0)].setZero();
    sys.assemble_full();
    auto red = schur_reduce(sys, zero_data(prob));
    // two-step formula B_i = -K_{*i<-*i}^{-1} K_{o->*i}
    for (int i = 0; i < 2; ++i) {
        int si = sys.place(CompKind::Star, i);
        Mat Kii = sys.blocks[size_t(si)][size_t(si)];
        Mat Kci(Kii.rows(), red.Mo.cols());
        Kci << sys.blocks[size_t(si)][size_t(sys.place(CompKind::Circ, 0))],
            sys.blocks[size_t(si)][size_t(sys.place(CompKind::Circ, 1))];
        Mat want = -DenseSolver(Kii).solve(Kci);
        CHECK((red.B[size_t(i)] - want).cwiseAbs().maxCoeff() <= 1e-12 * want.cwiseAbs().maxCoeff());
    }
}
