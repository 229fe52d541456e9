#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vtbem/quadrature.hpp"
#include "vtbem/special.hpp"

#include <cmath>

using namespace vtbem;

namespace {

const double K_PAPER = 2.0 * PI / 1.1;

Vec sample_surface(const BoundaryComponent& comp, const std::function<Complex(Vec2, double)>& f) {
    Vec v(comp.nnodes());
    int i = 0;
    for (const auto& p : comp.panels)
        for (int q = 0; q < p.order; ++q, ++i) v(i) = f(p.x[size_t(q)], p.s[size_t(q)]);
    return v;
}

// Laplace single layer, defined in the test so library quadrature is checked
// against an independent kernel
class LaplaceS : public KernelDef {
public:
    Complex eval(const TargetPoint& tgt, const SourcePoint& src) const override {
        double r = norm(tgt.x - src.y);
        return Complex(-std::log(r) / (2.0 * PI), 0.0);
    }
    const char* name() const override { return "S0"; }
};

} // namespace

TEST_CASE("zero density maps to zero") {
    auto comp = panelize(make_circle({0.0, 0.0}, 1.0), CompKind::Star, 1.1 / 4.0);
    auto S = make_layer_kernel(LayerKind::S, K_PAPER);
    auto tg = surface_targets(comp);
    auto op = assemble_block(*S, {&comp}, false, tg, {});
    Vec zero = Vec::Zero(comp.nnodes());
    CHECK((op.m * zero).norm() == 0.0);
    CHECK(op.ntgt == comp.nnodes());
    CHECK(op.nsrc == comp.nnodes());
}

TEST_CASE("Laplace single layer of 1 on the unit circle is the closed-form constant") {
    // closed form: potential of unit density on circle radius a at the circle
    // itself equals -a log a; on the unit circle that is 0
    auto comp = panelize(make_circle({0.0, 0.0}, 1.0), CompKind::Star, 1.1 / 4.0);
    LaplaceS S0;
    auto op = assemble_block(S0, {&comp}, false, surface_targets(comp), {});
    Vec one = Vec::Ones(comp.nnodes());
    Vec val = op.m * one;
    CHECK(val.cwiseAbs().maxCoeff() <= 1e-12);

    // radius 1.7 for a nonzero constant
    auto comp2 = panelize(make_circle({0.0, 0.0}, 1.7), CompKind::Star, 0.4);
    auto op2 = assemble_block(S0, {&comp2}, false, surface_targets(comp2), {});
    Vec val2 = op2.m * Vec::Ones(comp2.nnodes());
    double want = -1.7 * std::log(1.7);
    CHECK((val2.array() - want).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("Helmholtz S on the unit circle has Bessel-product eigenvalues") {
    double k = K_PAPER;
    auto comp = panelize(make_circle({0.0, 0.0}, 1.0), CompKind::Star, 1.1 / 4.0);
    auto S = make_layer_kernel(LayerKind::S, k);
    auto op = assemble_block(*S, {&comp}, false, surface_targets(comp), {});
    auto jn = bessel_jn(3, k);
    auto yn = bessel_yn(3, k);
    for (int n = 0; n <= 2; ++n) {
        Vec mode = sample_surface(comp, [&](Vec2 x, double) {
            double th = std::atan2(x.y, x.x);
            return std::exp(Complex(0.0, n * th));
        });
        Complex lam = 0.5 * I * PI * jn[size_t(n)] * Complex(jn[size_t(n)], yn[size_t(n)]);
        Vec resid = op.m * mode - lam * mode;
        CAPTURE(n);
        CHECK(resid.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("finite-part kernels are rejected") {
    auto comp = panelize(make_circle({0.0, 0.0}, 1.0), CompKind::Star, 0.3);
    auto Spp = make_layer_kernel(LayerKind::SppRaw, 1.0);
    CHECK_THROWS_AS(assemble_block(*Spp, {&comp}, false, surface_targets(comp), {}), Error);
    auto Dpp = make_layer_kernel(LayerKind::DppRaw, 1.0);
    CHECK_THROWS_AS(assemble_block(*Dpp, {&comp}, false, surface_targets(comp), {}), Error);
}

TEST_CASE("tangential derivative matrix") {
    auto comp = panelize(make_circle({0.0, 0.0}, 1.0), CompKind::Star, 0.27);
    Mat D = tangential_deriv_matrix(comp);
    Vec c = Vec::Constant(comp.nnodes(), Complex(2.5, -1.0));
    CHECK((D * c).cwiseAbs().maxCoeff() <= 1e-11);

    Vec sinv = sample_surface(comp, [](Vec2, double s) { return Complex(std::sin(s), 0.0); });
    Vec cosv = sample_surface(comp, [](Vec2, double s) { return Complex(std::cos(s), 0.0); });
    CHECK(((D * sinv) - cosv).cwiseAbs().maxCoeff() <= 1e-10);

    auto seg = panelize(make_segment({0.0, 0.0}, {2.0, 0.0}), CompKind::Circ, 0.5);
    Mat Ds = tangential_deriv_matrix(seg);
    Vec lin = sample_surface(seg, [](Vec2, double s) { return Complex(s, 0.0); });
    CHECK(((Ds * lin).array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("endpoint derivatives") {
    auto comp = panelize(make_graph_cosine(0.0, 2.0, {0.3, 0.1}), CompKind::Star, 0.3);
    double L = comp.length;
    Vec c = Vec::Constant(comp.nnodes(), Complex(1.0, 1.0));
    auto [d0c, d1c] = endpoint_deriv(comp, c);
    CHECK(std::abs(d0c) <= 1e-11);
    CHECK(std::abs(d1c) <= 1e-11);

    Vec lin = sample_surface(comp, [](Vec2, double s) { return Complex(s, 0.0); });
    auto [d0l, d1l] = endpoint_deriv(comp, lin);
    CHECK(std::abs(d0l - 1.0) <= 1e-11);
    CHECK(std::abs(d1l - 1.0) <= 1e-11);

    Vec cosv = sample_surface(comp, [&](Vec2, double s) { return Complex(std::cos(PI * s / L), 0.0); });
    auto [d0m, d1m] = endpoint_deriv(comp, cosv);
    CHECK(std::abs(d0m) <= 1e-9);
    CHECK(std::abs(d1m) <= 1e-9);

    auto closed = panelize(make_circle({0.0, 0.0}, 1.0), CompKind::Star, 0.3);
    CHECK_THROWS_AS(endpoint_deriv(closed, Vec::Zero(closed.nnodes())), Error);
}

TEST_CASE("jump relations at O(h)") {
    double k = K_PAPER;
    auto comp = panelize(make_polar_trig({0.0, 0.0}, 1.0, {0.1}, {0.05}), CompKind::Star, 0.2);
    auto sigma_f = [](Vec2 x, double) {
        double th = std::atan2(x.y, x.x);
        return std::exp(Complex(0.0, 2.0 * th)) + 0.5;
    };
    Vec sigma = sample_surface(comp, sigma_f);

    auto S = make_layer_kernel(LayerKind::S, k);
    auto D = make_layer_kernel(LayerKind::D, k);
    auto Sp = make_layer_kernel(LayerKind::Sprime, k);
    auto Dp = make_layer_kernel(LayerKind::Dprime, k);
    auto on_tgts = surface_targets(comp);

    // probe at a handful of nodes
    std::vector<int> picks{3, 57, 120};
    auto offset_targets = [&](double h) {
        std::vector<TargetPoint> tg;
        for (int i : picks) {
            TargetPoint t = on_tgts[size_t(i)];
            TargetPoint tp = t, tm = t;
            tp.x = t.x + h * t.nx;
            tm.x = t.x - h * t.nx;
            tp.on_comp = tm.on_comp = nullptr;
            tp.on_panel = tm.on_panel = -1;
            tg.push_back(tp);
            tg.push_back(tm);
        }
        return tg;
    };

    std::vector<TargetPoint> on_sel;
    for (int i : picks) on_sel.push_back(on_tgts[size_t(i)]);
    Vec Dsig = assemble_block(*D, {&comp}, false, on_sel, {}).m * sigma;
    Vec Spsig = assemble_block(*Sp, {&comp}, false, on_sel, {}).m * sigma;
    Vec Ssig = assemble_block(*S, {&comp}, false, on_sel, {}).m * sigma;

    auto measure = [&](double h) {
        auto tg = offset_targets(h);
        Vec Dv = assemble_block(*D, {&comp}, false, tg, {}).m * sigma;
        Vec Spv = assemble_block(*Sp, {&comp}, false, tg, {}).m * sigma;
        Vec Sv = assemble_block(*S, {&comp}, false, tg, {}).m * sigma;
        Vec Dpv = assemble_block(*Dp, {&comp}, false, tg, {}).m * sigma;
        double eD = 0.0, eSp = 0.0, eS = 0.0, eDp = 0.0;
        for (size_t j = 0; j < picks.size(); ++j) {
            Complex sg = sigma(picks[j]);
            // rows: 2j is +h (outside), 2j+1 is -h (inside)
            eD = std::max(eD, std::abs(Dv(2 * j) - (0.5 * sg + Dsig(j))));
            eD = std::max(eD, std::abs(Dv(2 * j + 1) - (-0.5 * sg + Dsig(j))));
            eSp = std::max(eSp, std::abs(Spv(2 * j) - (-0.5 * sg + Spsig(j))));
            eSp = std::max(eSp, std::abs(Spv(2 * j + 1) - (0.5 * sg + Spsig(j))));
            eS = std::max(eS, std::abs(Sv(2 * j) - Ssig(j)));
            eS = std::max(eS, std::abs(Sv(2 * j + 1) - Ssig(j)));
            // D' is continuous across the curve: compare the two sides
            eDp = std::max(eDp, std::abs(Dpv(2 * j) - Dpv(2 * j + 1)));
        }
        return std::array<double, 4>{eD, eSp, eS, eDp};
    };

    auto e1 = measure(1e-2);
    auto e2 = measure(5e-3);
    for (int c = 0; c < 4; ++c) {
        CAPTURE(c);
        CHECK(e1[size_t(c)] < 0.5);                  // approaching the jump value
        CHECK(e2[size_t(c)] < 0.75 * e1[size_t(c)]); // ~O(h) or better
    }
    CHECK(e2[2] < 5e-2); // S continuous: already small
}

TEST_CASE("self-convergence of assembled operators under panel doubling") {
    double k = K_PAPER;
    auto curve = make_polar_trig({0.0, 0.0}, 1.0, {0.12}, {0.07});
    auto coarse = panelize(curve, CompKind::Star, 0.25);
    auto fine = panelize(curve, CompKind::Star, 0.125);

    std::vector<TargetPoint> tg;
    for (double th : {0.3, 1.7, 3.9}) {
        TargetPoint t;
        t.x = {0.55 * std::cos(th), 0.55 * std::sin(th)}; // interior, moderately close
        t.nx = {std::cos(th), std::sin(th)};
        tg.push_back(t);
    }
    auto sig = [](Vec2 x, double) {
        double th = std::atan2(x.y, x.x);
        return std::exp(Complex(0.0, 3.0 * th));
    };
    for (LayerKind kind : {LayerKind::S, LayerKind::D, LayerKind::Sprime, LayerKind::Dprime}) {
        auto K = make_layer_kernel(kind, k);
        Vec vc = assemble_block(*K, {&coarse}, false, tg, {}).m * sample_surface(coarse, sig);
        Vec vf = assemble_block(*K, {&fine}, false, tg, {}).m * sample_surface(fine, sig);
        CAPTURE(int(kind));
        CHECK((vc - vf).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, vf.cwiseAbs().maxCoeff()));
    }
    // combined kernel at a just-off-surface target (both discretizations see
    // the same near-singular integral)
    auto C = make_layer_kernel(LayerKind::CombinedDpSpp, k);
    TargetPoint tn = surface_targets(coarse)[7];
    tn.x = tn.x + 3e-3 * tn.nx;
    tn.on_comp = nullptr;
    tn.on_panel = -1;
    std::vector<TargetPoint> onc{tn};
    Vec cc = assemble_block(*C, {&coarse}, false, onc, {}).m * sample_surface(coarse, sig);
    Vec cf = assemble_block(*C, {&fine}, false, onc, {}).m * sample_surface(fine, sig);
    CHECK((cc - cf).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, cf.cwiseAbs().maxCoeff()));
}
