#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vtbem/geometry.hpp"

#include <cmath>

using namespace vtbem;

namespace {

double max_panel_len(const BoundaryComponent& c) {
    double m = 0.0;
    for (const auto& p : c.panels) m = std::max(m, p.len);
    return m;
}

double min_panel_len(const BoundaryComponent& c) {
    double m = 1e300;
    for (const auto& p : c.panels) m = std::min(m, p.len);
    return m;
}

} // namespace

TEST_CASE("curve jets match finite differences") {
    struct Case {
        const char* name;
        CurvePtr curve;
    };
    std::vector<Case> cases = {
        {"circle", make_circle({0.2, -0.1}, 1.3)},
        {"cw circle", make_circle({0.0, 0.0}, 0.7, false)},
        {"segment", make_segment({0.0, 1.0}, {2.0, -1.0})},
        {"arc", make_arc({0.5, 0.5}, 2.0, 0.3, 1.9)},
        {"polar", make_polar_trig({0.0, 0.0}, 1.0, {0.15, 0.0, 0.05}, {0.0, 0.1})},
        {"graph", make_graph_cosine(-1.0, 2.0, {0.3, 0.2, 0.0, 0.1})},
        {"reversed", make_reversed(make_graph_cosine(-1.0, 2.0, {0.3, 0.2}))},
        {"reflected", make_reflected(make_arc({0.5, 0.5}, 2.0, 0.3, 1.9), {1.0, 0.2}, {0.6, 0.8})},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        double t = 0.37, h = 1e-5;
        Vec2 jc[5], jp[5], jm[5];
        c.curve->jet(t, 4, jc);
        c.curve->jet(t + h, 3, jp);
        c.curve->jet(t - h, 3, jm);
        for (int j = 0; j <= 3; ++j) {
            Vec2 fd = (jp[j] - jm[j]) * (1.0 / (2.0 * h));
            double scale = std::max(1.0, norm(jc[j + 1]));
            CHECK(norm(fd - jc[j + 1]) / scale <= 2e-8);
        }
    }
}

TEST_CASE("cubic spline interpolates its points and is C2 at knots") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 9; ++i) {
        double th = 2.0 * PI * i / 9.0;
        pts.push_back({std::cos(th), std::sin(th)});
    }
    auto sp = make_cubic_spline(pts, true);
    for (int i = 0; i < 9; ++i) {
        Vec2 p = sp->pos(double(i) / 9.0);
        CHECK(norm(p - pts[size_t(i)]) <= 1e-13);
    }
    // C2 across an interior knot
    double tk = 3.0 / 9.0, eps = 1e-9;
    Vec2 lo[3], hi[3];
    sp->jet(tk - eps, 2, lo);
    sp->jet(tk + eps, 2, hi);
    CHECK(norm(hi[1] - lo[1]) <= 1e-6);
    CHECK(norm(hi[2] - lo[2]) <= 1e-4);
    CHECK_FALSE(sp->jet_smooth_between(tk - 0.01, tk + 0.01));
    CHECK(sp->jet_smooth_between(tk + 0.001, tk + 0.05));
}

TEST_CASE("panelize: unit circle bounds and weights") {
    auto comp = panelize(make_circle({0.0, 0.0}, 1.0), CompKind::Star, 1.1 / 4.0);
    CHECK(max_panel_len(comp) < 1.1 / 4.0);
    CHECK(comp.npanels() >= 24);
    CHECK(std::abs(total_weight(comp) - 2.0 * PI) <= 1e-12 * 2.0 * PI);
    // orthonormal frame at every node
    double worst = 0.0;
    for (const auto& p : comp.panels)
        for (int q = 0; q < p.order; ++q) {
            worst = std::max(worst, std::abs(dot(p.nrm[q], p.tau[q])));
            worst = std::max(worst, std::abs(norm(p.nrm[q]) - 1.0));
            worst = std::max(worst, std::abs(norm(p.tau[q]) - 1.0));
        }
    CHECK(worst < 1e-13);
    // outward normal and unit curvature on the circle
    for (const auto& p : comp.panels)
        for (int q = 0; q < p.order; ++q) {
            CHECK(dot(p.nrm[q], p.x[q]) > 0.99);
            CHECK(std::abs(p.kappa[q] - 1.0) <= 1e-12);
        }
}

TEST_CASE("panelize: adjacent panels share endpoints, arclength is consistent") {
    auto comp = panelize(make_polar_trig({0.0, 0.0}, 1.0, {0.2, 0.0, 0.1}, {}), CompKind::Star, 0.25);
    for (int i = 0; i + 1 < comp.npanels(); ++i) {
        Vec2 a = comp.curve->pos(comp.panels[size_t(i)].t1);
        Vec2 b = comp.curve->pos(comp.panels[size_t(i + 1)].t0);
        CHECK(norm(a - b) <= 1e-13);
        CHECK(std::abs(comp.panels[size_t(i)].s_begin + comp.panels[size_t(i)].len -
                       comp.panels[size_t(i + 1)].s_begin) <= 1e-12);
    }
    CHECK(std::abs(total_weight(comp) - comp.length) <= 1e-12 * comp.length);
    // node arclengths increase and match panel offsets
    const auto& p = comp.panels[2];
    for (int q = 1; q < p.order; ++q) CHECK(p.s[q] > p.s[q - 1]);
    CHECK(p.s[0] > p.s_begin);
    CHECK(p.s[p.order - 1] < p.s_begin + p.len);
}

TEST_CASE("panelization and refinement commute with rigid motions") {
    auto base = make_polar_trig({0.0, 0.0}, 1.0, {0.1, 0.05}, {0.02});
    double ang = 0.7;
    Vec2 shift{1.3, -0.4};
    auto moved = make_transformed(base, ang, shift);
    auto comp = panelize(base, CompKind::Star, 0.2);
    auto compM = panelize(moved, CompKind::Star, 0.2);
    REQUIRE(comp.npanels() == compM.npanels());
    double cth = std::cos(ang), sth = std::sin(ang);
    auto rot = [&](Vec2 v) { return Vec2{cth * v.x - sth * v.y, sth * v.x + cth * v.y} + shift; };
    double worst = 0.0;
    for (int i = 0; i < comp.npanels(); ++i)
        for (int q = 0; q < comp.order; ++q)
            worst = std::max(worst, norm(rot(comp.panels[size_t(i)].x[size_t(q)]) -
                                         compM.panels[size_t(i)].x[size_t(q)]));
    CHECK(worst <= 1e-12);

    auto open_base = make_graph_cosine(0.0, 1.5, {0.2, 0.1});
    auto open_moved = make_transformed(open_base, ang, shift);
    auto r1 = dyadic_refine(panelize(open_base, CompKind::Star, 0.3), 0, 4);
    auto r2 = dyadic_refine(panelize(open_moved, CompKind::Star, 0.3), 0, 4);
    REQUIRE(r1.npanels() == r2.npanels());
    worst = 0.0;
    for (int i = 0; i < r1.npanels(); ++i)
        for (int q = 0; q < r1.order; ++q)
            worst = std::max(worst, norm(rot(r1.panels[size_t(i)].x[size_t(q)]) -
                                         r2.panels[size_t(i)].x[size_t(q)]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("dyadic refine halves toward the corner and preserves length") {
    auto comp = panelize(make_graph_cosine(0.0, 2.0, {0.5, 0.25}), CompKind::Star, 0.3);
    double L = comp.length;
    double l0 = comp.panels.front().len;
    auto ref = dyadic_refine(comp, 0, 7);
    CHECK(ref.npanels() == comp.npanels() + 7);
    CHECK(std::abs(total_weight(ref) - L) <= 1e-12 * L);
    CHECK(std::abs(ref.length - L) <= 1e-12 * L);
    // smallest panel is the corner one at l0 * 2^-7 (parameter halving tracks
    // arclength halving to curvature-variation accuracy)
    CHECK(min_panel_len(ref) == doctest::Approx(l0 * std::ldexp(1.0, -7)).epsilon(0.02));
    // consecutive halving toward the corner
    for (int i = 1; i <= 7; ++i) {
        double ratio = ref.panels[size_t(i)].len / ref.panels[size_t(i - 1)].len;
        CHECK(ratio == doctest::Approx(i == 1 ? 1.0 : 2.0).epsilon(0.05));
    }
    // depth 0 is the identity
    auto same = dyadic_refine(comp, 0, 0);
    CHECK(same.npanels() == comp.npanels());
    // refinement at the far end
    auto ref1 = dyadic_refine(comp, 1, 3);
    CHECK(ref1.npanels() == comp.npanels() + 3);
    CHECK(std::abs(ref1.length - L) <= 1e-12 * L);
}

TEST_CASE("fin nodes are exact reflections and involution recovers the base") {
    auto comp0 = panelize(make_arc({0.0, 0.0}, 1.5, -0.3, 1.1), CompKind::Star, 0.3);
    auto comp = dyadic_refine(comp0, 0, 4);
    double R = comp0.panels.front().len;
    Fin fin = build_fin(comp, 0, R);
    REQUIRE(fin.panels.size() >= 1);
    auto ep = comp.endpoint(0);
    Vec2 n = ep.nrm, p0 = ep.x;
    auto reflect = [&](Vec2 v) {
        Vec2 d = v - p0;
        double dn = dot(d, n);
        return p0 + 2.0 * dn * n - d;
    };
    for (size_t j = 0; j < fin.panels.size(); ++j) {
        const Panel& fp = fin.panels[j];
        const Panel& bp = comp.panels[size_t(fin.base_panel[j])];
        for (int q = 0; q < fp.order; ++q) {
            CHECK(norm(reflect(bp.x[size_t(q)]) - fp.x[size_t(q)]) <= 1e-13);
            CHECK(norm(reflect(fp.x[size_t(q)]) - bp.x[size_t(q)]) <= 1e-13); // involution
            CHECK(std::abs(fp.w[size_t(q)] - bp.w[size_t(q)]) <= 1e-13);
            CHECK(std::abs(fp.kappa[size_t(q)] - bp.kappa[size_t(q)]) <= 1e-12);
        }
    }
    // fin starts exactly at the corner
    CHECK(norm(fin.panels.front().curve->pos(fin.panels.front().t0) - p0) <= 1e-14);
}

TEST_CASE("fin of a straight star segment continues the line") {
    auto comp = panelize(make_segment({0.0, 0.0}, {2.0, 0.0}), CompKind::Star, 0.4);
    Fin fin = build_fin(comp, 1, comp.panels.back().len); // corner at (2,0), normal (0,-1)
    for (const auto& p : fin.panels)
        for (int q = 0; q < p.order; ++q) {
            CHECK(std::abs(p.x[size_t(q)].y) <= 1e-14);
            CHECK(p.x[size_t(q)].x > 2.0); // beyond the corner
        }
}

TEST_CASE("explicit reflection example: corner origin, normal (0,1)") {
    // base node (1,2) reflects to (-1,2) across the vertical line through 0
    Vec2 p0{0.0, 0.0}, n{0.0, 1.0}, v{1.0, 2.0};
    double dn = dot(v - p0, n);
    Vec2 image = p0 + 2.0 * dn * n - (v - p0);
    CHECK(image.x == doctest::Approx(-1.0));
    CHECK(image.y == doctest::Approx(2.0));
}

TEST_CASE("fin too long is rejected") {
    auto comp = panelize(make_segment({0.0, 0.0}, {1.0, 0.0}), CompKind::Circ, 0.3);
    CHECK_THROWS_AS(build_fin(comp, 0, 5.0), Error);
}

TEST_CASE("validate_case2 accepts a right-angle duct and rejects violations") {
    // straight duct: two horizontal walls, two vertical caps
    auto wall_b = panelize(make_graph_cosine(0.0, 2.0, {}), CompKind::Star, 0.4);
    auto wall_t0 = make_reversed(make_graph_cosine(0.0, 2.0, {1.0}));
    // top wall at height 1: constant term m=0 gives cos(0)=1 scaling
    auto wall_t = panelize(wall_t0, CompKind::Star, 0.4);
    auto cap_l = panelize(make_segment({0.0, 1.0}, {0.0, 0.0}), CompKind::Circ, 0.4);
    auto cap_r = panelize(make_segment({2.0, 0.0}, {2.0, 1.0}), CompKind::Circ, 0.4);
    auto report = validate_case2({wall_b, wall_t}, {cap_l, cap_r});
    CHECK(report.size() == 4);
    for (const auto& c : report) {
        CHECK(c.angle_error <= 1e-12);
        CHECK(c.circ_curvature <= 1e-12);
    }

    // curved cap: nonzero endpoint curvature must be rejected
    auto bad_cap = panelize(make_arc({1.0, 0.5}, std::sqrt(1.25), std::atan2(-0.5, -1.0), std::atan2(0.5, -1.0)),
                            CompKind::Circ, 0.4);
    CHECK_THROWS_AS(validate_case2({wall_b, wall_t}, {bad_cap, cap_r}), Error);
}

TEST_CASE("curved waveguide with flat caps passes case2 validation") {
    // cosine-series walls have zero slope at the ends, caps are vertical lines
    std::vector<double> prof{0.0, 0.0, 0.08, 0.03};
    auto wall_b = panelize(make_graph_cosine(0.0, 3.0, prof), CompKind::Star, 0.275);
    std::vector<double> top = prof;
    top[0] = 1.0; // lift by constant
    auto wall_t = panelize(make_reversed(make_graph_cosine(0.0, 3.0, top)), CompKind::Star, 0.275);
    double yb0 = 0.0 + 0.08 + 0.03, yt0 = 1.0 + 0.08 + 0.03;
    auto cap_l = panelize(make_segment({0.0, yt0}, {0.0, yb0}), CompKind::Circ, 0.275);
    double yb1 = 0.08 * std::cos(2.0 * PI) + 0.03 * std::cos(3.0 * PI);
    double yt1 = 1.0 + yb1;
    auto cap_r = panelize(make_segment({3.0, yb1}, {3.0, yt1}), CompKind::Circ, 0.275);
    auto report = validate_case2({wall_b, wall_t}, {cap_l, cap_r});
    CHECK(report.size() == 4);
}

TEST_CASE("curvature from jets matches second differences of positions") {
    auto comp = panelize(make_polar_trig({0.0, 0.0}, 1.0, {0.15}, {0.1}), CompKind::Star, 0.15);
    const Panel& p = comp.panels[1];
    // park a 5-point stencil on arclength via the curve map
    for (int q : {4, 8}) {
        double t = p.tnode[size_t(q)];
        double h = 1e-4 / p.speed[size_t(q)];
        Vec2 xm = p.curve->pos(t - h), x0 = p.curve->pos(t), xp = p.curve->pos(t + h);
        // second difference estimates x'' in t; convert to curvature
        Vec2 d1 = (xp - xm) * (1.0 / (2.0 * h));
        Vec2 d2 = (xp + xm - 2.0 * x0) * (1.0 / (h * h));
        double kap = cross(d1, d2) / std::pow(norm(d1), 3.0);
        CHECK(kap == doctest::Approx(p.kappa[size_t(q)]).epsilon(1e-6));
    }
}
