#include "vtbem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vtbem {

namespace {

struct FrameData {
    Vec2 x, tau, nrm;
    double kappa, speed;
};

FrameData frame_at(const Curve& curve, double t, bool flip) {
    Vec2 j[4];
    curve.jet(t, 3, j);
    double v = norm(j[1]);
    if (v <= 0.0) fail(Err::DegenerateCurve, "curve has vanishing velocity");
    FrameData f;
    f.x = j[0];
    f.speed = v;
    f.tau = j[1] * (1.0 / v);
    f.nrm = rot_minus90(f.tau);
    f.kappa = cross(j[1], j[2]) / (v * v * v);
    if (flip) {
        // mirrored panels keep the frame of the curve they extend
        f.nrm = -f.nrm;
        f.kappa = -f.kappa;
    }
    return f;
}

// adaptive arclength of curve over [t0,t1], absolute tolerance
double arclength(const Curve& curve, double t0, double t1, double tol) {
    const auto& rule = legendre_rule(12);
    auto quad = [&](double a, double b) {
        double h = 0.5 * (b - a), m = 0.5 * (a + b), s = 0.0;
        for (int q = 0; q < rule.order; ++q) s += rule.weights[q] * norm(curve.deriv(m + h * rule.nodes[q]));
        return s * h;
    };
    struct Box {
        double a, b, est;
        int depth;
    };
    std::vector<Box> stack{{t0, t1, quad(t0, t1), 0}};
    double total = 0.0;
    while (!stack.empty()) {
        Box box = stack.back();
        stack.pop_back();
        double m = 0.5 * (box.a + box.b);
        double l = quad(box.a, m), r = quad(m, box.b);
        if (std::abs(l + r - box.est) < tol * 0.01 + 1e-15 || box.depth > 50) {
            total += l + r;
        } else {
            stack.push_back({box.a, m, l, box.depth + 1});
            stack.push_back({m, box.b, r, box.depth + 1});
        }
    }
    return total;
}

Panel build_panel(CurvePtr curve, double t0, double t1, int order, bool flip) {
    const auto& rule = legendre_rule(order);
    Panel p;
    p.curve = curve;
    p.t0 = t0;
    p.t1 = t1;
    p.order = order;
    p.flip_frame = flip;
    p.tnode.resize(order);
    p.x.resize(order);
    p.tau.resize(order);
    p.nrm.resize(order);
    p.kappa.resize(order);
    p.speed.resize(order);
    p.w.resize(order);
    p.s.resize(order);
    double h = p.half();
    for (int q = 0; q < order; ++q) {
        double t = p.ref_to_param(rule.nodes[q]);
        p.tnode[q] = t;
        FrameData f = frame_at(*curve, t, flip);
        p.x[q] = f.x;
        p.tau[q] = f.tau;
        p.nrm[q] = f.nrm;
        p.kappa[q] = f.kappa;
        p.speed[q] = f.speed;
        p.w[q] = rule.weights[q] * h * f.speed;
    }
    p.speed_cf = rule.to_coefficients(p.speed);
    p.len = rule.integrate(p.speed) * h;
    for (int q = 0; q < order; ++q)
        p.s[q] = LegendreRule::eval_antiderivative(p.speed_cf, rule.nodes[q]) * h; // from panel start
    // bounding circle over nodes plus the two panel ends
    Vec2 a = curve->pos(t0), b = curve->pos(t1);
    Vec2 lo = a, hi = a;
    auto absorb = [&](const Vec2& v) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    };
    absorb(b);
    for (const auto& v : p.x) absorb(v);
    p.center = 0.5 * (lo + hi);
    p.radius = 0.5 * norm(hi - lo) + 1e-15;
    auto knots = curve->mandatory_breaks();
    p.knot_interior = std::any_of(knots.begin(), knots.end(),
                                  [&](double k) { return k > t0 + 1e-13 && k < t1 - 1e-13; });
    return p;
}

} // namespace

Panel::PointData Panel::at(double t, const LegendreRule& rule) const {
    (void)rule;
    FrameData f = frame_at(*curve, t, flip_frame);
    PointData d;
    d.x = f.x;
    d.tau = f.tau;
    d.nrm = f.nrm;
    d.kappa = f.kappa;
    d.speed = f.speed;
    d.s = s_begin + LegendreRule::eval_antiderivative(speed_cf, param_to_ref(t)) * half();
    return d;
}

Panel::PointData BoundaryComponent::endpoint(int end) const {
    if (closed) fail(Err::ClosedCurve, "closed component has no endpoints");
    const Panel& p = (end == 0) ? panels.front() : panels.back();
    FrameData f = frame_at(*curve, end == 0 ? p.t0 : p.t1, p.flip_frame);
    Panel::PointData d;
    d.x = f.x;
    d.tau = f.tau;
    d.nrm = f.nrm;
    d.kappa = f.kappa;
    d.speed = f.speed;
    d.s = (end == 0) ? 0.0 : length;
    return d;
}

const Fin* BoundaryComponent::fin_at(int end) const {
    for (const auto& f : fins)
        if (f.end == end) return &f;
    return nullptr;
}

BoundaryComponent panelize(CurvePtr curve, CompKind kind, double max_len, int order,
                           const std::vector<double>& extra_breaks) {
    if (order < 4) fail(Err::DomainError, "panel order must be at least 4");
    if (max_len <= 0.0) fail(Err::DomainError, "max panel length must be positive");
    BoundaryComponent comp;
    comp.kind = kind;
    comp.curve = curve;
    comp.closed = curve->closed();
    comp.order = order;

    // mandatory breaks (spline knots, pinned boundaries) partition first
    std::vector<double> seg{0.0};
    for (double b : curve->mandatory_breaks())
        if (b > 1e-13 && b < 1.0 - 1e-13) seg.push_back(b);
    for (double b : extra_breaks)
        if (b > 1e-13 && b < 1.0 - 1e-13) seg.push_back(b);
    seg.push_back(1.0);
    std::sort(seg.begin(), seg.end());
    seg.erase(std::unique(seg.begin(), seg.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              seg.end());

    std::vector<double> breaks{0.0};
    double total = 0.0;
    std::vector<double> seg_len(seg.size() - 1);
    for (size_t i = 0; i + 1 < seg.size(); ++i) {
        seg_len[i] = arclength(*curve, seg[i], seg[i + 1], 1e-13);
        total += seg_len[i];
    }
    // panel budget; closed curves get an even count overall
    int want_total = 0;
    std::vector<int> per_seg(seg_len.size());
    for (size_t i = 0; i < seg_len.size(); ++i) {
        per_seg[i] = std::max(1, int(std::ceil(seg_len[i] / max_len)));
        if (per_seg[i] * max_len <= seg_len[i] + 1e-14) per_seg[i] += 1; // keep the bound strict
        want_total += per_seg[i];
    }
    if (comp.closed && want_total % 2 == 1) per_seg[0] += 1;

    for (size_t i = 0; i < seg_len.size(); ++i) {
        int n = per_seg[i];
        // equal arclength split by bisecting the cumulative length
        double a = seg[i];
        for (int j = 1; j < n; ++j) {
            double target = seg_len[i] * double(j) / double(n);
            double lo = seg[i], hi = seg[i + 1];
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                (arclength(*curve, seg[i], mid, 1e-13) < target ? lo : hi) = mid;
            }
            double t = 0.5 * (lo + hi);
            breaks.push_back(t);
            a = t;
        }
        static_cast<void>(a);
        breaks.push_back(seg[i + 1]);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-15; }),
                 breaks.end());

    for (size_t i = 0; i + 1 < breaks.size(); ++i)
        comp.panels.push_back(build_panel(curve, breaks[i], breaks[i + 1], order, false));

    double s0 = 0.0;
    for (auto& p : comp.panels) {
        p.s_begin = s0;
        for (int q = 0; q < order; ++q) p.s[q] += s0;
        s0 += p.len;
    }
    comp.length = s0;
    return comp;
}

BoundaryComponent dyadic_refine(const BoundaryComponent& comp, int end, int depth) {
    if (comp.closed) fail(Err::ClosedCurve, "dyadic refinement targets an endpoint");
    if (depth < 0) fail(Err::DomainError, "negative refinement depth");
    if (depth == 0) return comp;
    BoundaryComponent out;
    out.kind = comp.kind;
    out.curve = comp.curve;
    out.closed = comp.closed;
    out.order = comp.order;

    std::vector<std::pair<double, double>> intervals;
    auto push_dyadic_from_start = [&](double t0, double t1) {
        double h = t1 - t0;
        intervals.emplace_back(t0, t0 + h * std::ldexp(1.0, -depth));
        for (int d = depth; d >= 1; --d)
            intervals.emplace_back(t0 + h * std::ldexp(1.0, -d), t0 + h * std::ldexp(1.0, -(d - 1)));
    };
    auto push_dyadic_from_end = [&](double t0, double t1) {
        double h = t1 - t0;
        for (int d = 1; d <= depth; ++d)
            intervals.emplace_back(t1 - h * std::ldexp(1.0, -(d - 1)), t1 - h * std::ldexp(1.0, -d));
        intervals.emplace_back(t1 - h * std::ldexp(1.0, -depth), t1);
        // emitted outside-in; re-sort below
    };

    for (size_t i = 0; i < comp.panels.size(); ++i) {
        const Panel& p = comp.panels[i];
        if (end == 0 && i == 0)
            push_dyadic_from_start(p.t0, p.t1);
        else if (end == 1 && i + 1 == comp.panels.size())
            push_dyadic_from_end(p.t0, p.t1);
        else
            intervals.emplace_back(p.t0, p.t1);
    }
    std::sort(intervals.begin(), intervals.end());
    for (auto [a, b] : intervals) out.panels.push_back(build_panel(comp.curve, a, b, comp.order, false));
    double s0 = 0.0;
    for (auto& p : out.panels) {
        p.s_begin = s0;
        for (int q = 0; q < p.order; ++q) p.s[q] += s0;
        s0 += p.len;
    }
    out.length = s0;
    return out;
}

BoundaryComponent split_all_panels(const BoundaryComponent& comp) {
    BoundaryComponent out;
    out.kind = comp.kind;
    out.curve = comp.curve;
    out.closed = comp.closed;
    out.order = comp.order;
    for (const auto& p : comp.panels) {
        double mid = 0.5 * (p.t0 + p.t1);
        out.panels.push_back(build_panel(comp.curve, p.t0, mid, comp.order, p.flip_frame));
        out.panels.push_back(build_panel(comp.curve, mid, p.t1, comp.order, p.flip_frame));
    }
    double s0 = 0.0;
    for (auto& p : out.panels) {
        p.s_begin = s0;
        for (int q = 0; q < p.order; ++q) p.s[q] += s0;
        s0 += p.len;
    }
    out.length = s0;
    return out;
}

Fin build_fin(const BoundaryComponent& comp, int end, double R) {
    if (comp.closed) fail(Err::ClosedCurve, "fins attach to open components");
    if (R > comp.length + 1e-12) fail(Err::FinTooLong, "fin length exceeds component arclength");
    Fin fin;
    fin.end = end;
    fin.parity = (comp.kind == CompKind::Star) ? 1.0 : -1.0;
    fin.length = R;
    auto ep = comp.endpoint(end);
    fin.corner = ep.x;
    fin.axis = ep.nrm;
    CurvePtr refl = make_reflected(comp.curve, fin.corner, fin.axis);

    // mirror whole panels until R of arclength is covered
    double covered = 0.0;
    if (end == 0) {
        for (int i = 0; i < comp.npanels() && covered < R - 1e-12; ++i) {
            fin.panels.push_back(build_panel(refl, comp.panels[i].t0, comp.panels[i].t1, comp.order, true));
            fin.base_panel.push_back(i);
            covered += comp.panels[i].len;
        }
    } else {
        for (int i = comp.npanels() - 1; i >= 0 && covered < R - 1e-12; --i) {
            fin.panels.push_back(build_panel(refl, comp.panels[i].t0, comp.panels[i].t1, comp.order, true));
            fin.base_panel.push_back(i);
            covered += comp.panels[i].len;
        }
    }
    // arclength on the fin mirrors the base arclength
    for (size_t j = 0; j < fin.panels.size(); ++j) {
        const Panel& bp = comp.panels[size_t(fin.base_panel[j])];
        fin.panels[j].s_begin = bp.s_begin;
        fin.panels[j].s = bp.s;
    }
    return fin;
}

std::vector<CornerReport> validate_case2(const std::vector<BoundaryComponent>& stars,
                                         const std::vector<BoundaryComponent>& circs, double tol) {
    struct End {
        int comp, end;
        Panel::PointData data;
    };
    auto collect = [](const std::vector<BoundaryComponent>& comps) {
        std::vector<End> ends;
        for (size_t i = 0; i < comps.size(); ++i) {
            if (comps[i].closed) continue;
            ends.push_back({int(i), 0, comps[i].endpoint(0)});
            ends.push_back({int(i), 1, comps[i].endpoint(1)});
        }
        return ends;
    };
    auto star_ends = collect(stars);
    auto circ_ends = collect(circs);

    std::vector<CornerReport> corners;
    std::vector<bool> circ_used(circ_ends.size(), false);
    for (const auto& se : star_ends) {
        int match = -1;
        for (size_t j = 0; j < circ_ends.size(); ++j) {
            if (!circ_used[j] && norm(se.data.x - circ_ends[j].data.x) < 1e-9) {
                match = int(j);
                break;
            }
        }
        if (match < 0)
            fail(Err::GeometryViolation, "open star endpoint does not meet any circ endpoint");
        circ_used[size_t(match)] = true;
        const auto& ce = circ_ends[size_t(match)];
        CornerReport c;
        c.pos = se.data.x;
        c.star_comp = se.comp;
        c.star_end = se.end;
        c.circ_comp = ce.comp;
        c.circ_end = ce.end;
        c.angle_error = std::abs(dot(se.data.tau, ce.data.tau));
        c.circ_curvature = std::abs(ce.data.kappa);
        corners.push_back(c);
    }
    for (size_t j = 0; j < circ_ends.size(); ++j)
        if (!circ_used[j]) fail(Err::GeometryViolation, "open circ endpoint does not meet any star endpoint");

    for (const auto& c : corners) {
        if (c.angle_error > tol)
            fail(Err::GeometryViolation, "corner tangents are not orthogonal");
        if (c.circ_curvature > tol)
            fail(Err::GeometryViolation, "circ curvature does not vanish at corner");
    }
    return corners;
}

double total_weight(const BoundaryComponent& comp) {
    double s = 0.0;
    for (const auto& p : comp.panels)
        for (double w : p.w) s += w;
    return s;
}

} // namespace vtbem
