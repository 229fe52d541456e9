#include "vtbem/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "vtbem/special.hpp"

namespace vtbem {

namespace {

// sum of signed areas of the boundary loops (positive: bounded domain)
double signed_area(const Problem& prob) {
    double acc = 0.0;
    auto add = [&](const BoundaryComponent& c) {
        const Panel* prev = nullptr;
        for (const auto& pan : c.panels) {
            for (int q = 0; q < pan.order; ++q) {
                // shoelace with the tangent measure: closed boundaries only
                acc += 0.5 * cross(pan.x[size_t(q)], pan.tau[size_t(q)]) * pan.w[size_t(q)];
            }
            prev = &pan;
        }
        (void)prev;
    };
    for (const auto& c : prob.stars) add(c);
    for (const auto& c : prob.circs) add(c);
    return acc;
}

// winding number of the full boundary polygon about p (components chained by
// matching endpoints)
double winding_number(const Problem& prob, Vec2 p) {
    struct Piece {
        std::vector<Vec2> pts;
        bool used = false;
    };
    std::vector<Piece> pieces;
    auto add = [&](const BoundaryComponent& c) {
        Piece pc;
        for (const auto& pan : c.panels)
            for (const auto& v : pan.x) pc.pts.push_back(v);
        pieces.push_back(std::move(pc));
    };
    for (const auto& c : prob.stars) add(c);
    for (const auto& c : prob.circs) add(c);

    double angle = 0.0;
    auto sweep = [&](const std::vector<Vec2>& pts, bool close) {
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            Vec2 a = pts[i] - p, b = pts[i + 1] - p;
            angle += std::atan2(cross(a, b), dot(a, b));
        }
        if (close) {
            Vec2 a = pts.back() - p, b = pts.front() - p;
            angle += std::atan2(cross(a, b), dot(a, b));
        }
    };

    size_t nclosed = 0;
    for (size_t i = 0; i < pieces.size(); ++i) {
        bool closed = (i < prob.stars.size()) ? prob.stars[i].closed
                                              : prob.circs[i - prob.stars.size()].closed;
        if (closed) {
            sweep(pieces[i].pts, true);
            pieces[i].used = true;
            ++nclosed;
        }
    }
    // chain the open pieces into loops by endpoint matching
    while (true) {
        size_t start = pieces.size();
        for (size_t i = 0; i < pieces.size(); ++i)
            if (!pieces[i].used) {
                start = i;
                break;
            }
        if (start == pieces.size()) break;
        std::vector<Vec2> loop = pieces[start].pts;
        pieces[start].used = true;
        for (size_t guard = 0; guard < pieces.size(); ++guard) {
            Vec2 tail = loop.back();
            bool extended = false;
            for (auto& pc : pieces) {
                if (pc.used) continue;
                if (norm(pc.pts.front() - tail) < 1e-6) {
                    loop.insert(loop.end(), pc.pts.begin(), pc.pts.end());
                    pc.used = true;
                    extended = true;
                    break;
                }
            }
            if (!extended) break;
        }
        sweep(loop, true);
    }
    return angle / (2.0 * PI);
}

} // namespace

Complex point_source(double k, const Vec2& x, const Vec2& x0) { return greens(k, x, x0); }

bool source_admissible(const Problem& prob, Vec2 x0) {
    // bounded domains (positive orientation) exclude enclosed sources; for
    // exterior domains the source must sit inside the complement
    double wind = winding_number(prob, x0);
    bool interior_domain = signed_area(prob) > 0.0;
    bool enclosed = std::abs(wind) > 0.5;
    return interior_domain != enclosed;
}

BoundaryData manufactured_data(const Problem& prob, Vec2 x0, bool check_source) {
    if (check_source && !source_admissible(prob, x0))
        fail(Err::SourceInsideDomain, "manufactured point source must lie outside the solution region");
    const auto& pp = prob.params;
    double k = pp.k;
    BoundaryData d;
    for (size_t i = 0; i < prob.stars.size(); ++i) {
        const auto& comp = prob.stars[i];
        Vec f(comp.nnodes());
        int idx = 0;
        for (const auto& p : comp.panels) {
            for (int q = 0; q < p.order; ++q, ++idx) {
                Vec2 x = p.x[size_t(q)], tau = p.tau[size_t(q)], nn = p.nrm[size_t(q)];
                double kap = p.kappa[size_t(q)];
                Complex lap_gamma = greens_hess_quad(k, x, x0, tau, tau) -
                                    kap * greens_grad_dot(k, x, x0, nn);
                Complex dn = greens_grad_dot(k, x, x0, nn);
                f(idx) = pp.c1 * lap_gamma + pp.c2 * point_source(k, x, x0) + dn;
            }
        }
        d.f.push_back(std::move(f));
        if (!comp.closed) {
            auto e0 = comp.endpoint(0), e1 = comp.endpoint(1);
            d.h_plus.push_back(greens_grad_dot(k, e1.x, x0, e1.tau));
            d.h_minus.push_back(-greens_grad_dot(k, e0.x, x0, e0.tau));
        } else {
            d.h_plus.push_back(Complex(0.0));
            d.h_minus.push_back(Complex(0.0));
        }
    }
    for (size_t j = 0; j < prob.circs.size(); ++j) {
        const auto& comp = prob.circs[j];
        Complex a = prob.robin.empty() ? pp.robin_a : prob.robin[j];
        Vec g(comp.nnodes());
        int idx = 0;
        for (const auto& p : comp.panels)
            for (int q = 0; q < p.order; ++q, ++idx)
                g(idx) = a * point_source(k, p.x[size_t(q)], x0) +
                         greens_grad_dot(k, p.x[size_t(q)], x0, p.nrm[size_t(q)]);
        d.g.push_back(std::move(g));
    }
    return d;
}

std::vector<Complex> disk_fourier_solve(double radius, const PhysicalParams& params,
                                        const std::vector<Complex>& fmodes) {
    if (fmodes.size() % 2 == 0) fail(Err::DomainError, "mode vector must have odd length (-N..N)");
    int N = int(fmodes.size() / 2);
    double k = params.k, a = radius;
    auto jn = bessel_jn(N + 1, k * a);
    std::vector<Complex> amodes(fmodes.size());
    for (int n = -N; n <= N; ++n) {
        int m = std::abs(n);
        double Jm = jn[size_t(m)];
        double Jm_prev = (m == 0) ? -jn[1] : jn[size_t(m - 1)]; // J_{-1} = -J_1
        double Jp = Jm_prev - (double(m) / (k * a)) * Jm;       // J_m'(ka)
        Complex denom = (params.c2 - params.c1 * double(m) * double(m) / (a * a)) * Jm + k * Jp;
        if (std::abs(denom) < 1e-12)
            fail(Err::ModeResonance, "disk mode denominator nearly vanishes");
        amodes[size_t(n + N)] = fmodes[size_t(n + N)] / denom;
    }
    return amodes;
}

Complex disk_fourier_eval(const std::vector<Complex>& amodes, double k, Vec2 x) {
    // radial basis J_{|n|}(kr) e^{i n th}, matching the solve's denominators
    int N = int(amodes.size() / 2);
    double r = norm(x), th = std::atan2(x.y, x.x);
    auto jn = bessel_jn(N, k * r);
    Complex u = 0.0;
    for (int n = -N; n <= N; ++n)
        u += amodes[size_t(n + N)] * jn[size_t(std::abs(n))] * std::exp(I * double(n) * th);
    return u;
}

OffsetCurve make_offset(const BoundaryComponent& comp, double h) {
    OffsetCurve oc;
    oc.base = &comp;
    oc.h = h;
    for (const auto& p : comp.panels) {
        for (int q = 0; q < p.order; ++q) {
            double fac = 1.0 - h * p.kappa[size_t(q)];
            if (fac <= 0.0) fail(Err::DomainError, "offset curve folds over");
            oc.x.push_back(p.x[size_t(q)] - h * p.nrm[size_t(q)]);
            oc.nrm.push_back(p.nrm[size_t(q)]);
            oc.kappa.push_back(p.kappa[size_t(q)] / fac);
            oc.w.push_back(p.w[size_t(q)] * fac);
            oc.speed_scale.push_back(fac);
        }
    }
    // admissibility: offset nodes stay clear of each other
    double dmin = 1e300;
    for (size_t i = 0; i < oc.x.size(); ++i)
        for (size_t j = i + 1; j < oc.x.size(); ++j) dmin = std::min(dmin, norm(oc.x[i] - oc.x[j]));
    if (!(dmin > 0.0)) fail(Err::DomainError, "offset curve self-intersects");
    return oc;
}

namespace {

class TppKernel : public KernelDef {
public:
    Complex eval(const TargetPoint& tgt, const SourcePoint& src) const override {
        return Complex(kernel_Tpp(tgt.x, tgt.nx, src.y, src.ny), 0.0);
    }
    const char* name() const override { return "T''"; }
};

class DppKernel : public KernelDef {
public:
    explicit DppKernel(double k) : k_(k) {}
    Complex eval(const TargetPoint& tgt, const SourcePoint& src) const override {
        KernelPoint pt;
        pt.k = k_;
        pt.x = tgt.x;
        pt.nx = tgt.nx;
        pt.y = src.y;
        pt.ny = src.ny;
        return kernel_Dprimeprime(pt);
    }
    const char* name() const override { return "D''"; }

private:
    double k_;
};

// targets offset from selected nodes by signed h along the normal
std::vector<TargetPoint> offset_probe_targets(const BoundaryComponent& comp,
                                              const std::vector<int>& probes, double h) {
    auto on = surface_targets(comp);
    std::vector<TargetPoint> tg;
    for (int i : probes) {
        TargetPoint t = on[size_t(i)];
        t.x = t.x - h * t.nx; // +h is the interior side
        t.on_comp = nullptr;
        t.on_panel = -1;
        tg.push_back(t);
    }
    return tg;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    size_t n = xs.size();
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

} // namespace

OffsetLimitReport offset_limit_test(const BoundaryComponent& comp, double k,
                                    const std::function<Complex(double)>& sigma_of_s,
                                    const std::function<Complex(double)>& lap_sigma_of_s, double h0,
                                    const AssembleOptions& opt) {
    if (!comp.closed) fail(Err::OpenCurve, "offset limit experiments run on closed components");
    OffsetLimitReport rep;
    Vec sigma(comp.nnodes());
    {
        int i = 0;
        for (const auto& p : comp.panels)
            for (int q = 0; q < p.order; ++q, ++i) sigma(i) = sigma_of_s(p.s[size_t(q)]);
    }
    std::vector<int> probes{1, comp.nnodes() / 3, (2 * comp.nnodes()) / 3};
    auto S = make_layer_kernel(LayerKind::S, k);
    const auto& rule = legendre_rule(comp.order);

    // Lemma 3.1: two-sided difference of the surface Laplacian of S sigma
    auto lap_on_offset = [&](double h) {
        // values of S sigma at all offset nodes, then per-panel spectral d2/ds2
        OffsetCurve oc = make_offset(comp, h);
        std::vector<TargetPoint> tg;
        for (size_t i = 0; i < oc.x.size(); ++i) {
            TargetPoint t;
            t.x = oc.x[i];
            t.nx = oc.nrm[i];
            tg.push_back(t);
        }
        Vec vals = assemble_block(*S, {&comp}, false, tg, opt).m * sigma;
        Vec lap(vals.size());
        int o = comp.order;
        for (int ip = 0; ip < comp.npanels(); ++ip) {
            const Panel& p = comp.panels[size_t(ip)];
            Eigen::MatrixXcd Ds(o, o);
            for (int r = 0; r < o; ++r)
                for (int c = 0; c < o; ++c)
                    Ds(r, c) = rule.diff[size_t(r) * size_t(o) + size_t(c)] /
                               (p.half() * p.speed[size_t(r)] * oc.speed_scale[size_t(ip * o + r)]);
            lap.segment(ip * o, o) = Ds * (Ds * vals.segment(ip * o, o));
        }
        return lap;
    };

    std::vector<double> hs{h0, 0.5 * h0, 0.25 * h0};
    for (double h : hs) {
        Vec inside = lap_on_offset(h), outside = lap_on_offset(-h);
        double diff = 0.0;
        for (int i : probes) diff = std::max(diff, std::abs(inside(i) - outside(i)));
        rep.lemma31_two_sided.push_back(diff);
    }
    rep.lemma31_rate = std::log2(rep.lemma31_two_sided[0] / rep.lemma31_two_sided[1]);

    // T'' and D'' half-jumps with Richardson extrapolation in h
    auto half_jump = [&](const KernelDef& ker, double h) {
        Vec in = assemble_block(ker, {&comp}, false, offset_probe_targets(comp, probes, h), opt).m * sigma;
        Vec out = assemble_block(ker, {&comp}, false, offset_probe_targets(comp, probes, -h), opt).m * sigma;
        return Vec(0.5 * (in - out));
    };
    auto richardson = [&](const KernelDef& ker) {
        Vec v1 = half_jump(ker, h0), v2 = half_jump(ker, 0.5 * h0), v3 = half_jump(ker, 0.25 * h0);
        Vec w1 = 2.0 * v2 - v1, w2 = 2.0 * v3 - v2;
        return Vec(w2 + (w2 - w1) / 3.0);
    };

    TppKernel tpp;
    Vec tj = richardson(tpp);
    double acc = 0.0;
    for (size_t j = 0; j < probes.size(); ++j) {
        auto on = surface_targets(comp)[size_t(probes[j])];
        acc += std::abs(tj(int(j)) / sigma_of_s(on.s));
    }
    rep.tpp_jump = acc / double(probes.size());

    DppKernel dpp(k);
    Vec dj = richardson(dpp);
    // least squares for alpha * lap(sigma) + beta * sigma = jump at the probes
    Eigen::MatrixXcd A(probes.size(), 2);
    Vec b(probes.size());
    auto on = surface_targets(comp);
    for (size_t j = 0; j < probes.size(); ++j) {
        double s = on[size_t(probes[j])].s;
        A(int(j), 0) = lap_sigma_of_s(s);
        A(int(j), 1) = sigma_of_s(s);
        b(int(j)) = dj(int(j));
    }
    Eigen::Vector2cd coef = (A.adjoint() * A).ldlt().solve(A.adjoint() * b);
    rep.dpp_alpha = coef(0).real();
    rep.dpp_beta = coef(1).real();
    return rep;
}

namespace {

Panel::PointData point_at_arclength(const BoundaryComponent& comp, int end, double d) {
    double target_s = (end == 0) ? d : comp.length - d;
    for (const auto& p : comp.panels) {
        if (target_s <= p.s_begin + p.len + 1e-14 && target_s >= p.s_begin - 1e-14) {
            double lo = p.t0, hi = p.t1;
            const auto& rule = legendre_rule(comp.order);
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                (p.at(mid, rule).s < target_s ? lo : hi) = mid;
            }
            return p.at(0.5 * (lo + hi), rule);
        }
    }
    fail(Err::DomainError, "arclength outside the component");
}

} // namespace

CornerScanReport corner_kernel_scan(const BoundaryComponent& star, int star_end,
                                    const BoundaryComponent& circ, int circ_end, double k,
                                    bool with_fins, int jmin, int jmax) {
    CornerScanReport rep;
    auto star_ep = star.endpoint(star_end);
    auto circ_ep = circ.endpoint(circ_end);
    if (norm(star_ep.x - circ_ep.x) > 1e-9) fail(Err::GeometryViolation, "components do not share the corner");

    Vec2 p0 = star_ep.x;
    Vec2 ax_star = star_ep.nrm, ax_circ = circ_ep.nrm;
    auto reflect = [](Vec2 p, Vec2 origin, Vec2 axis) {
        Vec2 v = p - origin;
        double a = dot(v, axis);
        return origin + 2.0 * a * axis - v;
    };
    auto reflect_dir = [](Vec2 v, Vec2 axis) {
        double a = dot(v, axis);
        return 2.0 * a * axis - v;
    };

    double l0 = std::min(star.length, circ.length) * 0.49;
    std::vector<double> logd, logDp, logSt;
    for (int j = jmin; j <= jmax; ++j) {
        double d = l0 * std::ldexp(1.0, -j);
        auto ys = point_at_arclength(star, star_end, d);  // source on the star
        auto xc = point_at_arclength(circ, circ_end, d);  // target on the circ
        KernelPoint pt;
        pt.k = k;
        pt.x = xc.x;
        pt.nx = xc.nrm;
        pt.y = ys.x;
        pt.ny = ys.nrm;
        Complex dp = kernel_Dprime(pt);
        // d/dtau_x G(x on star, y on circ): the F_i S~ singular part
        auto xs = ys;                                   // target on the star side
        auto yc = xc;                                   // source on the circ side
        Complex st = -0.25 * I * k * hankel01(k * norm(xs.x - yc.x)).h1 *
                     (dot(xs.tau, xs.x - yc.x) / norm(xs.x - yc.x));
        if (with_fins) {
            KernelPoint pf = pt;
            pf.y = reflect(ys.x, p0, ax_star);
            pf.ny = reflect_dir(ys.nrm, ax_star);
            dp += kernel_Dprime(pf); // even extension on the star
            Vec2 yf = reflect(yc.x, p0, ax_circ);
            Complex stf = -0.25 * I * k * hankel01(k * norm(xs.x - yf)).h1 *
                          (dot(xs.tau, xs.x - yf) / norm(xs.x - yf));
            st -= stf;               // odd extension on the circ
        }
        rep.d.push_back(d);
        rep.dprime_mag.push_back(std::abs(dp));
        rep.stau_mag.push_back(std::abs(st));
        logd.push_back(std::log(d));
        logDp.push_back(std::log(std::max(std::abs(dp), 1e-300)));
        logSt.push_back(std::log(std::max(std::abs(st), 1e-300)));
    }
    rep.dprime_slope = fit_slope(logd, logDp);
    rep.stau_slope = fit_slope(logd, logSt);
    return rep;
}

} // namespace vtbem
