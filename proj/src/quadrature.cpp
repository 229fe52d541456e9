#include "vtbem/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <thread>

namespace vtbem {

std::vector<TargetPoint> surface_targets(const BoundaryComponent& comp) {
    std::vector<TargetPoint> tgts;
    tgts.reserve(size_t(comp.nnodes()));
    for (int i = 0; i < comp.npanels(); ++i) {
        const Panel& p = comp.panels[size_t(i)];
        for (int q = 0; q < p.order; ++q) {
            TargetPoint t;
            t.x = p.x[size_t(q)];
            t.nx = p.nrm[size_t(q)];
            t.kappa = p.kappa[size_t(q)];
            t.s = p.s[size_t(q)];
            t.t = p.tnode[size_t(q)];
            t.on_comp = &comp;
            t.on_panel = i;
            tgts.push_back(t);
        }
    }
    return tgts;
}

bool KernelDef::near(const TargetPoint& tgt, const Panel& p, const BoundaryComponent& comp) const {
    (void)comp;
    return norm(tgt.x - p.center) <= p.radius + p.len;
}

namespace {

class HelmholtzLayerKernel : public KernelDef {
public:
    HelmholtzLayerKernel(LayerKind kind, double k) : kind_(kind), k_(k) {}

    bool integrable() const override { return kind_ != LayerKind::SppRaw && kind_ != LayerKind::DppRaw; }

    const char* name() const override {
        switch (kind_) {
            case LayerKind::S: return "S";
            case LayerKind::D: return "D";
            case LayerKind::Sprime: return "S'";
            case LayerKind::Dprime: return "D'";
            case LayerKind::CombinedDpSpp: return "D'+S''";
            case LayerKind::SppRaw: return "S''";
            case LayerKind::DppRaw: return "D''";
        }
        return "?";
    }

    Complex eval(const TargetPoint& tgt, const SourcePoint& src) const override {
        GeomInv g;
        bool same_chart =
            tgt.on_comp && tgt.on_comp == src.comp && tgt.on_comp->curve.get() == src.curve;
        if (same_chart && jet_ok(tgt, src)) {
            g = invariants_jets(*src.curve, tgt.t, src.t, src.comp->closed);
        } else {
            g = invariants_coords(tgt.x, tgt.nx, src.y, src.ny);
        }
        if (g.r == 0.0) {
            // a deeply subdivided box can land a quadrature node exactly on
            // the target; the boxes there carry ~2^-45 of the weight, so the
            // on-curve limits (and a floor under the log) are exact enough
            switch (kind_) {
                case LayerKind::S: g.r = 1e-280; g.r2 = g.r * g.r; break;
                case LayerKind::D: return Complex(-src.kappa / (4.0 * PI), 0.0);
                case LayerKind::Sprime: return Complex(-tgt.kappa / (4.0 * PI), 0.0);
                case LayerKind::CombinedDpSpp: return kernel_combined_DpSpp(k_, g, tgt.kappa);
                default: break;
            }
        }
        switch (kind_) {
            case LayerKind::S: return kernel_S(k_, g);
            case LayerKind::D: return kernel_D(k_, g);
            case LayerKind::Sprime: return kernel_Sprime(k_, g);
            case LayerKind::Dprime: return kernel_Dprime(k_, g);
            case LayerKind::CombinedDpSpp: return kernel_combined_DpSpp(k_, g, tgt.kappa);
            default: break;
        }
        fail(Err::FinitePartKernel, "raw finite-part kernel evaluated");
    }

private:
    bool jet_ok(const TargetPoint& tgt, const SourcePoint& src) const {
        double ds = std::abs(tgt.s - src.s);
        if (src.comp->closed) ds = std::min(ds, src.comp->length - ds);
        if (k_ * ds >= JET_WINDOW) return false;
        if (src.comp->closed) return true;
        return src.curve->jet_smooth_between(std::min(tgt.t, src.t), std::max(tgt.t, src.t));
    }

    LayerKind kind_;
    double k_;
};

struct PanelJob {
    const BoundaryComponent* comp;
    const Panel* panel;
    int col0;
    double sign; // fin parity
    bool is_fin;
};

class RowAssembler {
public:
    RowAssembler(const KernelDef& ker, const LegendreRule& rule, const AssembleOptions& opt)
        : ker_(ker), rule_(rule), opt_(opt) {}

    void panel_row(const TargetPoint& tgt, const PanelJob& job, Complex* row) {
        const Panel& p = *job.panel;
        bool self = !job.is_fin && tgt.on_comp == job.comp && tgt.on_panel >= 0 &&
                    &job.comp->panels[size_t(tgt.on_panel)] == &p;
        if (!self && !ker_.near(tgt, p, *job.comp)) {
            for (int q = 0; q < p.order; ++q) {
                SourcePoint sp;
                sp.y = p.x[size_t(q)];
                sp.ny = p.nrm[size_t(q)];
                sp.kappa = p.kappa[size_t(q)];
                sp.s = p.s[size_t(q)];
                sp.t = p.tnode[size_t(q)];
                sp.curve = p.curve.get();
                sp.comp = job.comp;
                row[job.col0 + q] += job.sign * p.w[size_t(q)] * ker_.eval(tgt, sp);
            }
            return;
        }
        buf_.assign(size_t(p.order), Complex(0.0));
        scale_ = 0.0;
        if (self && tgt.t > p.t0 + 1e-14 && tgt.t < p.t1 - 1e-14) {
            // split at the target so the diagonal kink sits on a box edge
            adaptive(tgt, job, p.t0, tgt.t, box(tgt, job, p.t0, tgt.t), 0);
            adaptive(tgt, job, tgt.t, p.t1, box(tgt, job, tgt.t, p.t1), 0);
        } else {
            adaptive(tgt, job, p.t0, p.t1, box(tgt, job, p.t0, p.t1), 0);
        }
        for (int q = 0; q < p.order; ++q) row[job.col0 + q] += job.sign * buf_[size_t(q)];
    }

private:
    using Row = Eigen::Matrix<Complex, 1, Eigen::Dynamic>;

    Row box(const TargetPoint& tgt, const PanelJob& job, double a, double b) {
        const Panel& p = *job.panel;
        Row r = Row::Zero(p.order);
        double h = 0.5 * (b - a), m = 0.5 * (a + b);
        for (int q = 0; q < rule_.order; ++q) {
            double t = m + h * rule_.nodes[q];
            auto d = p.at(t, rule_);
            SourcePoint sp;
            sp.y = d.x;
            sp.ny = d.nrm;
            sp.kappa = d.kappa;
            sp.s = d.s;
            sp.t = t;
            sp.curve = p.curve.get();
            sp.comp = job.comp;
            Complex val = ker_.eval(tgt, sp) * (rule_.weights[q] * h * d.speed);
            auto basis = rule_.interp_row(p.param_to_ref(t));
            for (int j = 0; j < p.order; ++j) r(j) += val * basis[size_t(j)];
        }
        return r;
    }

    void adaptive(const TargetPoint& tgt, const PanelJob& job, double a, double b, const Row& parent,
                  int depth) {
        double m = 0.5 * (a + b);
        Row left = box(tgt, job, a, m);
        Row right = box(tgt, job, m, b);
        double err = (parent - left - right).cwiseAbs().maxCoeff();
        scale_ = std::max({scale_, parent.cwiseAbs().maxCoeff()});
        double span = job.panel->t1 - job.panel->t0;
        // absolute target plus the roundoff floor of the integrand magnitude
        double tol_box = opt_.tol * std::max((b - a) / span, 1e-3) + 1e-14 * scale_;
        if (err <= tol_box) {
            for (int j = 0; j < job.panel->order; ++j) buf_[size_t(j)] += left(j) + right(j);
            return;
        }
        if (depth >= opt_.max_depth)
            fail(Err::AdaptiveFailure, std::string("adaptive quadrature stalled for kernel ") + ker_.name());
        adaptive(tgt, job, a, m, left, depth + 1);
        adaptive(tgt, job, m, b, right, depth + 1);
    }

    const KernelDef& ker_;
    const LegendreRule& rule_;
    const AssembleOptions& opt_;
    std::vector<Complex> buf_;
    double scale_ = 0.0;
};

} // namespace

std::unique_ptr<KernelDef> make_layer_kernel(LayerKind kind, double k) {
    return std::make_unique<HelmholtzLayerKernel>(kind, k);
}

OperatorMatrix assemble_block(const KernelDef& kernel,
                              const std::vector<const BoundaryComponent*>& sources, bool use_fins,
                              const std::vector<TargetPoint>& targets, const AssembleOptions& opt) {
    if (!kernel.integrable())
        fail(Err::FinitePartKernel, std::string("kernel ") + kernel.name() + " is finite-part only");
    std::vector<PanelJob> jobs;
    int ncols = 0;
    for (const auto* comp : sources) {
        int comp_col0 = ncols;
        for (int i = 0; i < comp->npanels(); ++i)
            jobs.push_back({comp, &comp->panels[size_t(i)], comp_col0 + i * comp->order, 1.0, false});
        if (use_fins) {
            for (const auto& fin : comp->fins)
                for (size_t j = 0; j < fin.panels.size(); ++j)
                    jobs.push_back({comp, &fin.panels[j], comp_col0 + fin.base_panel[j] * comp->order,
                                    fin.parity, true});
        }
        ncols += comp->nnodes();
    }

    OperatorMatrix out;
    out.kernel = kernel.name();
    out.nsrc = ncols;
    out.ntgt = int(targets.size());
    out.m = Mat::Zero(out.ntgt, ncols);

    const auto& rule = legendre_rule(sources.empty() ? 16 : sources.front()->order);
    int nthreads = std::max(1, opt.nthreads);
    std::exception_ptr first_error;
    std::mutex err_mtx;
    auto work = [&](int lo, int hi) {
        try {
            RowAssembler assembler(kernel, rule, opt);
            std::vector<Complex> row(static_cast<size_t>(ncols));
            for (int i = lo; i < hi; ++i) {
                std::fill(row.begin(), row.end(), Complex(0.0));
                for (const auto& job : jobs) assembler.panel_row(targets[size_t(i)], job, row.data());
                for (int c = 0; c < ncols; ++c) out.m(i, c) = row[size_t(c)];
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mtx);
            if (!first_error) first_error = std::current_exception();
        }
    };
    if (nthreads == 1 || out.ntgt < 2 * nthreads) {
        work(0, out.ntgt);
    } else {
        std::vector<std::thread> pool;
        int chunk = (out.ntgt + nthreads - 1) / nthreads;
        for (int th = 0; th < nthreads; ++th) {
            int lo = th * chunk, hi = std::min(out.ntgt, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

Mat tangential_deriv_matrix(const BoundaryComponent& comp) {
    const auto& rule = legendre_rule(comp.order);
    int n = comp.nnodes();
    Mat D = Mat::Zero(n, n);
    for (int i = 0; i < comp.npanels(); ++i) {
        const Panel& p = comp.panels[size_t(i)];
        int o = p.order;
        double inv_h = 1.0 / p.half();
        for (int r = 0; r < o; ++r)
            for (int c = 0; c < o; ++c)
                D(i * o + r, i * o + c) = rule.diff[size_t(r) * size_t(o) + size_t(c)] * inv_h / p.speed[size_t(r)];
    }
    return D;
}

Eigen::RowVectorXcd endpoint_deriv_row(const BoundaryComponent& comp, int end) {
    if (comp.closed) fail(Err::ClosedCurve, "endpoint derivative of a closed component");
    const auto& rule = legendre_rule(comp.order);
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(comp.nnodes());
    int ip = (end == 0) ? 0 : comp.npanels() - 1;
    const Panel& p = comp.panels[size_t(ip)];
    int o = p.order;
    auto interp = rule.interp_row(end == 0 ? -1.0 : 1.0);
    // differentiate in arclength at the panel nodes, then evaluate the
    // interpolant of the derivative at the panel edge
    for (int c = 0; c < o; ++c) {
        Complex acc = 0.0;
        for (int r = 0; r < o; ++r)
            acc += interp[size_t(r)] * rule.diff[size_t(r) * size_t(o) + size_t(c)] /
                   (p.half() * p.speed[size_t(r)]);
        row(ip * o + c) = acc;
    }
    return row;
}

std::pair<Complex, Complex> endpoint_deriv(const BoundaryComponent& comp, const Vec& values) {
    auto r0 = endpoint_deriv_row(comp, 0);
    auto r1 = endpoint_deriv_row(comp, 1);
    return {(r0 * values)(0), (r1 * values)(0)};
}

} // namespace vtbem
