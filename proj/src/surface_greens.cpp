#include "vtbem/surface_greens.hpp"

#include <cmath>

namespace vtbem {

namespace {

// e^{i kGamma |d|} / (2 i kGamma); |.| <= 1/(2|kGamma|) for Im kGamma > 0
Complex image_term(Complex kg, double d) {
    return std::exp(I * kg * std::abs(d)) / (2.0 * I * kg);
}

double dist_to_interval(double x, double a, double b) {
    if (x < a) return a - x;
    if (x > b) return x - b;
    return 0.0;
}

class SurfGreenKernel : public KernelDef {
public:
    explicit SurfGreenKernel(const SurfaceGreens& sg) : sg_(sg) {
        decay_range_ = 37.0 / std::max(sg.kGamma.imag(), 1e-300);
    }

    Complex eval(const TargetPoint& tgt, const SourcePoint& src) const override {
        return sg_.eval(tgt.s, src.s);
    }

    const char* name() const override { return "G_Gamma"; }

    bool near(const TargetPoint& tgt, const Panel& p, const BoundaryComponent& comp) const override {
        (void)comp;
        double s0 = p.s_begin, s1 = p.s_begin + p.len, s = tgt.s, L = sg_.L;
        double d;
        if (sg_.closed) {
            d = dist_to_interval(s, s0, s1);
            d = std::min(d, dist_to_interval(s - L, s0, s1));
            d = std::min(d, dist_to_interval(s + L, s0, s1));
        } else {
            d = dist_to_interval(s, s0, s1);
            d = std::min(d, s + s0);                   // |s + s'| image
            d = std::min(d, (L - s) + (L - s1));       // |s + s' - 2L| image
        }
        return d <= p.len + decay_range_;
    }

private:
    const SurfaceGreens& sg_;
    double decay_range_;
};

} // namespace

Complex SurfaceGreens::eval(double s, double sp) const {
    if (s < -1e-12 || s > L + 1e-12 || sp < -1e-12 || sp > L + 1e-12)
        fail(Err::DomainError, "surface Green's function arguments outside [0, L]");
    Complex acc = 0.0;
    if (closed) {
        acc = image_term(kGamma, s - sp);
        for (int ell = 1; ell < 1000000; ++ell) {
            Complex ring = image_term(kGamma, s - sp - ell * L) + image_term(kGamma, s - sp + ell * L);
            acc += ring;
            if (std::abs(ring) < trunc_eps * std::abs(acc)) break;
        }
    } else {
        acc = image_term(kGamma, s - sp) + image_term(kGamma, s + sp);
        for (int ell = 1; ell < 1000000; ++ell) {
            Complex ring = image_term(kGamma, s - sp - 2.0 * ell * L) +
                           image_term(kGamma, s - sp + 2.0 * ell * L) +
                           image_term(kGamma, s + sp - 2.0 * ell * L) +
                           image_term(kGamma, s + sp + 2.0 * ell * L);
            acc += ring;
            if (std::abs(ring) < trunc_eps * std::abs(acc)) break;
        }
    }
    return acc;
}

Mat SurfaceGreens::matrix(const AssembleOptions& opt) const {
    SurfGreenKernel ker(*this);
    return assemble_block(ker, {comp}, false, surface_targets(*comp), opt).m;
}

Vec SurfaceGreens::end_column(int end) const {
    if (closed) fail(Err::ClosedCurve, "end column of a closed component");
    double se = (end == 0) ? 0.0 : L;
    Vec col(comp->nnodes());
    int i = 0;
    for (const auto& p : comp->panels)
        for (int q = 0; q < p.order; ++q, ++i) col(i) = eval(p.s[size_t(q)], se);
    return col;
}

Mat SurfaceGreens::f_matrix() const {
    if (closed) fail(Err::ClosedCurve, "F_j requires an open component");
    Vec colL = end_column(1), col0 = end_column(0);
    Eigen::RowVectorXcd dL = endpoint_deriv_row(*comp, 1), d0 = endpoint_deriv_row(*comp, 0);
    return colL * dL - col0 * d0;
}

SurfaceGreens make_surface_greens(const BoundaryComponent& comp, Complex kGamma) {
    if (!(kGamma.imag() > 0.0))
        fail(Err::BranchDegenerate, "surface Green's function needs Im kGamma > 0");
    SurfaceGreens sg;
    sg.comp = &comp;
    sg.kGamma = kGamma;
    sg.L = comp.length;
    sg.closed = comp.closed;
    return sg;
}

} // namespace vtbem
