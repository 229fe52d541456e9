#include "vtbem/curve.hpp"

#include <algorithm>
#include <cmath>

namespace vtbem {

namespace {

class CircleCurve : public Curve {
public:
    CircleCurve(Vec2 c, double r, bool ccw) : c_(c), r_(r), sgn_(ccw ? 1.0 : -1.0) {
        if (r <= 0.0) fail(Err::DegenerateCurve, "circle radius must be positive");
    }
    bool closed() const override { return true; }
    void jet(double t, int order, Vec2* out) const override {
        double w = sgn_ * 2.0 * PI;
        double th = w * t;
        Vec2 e{std::cos(th), std::sin(th)};
        double wj = 1.0;
        for (int j = 0; j <= order; ++j) {
            out[j] = (j == 0) ? c_ + r_ * e : (r_ * wj) * e;
            wj *= w;
            e = Vec2{-e.y, e.x}; // each derivative rotates by pi/2
        }
    }

private:
    Vec2 c_;
    double r_, sgn_;
};

class SegmentCurve : public Curve {
public:
    SegmentCurve(Vec2 a, Vec2 b) : a_(a), d_(b - a) {
        if (norm(d_) == 0.0) fail(Err::DegenerateCurve, "segment endpoints coincide");
    }
    bool closed() const override { return false; }
    void jet(double t, int order, Vec2* out) const override {
        out[0] = a_ + t * d_;
        if (order >= 1) out[1] = d_;
        for (int j = 2; j <= order; ++j) out[j] = Vec2{0.0, 0.0};
    }

private:
    Vec2 a_, d_;
};

class ArcCurve : public Curve {
public:
    ArcCurve(Vec2 c, double r, double th0, double th1) : c_(c), r_(r), th0_(th0), dth_(th1 - th0) {
        if (r <= 0.0 || dth_ == 0.0) fail(Err::DegenerateCurve, "degenerate arc");
    }
    bool closed() const override { return false; }
    void jet(double t, int order, Vec2* out) const override {
        double th = th0_ + dth_ * t;
        Vec2 e{std::cos(th), std::sin(th)};
        double wj = 1.0;
        for (int j = 0; j <= order; ++j) {
            out[j] = (j == 0) ? c_ + r_ * e : (r_ * wj) * e;
            wj *= dth_;
            e = Vec2{-e.y, e.x};
        }
    }

private:
    Vec2 c_;
    double r_, th0_, dth_;
};

// closed curve stored as a complex Fourier polynomial sum_k g_k e^{2 pi i k t}
class FourierCurve : public Curve {
public:
    FourierCurve(Vec2 center, std::vector<Complex> coef, int kmin) : c_(center), g_(std::move(coef)), kmin_(kmin) {}
    bool closed() const override { return true; }
    void jet(double t, int order, Vec2* out) const override {
        for (int j = 0; j <= order; ++j) out[j] = (j == 0) ? c_ : Vec2{0.0, 0.0};
        for (size_t i = 0; i < g_.size(); ++i) {
            if (g_[i] == Complex(0.0)) continue;
            int k = kmin_ + int(i);
            Complex w(0.0, 2.0 * PI * k);
            Complex e = g_[i] * std::exp(Complex(0.0, 2.0 * PI * k * t));
            for (int j = 0; j <= order; ++j) {
                out[j] += Vec2{e.real(), e.imag()};
                e *= w;
            }
        }
    }

private:
    Vec2 c_;
    std::vector<Complex> g_;
    int kmin_;
};

class GraphTrigCurve : public Curve {
public:
    GraphTrigCurve(double x0, double x1, std::vector<double> a, std::vector<double> b)
        : x0_(x0), dx_(x1 - x0), a_(std::move(a)), b_(std::move(b)) {
        if (dx_ == 0.0) fail(Err::DegenerateCurve, "graph curve has zero horizontal extent");
    }
    bool closed() const override { return false; }
    void jet(double t, int order, Vec2* out) const override {
        out[0] = Vec2{x0_ + dx_ * t, 0.0};
        if (order >= 1) out[1] = Vec2{dx_, 0.0};
        for (int j = 2; j <= order; ++j) out[j] = Vec2{0.0, 0.0};
        for (size_t m = 0; m < a_.size(); ++m) {
            if (a_[m] == 0.0) continue;
            double w = PI * double(m);
            double cs = a_[m] * std::cos(w * t), sn = a_[m] * std::sin(w * t);
            double cyc[4] = {cs, -sn, -cs, sn}; // derivative cycle of cos
            double wj = 1.0;
            for (int j = 0; j <= order; ++j) {
                out[j].y += wj * cyc[j % 4];
                wj *= w;
            }
        }
        for (size_t m = 0; m < b_.size(); ++m) {
            if (b_[m] == 0.0) continue;
            double w = PI * double(m + 1);
            double cs = b_[m] * std::cos(w * t), sn = b_[m] * std::sin(w * t);
            double cyc[4] = {sn, cs, -sn, -cs}; // derivative cycle of sin
            double wj = 1.0;
            for (int j = 0; j <= order; ++j) {
                out[j].y += wj * cyc[j % 4];
                wj *= w;
            }
        }
    }

private:
    double x0_, dx_;
    std::vector<double> a_, b_;
};

class SplineCurve : public Curve {
public:
    SplineCurve(std::vector<Vec2> pts, bool closed) : closed_(closed) {
        size_t n = pts.size();
        if (n < 3) fail(Err::DegenerateCurve, "spline needs at least 3 points");
        nseg_ = closed ? n : n - 1;
        coef_x_ = solve(pts, true);
        coef_y_ = solve(pts, false);
    }
    bool closed() const override { return closed_; }
    void jet(double t, int order, Vec2* out) const override {
        double u = t * double(nseg_);
        int seg = std::clamp(int(std::floor(u)), 0, int(nseg_) - 1);
        double v = u - seg;
        const auto& cx = coef_x_[seg];
        const auto& cy = coef_y_[seg];
        double f = 1.0;
        for (int j = 0; j <= order; ++j) {
            double px = 0.0, py = 0.0;
            for (int d = 3; d >= j; --d) {
                double fall = 1.0;
                for (int q = 0; q < j; ++q) fall *= double(d - q);
                double vp = 1.0;
                for (int q = 0; q < d - j; ++q) vp *= v;
                px += cx[d] * fall * vp;
                py += cy[d] * fall * vp;
            }
            out[j] = Vec2{px * f, py * f};
            f *= double(nseg_); // d/dt = nseg * d/dv
        }
    }
    std::vector<double> mandatory_breaks() const override {
        std::vector<double> b;
        for (size_t i = 1; i < nseg_; ++i) b.push_back(double(i) / double(nseg_));
        return b;
    }
    bool jet_smooth_between(double t0, double t1) const override {
        double lo = std::min(t0, t1) * double(nseg_) + 1e-12;
        double hi = std::max(t0, t1) * double(nseg_) - 1e-12;
        return std::floor(lo) >= std::floor(hi);
    }

private:
    // segment coefficients: p(v) = c0 + c1 v + c2 v^2 + c3 v^3, v in [0,1]
    std::vector<std::array<double, 4>> solve(const std::vector<Vec2>& pts, bool xcomp) {
        size_t n = pts.size();
        auto val = [&](size_t i) { return xcomp ? pts[i % n].x : pts[i % n].y; };
        std::vector<double> d2(n, 0.0);
        if (!closed_) {
            // natural end conditions, tridiagonal in the interior second derivatives
            if (n > 2) {
                std::vector<double> b(n, 4.0), r(n, 0.0);
                for (size_t i = 1; i + 1 < n; ++i) r[i] = 6.0 * (val(i + 1) - 2.0 * val(i) + val(i - 1));
                for (size_t i = 2; i + 1 < n; ++i) {
                    double w = 1.0 / b[i - 1];
                    b[i] -= w;
                    r[i] -= w * r[i - 1];
                }
                for (size_t i = n - 2; i >= 1; --i) {
                    d2[i] = (r[i] - (i + 2 < n ? d2[i + 1] : 0.0)) / b[i];
                    if (i == 1) break;
                }
            }
        } else {
            std::vector<double> r(n);
            for (size_t i = 0; i < n; ++i) r[i] = 6.0 * (val(i + 1) - 2.0 * val(i) + val((i + n - 1) % n));
            d2 = cyclic_solve(std::move(r));
        }
        std::vector<std::array<double, 4>> coef(nseg_);
        for (size_t i = 0; i < nseg_; ++i) {
            double yi = val(i), yi1 = val(i + 1);
            double mi = d2[i % n], mi1 = d2[(i + 1) % n];
            coef[i] = {yi, (yi1 - yi) - (2.0 * mi + mi1) / 6.0, mi / 2.0, (mi1 - mi) / 6.0};
        }
        return coef;
    }

    // periodic tridiagonal (diag 4, off-diag 1) via Sherman-Morrison
    std::vector<double> cyclic_solve(std::vector<double> r) {
        size_t n = r.size();
        double gamma = -4.0;
        std::vector<double> diag(n, 4.0), u(n, 0.0);
        diag[0] -= gamma;
        diag[n - 1] -= 1.0 / gamma;
        u[0] = gamma;
        u[n - 1] = 1.0;
        auto tri = [&](std::vector<double> rhs) {
            std::vector<double> b = diag, x(n);
            for (size_t i = 1; i < n; ++i) {
                double w = 1.0 / b[i - 1];
                b[i] -= w;
                rhs[i] -= w * rhs[i - 1];
            }
            x[n - 1] = rhs[n - 1] / b[n - 1];
            for (size_t i = n - 1; i >= 1; --i) x[i - 1] = (rhs[i - 1] - x[i]) / b[i - 1];
            return x;
        };
        auto x = tri(r);
        auto z = tri(u);
        double fact = (x[0] + x[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);
        for (size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
        return x;
    }

    bool closed_;
    size_t nseg_ = 0;
    std::vector<std::array<double, 4>> coef_x_, coef_y_;
};

class ReflectedCurveImpl : public Curve {
public:
    ReflectedCurveImpl(CurvePtr base, Vec2 p0, Vec2 axis) : base_(std::move(base)), p0_(p0) {
        double n2 = norm(axis);
        if (n2 == 0.0) fail(Err::DegenerateCurve, "reflection axis is zero");
        Vec2 a = axis * (1.0 / n2);
        rxx_ = 2.0 * a.x * a.x - 1.0;
        rxy_ = 2.0 * a.x * a.y;
        ryy_ = 2.0 * a.y * a.y - 1.0;
    }
    bool closed() const override { return false; }
    void jet(double t, int order, Vec2* out) const override {
        base_->jet(t, order, out);
        out[0] -= p0_;
        for (int j = 0; j <= order; ++j) out[j] = apply(out[j]);
        out[0] += p0_;
    }
    std::vector<double> mandatory_breaks() const override { return base_->mandatory_breaks(); }
    bool jet_smooth_between(double t0, double t1) const override { return base_->jet_smooth_between(t0, t1); }

private:
    Vec2 apply(const Vec2& v) const { return {rxx_ * v.x + rxy_ * v.y, rxy_ * v.x + ryy_ * v.y}; }

    CurvePtr base_;
    Vec2 p0_;
    double rxx_, rxy_, ryy_;
};

class TransformedCurveImpl : public Curve {
public:
    TransformedCurveImpl(CurvePtr base, double angle, Vec2 shift)
        : base_(std::move(base)), c_(std::cos(angle)), s_(std::sin(angle)), shift_(shift) {}
    bool closed() const override { return base_->closed(); }
    void jet(double t, int order, Vec2* out) const override {
        base_->jet(t, order, out);
        for (int j = 0; j <= order; ++j) out[j] = Vec2{c_ * out[j].x - s_ * out[j].y, s_ * out[j].x + c_ * out[j].y};
        out[0] += shift_;
    }
    std::vector<double> mandatory_breaks() const override { return base_->mandatory_breaks(); }
    bool jet_smooth_between(double t0, double t1) const override { return base_->jet_smooth_between(t0, t1); }

private:
    CurvePtr base_;
    double c_, s_;
    Vec2 shift_;
};

class ReversedCurveImpl : public Curve {
public:
    explicit ReversedCurveImpl(CurvePtr base) : base_(std::move(base)) {}
    bool closed() const override { return base_->closed(); }
    void jet(double t, int order, Vec2* out) const override {
        base_->jet(1.0 - t, order, out);
        for (int j = 1; j <= order; j += 2) out[j] = -out[j];
    }
    std::vector<double> mandatory_breaks() const override {
        auto b = base_->mandatory_breaks();
        for (auto& t : b) t = 1.0 - t;
        std::sort(b.begin(), b.end());
        return b;
    }
    bool jet_smooth_between(double t0, double t1) const override {
        return base_->jet_smooth_between(1.0 - t1, 1.0 - t0);
    }

private:
    CurvePtr base_;
};

} // namespace

CurvePtr make_circle(Vec2 center, double radius, bool ccw) {
    return std::make_shared<CircleCurve>(center, radius, ccw);
}

CurvePtr make_segment(Vec2 a, Vec2 b) { return std::make_shared<SegmentCurve>(a, b); }

CurvePtr make_arc(Vec2 center, double radius, double theta0, double theta1) {
    return std::make_shared<ArcCurve>(center, radius, theta0, theta1);
}

CurvePtr make_polar_trig(Vec2 center, double r0, std::vector<double> ac, std::vector<double> as) {
    // r(th) e^{i th}: rho_0 = r0, rho_m = r0 (ac_m - i as_m)/2, rho_{-m} = conj;
    // the factor e^{i th} shifts every mode up by one
    int M = int(std::max(ac.size(), as.size()));
    int kmin = -M + 1, kmax = M + 1;
    std::vector<Complex> g(size_t(kmax - kmin + 1), Complex(0.0));
    auto at = [&](int k) -> Complex& { return g[size_t(k - kmin)]; };
    at(1) += r0;
    for (int m = 1; m <= M; ++m) {
        double a = m <= int(ac.size()) ? ac[m - 1] : 0.0;
        double b = m <= int(as.size()) ? as[m - 1] : 0.0;
        Complex rho = 0.5 * r0 * Complex(a, -b);
        at(m + 1) += rho;
        at(-m + 1) += std::conj(rho);
    }
    return std::make_shared<FourierCurve>(center, std::move(g), kmin);
}

CurvePtr make_graph_cosine(double x0, double x1, std::vector<double> a) {
    return std::make_shared<GraphTrigCurve>(x0, x1, std::move(a), std::vector<double>{});
}

CurvePtr make_graph_trig(double x0, double x1, std::vector<double> a, std::vector<double> b) {
    return std::make_shared<GraphTrigCurve>(x0, x1, std::move(a), std::move(b));
}

CurvePtr make_cubic_spline(std::vector<Vec2> pts, bool closed) {
    return std::make_shared<SplineCurve>(std::move(pts), closed);
}

CurvePtr make_reflected(CurvePtr base, Vec2 p0, Vec2 axis) {
    return std::make_shared<ReflectedCurveImpl>(std::move(base), p0, axis);
}

CurvePtr make_reversed(CurvePtr base) { return std::make_shared<ReversedCurveImpl>(std::move(base)); }

CurvePtr make_transformed(CurvePtr base, double angle, Vec2 shift) {
    return std::make_shared<TransformedCurveImpl>(std::move(base), angle, shift);
}

} // namespace vtbem
