#ifndef VTBEM_CURVE_HPP
#define VTBEM_CURVE_HPP

#include <memory>
#include <vector>

#include "vtbem/types.hpp"

namespace vtbem {

// Parametric planar curve on t in [0,1] with exact derivative jets. Every
// kind shipped here is piecewise analytic, so jets up to JET_ORDER are
// closed-form (splines report zero beyond their polynomial degree).
class Curve {
public:
    static constexpr int JET_ORDER = 9;

    virtual ~Curve() = default;
    virtual bool closed() const = 0;
    // out[j] = d^j p / dt^j for j = 0..order
    virtual void jet(double t, int order, Vec2* out) const = 0;
    // parameters any panel split must respect (spline knots); in (0,1)
    virtual std::vector<double> mandatory_breaks() const { return {}; }
    // true when the map is analytic on the closed interval [t0,t1]
    virtual bool jet_smooth_between(double t0, double t1) const {
        (void)t0;
        (void)t1;
        return true;
    }

    Vec2 pos(double t) const {
        Vec2 j[1];
        jet(t, 0, j);
        return j[0];
    }
    Vec2 deriv(double t) const {
        Vec2 j[2];
        jet(t, 1, j);
        return j[1];
    }
};

using CurvePtr = std::shared_ptr<const Curve>;

CurvePtr make_circle(Vec2 center, double radius, bool ccw = true);
CurvePtr make_segment(Vec2 a, Vec2 b);
CurvePtr make_arc(Vec2 center, double radius, double theta0, double theta1);
// closed curve r(theta) = r0 (1 + sum_m ac_m cos(m theta) + as_m sin(m theta)),
// coefficient arrays indexed from m = 1
CurvePtr make_polar_trig(Vec2 center, double r0, std::vector<double> ac, std::vector<double> as);
// open graph curve (x0 + (x1-x0) t, sum_m a_m cos(pi m t)); the cosine basis
// has zero slope at both ends, so caps can meet it orthogonally
CurvePtr make_graph_cosine(double x0, double x1, std::vector<double> a);
// cosine plus sine profile terms (sines indexed from m = 1)
CurvePtr make_graph_trig(double x0, double x1, std::vector<double> a, std::vector<double> b);
// C^2 cubic spline through the given points (uniform parameter)
CurvePtr make_cubic_spline(std::vector<Vec2> pts, bool closed);
// p0 + (2 a a^T - I)(p(t) - p0): reflection across the line through p0 along a
CurvePtr make_reflected(CurvePtr base, Vec2 p0, Vec2 axis);
// p(1 - t)
CurvePtr make_reversed(CurvePtr base);
// rigid motion: rot(angle) p(t) + shift
CurvePtr make_transformed(CurvePtr base, double angle, Vec2 shift);

} // namespace vtbem

#endif
