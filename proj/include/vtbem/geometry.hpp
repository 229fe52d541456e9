#ifndef VTBEM_GEOMETRY_HPP
#define VTBEM_GEOMETRY_HPP

#include <optional>
#include <vector>

#include "vtbem/curve.hpp"
#include "vtbem/legendre.hpp"
#include "vtbem/types.hpp"

namespace vtbem {

struct Panel {
    CurvePtr curve;
    double t0 = 0.0, t1 = 0.0; // parameter interval
    int order = 16;
    std::vector<double> tnode;  // node parameters
    std::vector<Vec2> x, tau, nrm;
    std::vector<double> kappa, speed, w, s; // arclength weight and coordinate per node
    std::vector<double> speed_cf;           // Legendre coefficients of speed
    double s_begin = 0.0, len = 0.0;
    Vec2 center;         // bounding circle
    double radius = 0.0;
    bool flip_frame = false; // reflected panels carry the mirrored frame
    bool knot_interior = false; // a spline knot lies strictly inside

    double half() const { return 0.5 * (t1 - t0); }
    double tmid() const { return 0.5 * (t0 + t1); }
    double ref_to_param(double xi) const { return tmid() + half() * xi; }
    double param_to_ref(double t) const { return (t - tmid()) / half(); }

    // point data at an arbitrary parameter inside the panel
    struct PointData {
        Vec2 x, tau, nrm;
        double kappa, speed, s;
    };
    PointData at(double t, const LegendreRule& rule) const;
};

enum class CompKind { Star, Circ };

struct Fin {
    int end = 0;        // 0: corner at t=0 / s=0, 1: corner at t=1 / s=L
    double parity = 1.0; // +1 even (Star), -1 odd (Circ)
    double length = 0.0;
    Vec2 corner, axis; // reflection line through corner along axis
    std::vector<Panel> panels;
    std::vector<int> base_panel; // base panel mirrored by each fin panel
};

struct BoundaryComponent {
    CompKind kind = CompKind::Star;
    CurvePtr curve;
    bool closed = true;
    int order = 16;
    std::vector<Panel> panels;
    double length = 0.0;
    std::vector<Fin> fins;

    int npanels() const { return int(panels.size()); }
    int nnodes() const { return npanels() * order; }
    // endpoint frame (exact curve data, not node extrapolation)
    Panel::PointData endpoint(int end) const;
    const Fin* fin_at(int end) const;
};

struct CornerReport {
    Vec2 pos;
    int star_comp = -1, star_end = -1;
    int circ_comp = -1, circ_end = -1;
    double angle_error = 0.0;   // |tau_star . tau_circ| at the corner
    double circ_curvature = 0.0;
};

// Panelize with every panel arclength below max_len. Closed components are
// rounded up to an even panel count. extra_breaks pins panel boundaries at
// given parameters (corner pieces can then stay fixed across resolutions).
// Degenerate (stationary) curves are rejected; self-intersection is not
// checked.
BoundaryComponent panelize(CurvePtr curve, CompKind kind, double max_len, int order = 16,
                           const std::vector<double>& extra_breaks = {});

// Dyadically refine the panel adjacent to the given end (depth halvings).
BoundaryComponent dyadic_refine(const BoundaryComponent& comp, int end, int depth);

// Split every panel in two (panel count doubles, fins are dropped and must be
// rebuilt by the caller if needed).
BoundaryComponent split_all_panels(const BoundaryComponent& comp);

// Mirror the first R of arclength from the given end across the line spanned
// by the endpoint normal.
Fin build_fin(const BoundaryComponent& comp, int end, double R);

// Case II constraint check; throws GeometryViolation on failure.
std::vector<CornerReport> validate_case2(const std::vector<BoundaryComponent>& stars,
                                         const std::vector<BoundaryComponent>& circs,
                                         double tol = 1e-10);

double total_weight(const BoundaryComponent& comp);

} // namespace vtbem

#endif
