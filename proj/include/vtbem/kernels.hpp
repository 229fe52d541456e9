#ifndef VTBEM_KERNELS_HPP
#define VTBEM_KERNELS_HPP

#include "vtbem/curve.hpp"
#include "vtbem/special.hpp"
#include "vtbem/types.hpp"

namespace vtbem {

// combined-kernel branch switch, in units of k*r
inline constexpr double EPS_SWITCH = 1e-2;
// below k*|ds| the geometric invariants of same-curve pairs come from
// parameter-midpoint jets instead of coordinate differences
inline constexpr double JET_WINDOW = 0.2;

struct KernelPoint {
    Vec2 x, nx;
    double kappa_x = 0.0;
    Vec2 y, ny;
    double kappa_y = 0.0;
    double k = 0.0;
};

// Geometric invariants every layer kernel is built from. sxd/syd/dnd/qm1 are
// the quantities that cancel catastrophically near the diagonal when computed
// from coordinates.
struct GeomInv {
    double r2 = 0.0, r = 0.0;
    double sxd = 0.0; // n_x . (x-y)
    double syd = 0.0; // n_y . (x-y)
    double dnd = 0.0; // (n_x - n_y) . (x-y)
    double qm1 = 0.0; // n_x . n_y - 1
};

GeomInv invariants_coords(const Vec2& x, const Vec2& nx, const Vec2& y, const Vec2& ny);
// same-curve pair, invariants from jets at the parameter midpoint; wrap
// interprets the parameter gap modulo 1 (closed curves)
GeomInv invariants_jets(const Curve& curve, double t_x, double t_y, bool wrap);

Complex kernel_S(double k, const GeomInv& g);       // G
Complex kernel_D(double k, const GeomInv& g);       // d G / d n_y
Complex kernel_Sprime(double k, const GeomInv& g);  // d G / d n_x
Complex kernel_Dprime(double k, const GeomInv& g);  // d2 G / d n_x d n_y

// D' + S'': leading 1/r^2 parts cancel; the full form groups them explicitly,
// the local form splits off the Laplace part so small k*r stays exact
Complex kernel_combined_full(double k, const GeomInv& g);
Complex kernel_combined_local(double k, const GeomInv& g);
// branch dispatch on k*r vs EPS_SWITCH; at r = 0 returns the on-curve limit
// kappa_x^2 / (4 pi)
Complex kernel_combined_DpSpp(double k, const GeomInv& g, double kappa_x);

// KernelPoint convenience wrappers (coordinate invariants)
Complex kernel_D(const KernelPoint& pt);
Complex kernel_Sprime(const KernelPoint& pt);
Complex kernel_Dprime(const KernelPoint& pt);
Complex kernel_combined_DpSpp(const KernelPoint& pt);

// d2/dn_x^2 dG/dn_y — finite-part kernel, off-surface oracle use only
Complex kernel_Dprimeprime(const KernelPoint& pt);
// d2/dn_x^2 d/dn_y of r^2 log r (the T'' kernel of the jump oracle)
double kernel_Tpp(const Vec2& x, const Vec2& nx, const Vec2& y, const Vec2& ny);

} // namespace vtbem

#endif
