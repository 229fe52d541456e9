#ifndef VTBEM_SURFACE_GREENS_HPP
#define VTBEM_SURFACE_GREENS_HPP

#include "vtbem/quadrature.hpp"

namespace vtbem {

// Green's function of the Helmholtz-Beltrami operator d^2/ds^2 + kGamma^2 on
// one star component: periodic (closed) or zero-Neumann-end (open), evaluated
// as an image series. The trigonometric closed forms overflow once
// Im(kGamma) L is large; every image term here has magnitude <= 1/(2|kGamma|).
struct SurfaceGreens {
    const BoundaryComponent* comp = nullptr;
    Complex kGamma;
    double L = 0.0;
    bool closed = true;
    double trunc_eps = 1e-16;

    Complex eval(double s, double sp) const;

    // dense node-to-node matrix of G_j (integration in arclength)
    Mat matrix(const AssembleOptions& opt = {}) const;
    // node values of G(s_i, end)
    Vec end_column(int end) const;
    // F_j[phi](s) = G(s, L) phi'(L) - G(s, 0) phi'(0) as a dense matrix
    Mat f_matrix() const;
};

SurfaceGreens make_surface_greens(const BoundaryComponent& comp, Complex kGamma);

} // namespace vtbem

#endif
