#include "vtbem/kernels.hpp"

#include <cmath>

#include "vtbem/series.hpp"

namespace vtbem {

GeomInv invariants_coords(const Vec2& x, const Vec2& nx, const Vec2& y, const Vec2& ny) {
    GeomInv g;
    Vec2 d = x - y;
    Vec2 dn = nx - ny;
    g.r2 = norm2(d);
    g.r = std::sqrt(g.r2);
    g.sxd = dot(nx, d);
    g.syd = dot(ny, d);
    g.dnd = dot(dn, d);
    g.qm1 = -0.5 * norm2(dn); // exact for unit normals, no cancellation
    return g;
}

GeomInv invariants_jets(const Curve& curve, double t_x, double t_y, bool wrap) {
    double gap = t_x - t_y;
    if (wrap) gap -= std::round(gap);
    double u = 0.5 * gap;
    double m = t_y + u; // parameter midpoint (periodic maps accept t outside [0,1])

    Vec2 J[Curve::JET_ORDER + 1];
    curve.jet(m, Curve::JET_ORDER, J);

    // velocity series p'(m+v); the rotated, unnormalized velocity stands in
    // for the normal until the final scalar division by speed, so the leading
    // cancellations happen between exact jet polynomials
    Vec2Series vel;
    double fact = 1.0;
    for (int j = 0; j + 1 <= Curve::JET_ORDER && j <= Series::CAP; ++j) {
        vel.x.c[size_t(j)] = J[j + 1].x / fact;
        vel.y.c[size_t(j)] = J[j + 1].y / fact;
        fact *= double(j + 1);
    }
    Vec2Series rvel = vel.rot_minus90(); // speed * n(m+v)

    // x - y = Phi(+u) - Phi(-u): twice the odd part of the position offset
    Vec2Series dxy;
    fact = 1.0;
    for (int j = 1; j <= Curve::JET_ORDER && j <= Series::CAP; ++j) {
        fact *= double(j);
        if (j % 2 == 1) {
            dxy.x.c[size_t(j)] = 2.0 * J[j].x / fact;
            dxy.y.c[size_t(j)] = 2.0 * J[j].y / fact;
        }
    }

    double speed_x = norm(vel.eval(u));
    double speed_y = norm(vel.eval(-u));
    Series rv_dot_d = rvel.dot(dxy);
    Vec2Series rvel_neg = rvel.even_part() - rvel.odd_part(); // rvel(-u) as a series in u

    GeomInv g;
    g.r2 = dxy.dot(dxy).eval(u);
    g.r = std::sqrt(g.r2);
    g.sxd = rv_dot_d.eval(u) / speed_x;
    g.syd = rvel_neg.dot(dxy).eval(u) / speed_y;
    g.dnd = g.sxd - g.syd; // opposite signs near the diagonal, no cancellation

    // n_x - n_y = 2 odd(tau)(u) rotated; tau needs the normalized series
    Series inv_speed = vel.dot(vel).sqrt().recip();
    Vec2Series nrm{rvel.x * inv_speed, rvel.y * inv_speed};
    Vec2Series dn = nrm.odd_part() * 2.0;
    g.qm1 = (dn.dot(dn) * (-0.5)).eval(u);
    return g;
}

namespace {

void require_offdiag(const GeomInv& g, const char* who) {
    if (!(g.r > 0.0)) fail(Err::DomainError, std::string(who) + ": coincident points");
}

} // namespace

Complex kernel_S(double k, const GeomInv& g) {
    require_offdiag(g, "kernel_S");
    return 0.25 * I * hankel01(k * g.r).h0;
}

Complex kernel_D(double k, const GeomInv& g) {
    require_offdiag(g, "kernel_D");
    return 0.25 * I * k * hankel01(k * g.r).h1 * (g.syd / g.r);
}

Complex kernel_Sprime(double k, const GeomInv& g) {
    require_offdiag(g, "kernel_Sprime");
    return -0.25 * I * k * hankel01(k * g.r).h1 * (g.sxd / g.r);
}

Complex kernel_Dprime(double k, const GeomInv& g) {
    require_offdiag(g, "kernel_Dprime");
    Hankel01 h = hankel01(k * g.r);
    double ab = (g.sxd * g.syd) / g.r2;
    Complex rad = (2.0 * k / g.r) * h.h1 - k * k * h.h0;
    return -0.25 * I * (rad * ab - (k / g.r) * h.h1 * (g.qm1 + 1.0));
}

Complex kernel_combined_full(double k, const GeomInv& g) {
    require_offdiag(g, "kernel_combined");
    Hankel01 h = hankel01(k * g.r);
    double P = g.sxd * g.dnd / g.r2;
    Complex rad = (2.0 * k / g.r) * h.h1 - k * k * h.h0;
    return 0.25 * I * (rad * P + (k / g.r) * h.h1 * g.qm1);
}

Complex kernel_combined_local(double k, const GeomInv& g) {
    require_offdiag(g, "kernel_combined");
    double z = k * g.r;
    double P = g.sxd * g.dnd / g.r2;
    double twoPQ = 2.0 * P + g.qm1;
    Complex laplace = twoPQ / (2.0 * PI * g.r2);
    return laplace + 0.25 * I * k * k * (twoPQ * hankel_h1reg(z) - hankel01(z).h0 * P);
}

Complex kernel_combined_DpSpp(double k, const GeomInv& g, double kappa_x) {
    if (g.r == 0.0) return Complex(kappa_x * kappa_x / (4.0 * PI), 0.0);
    return (k * g.r < EPS_SWITCH) ? kernel_combined_local(k, g) : kernel_combined_full(k, g);
}

Complex kernel_D(const KernelPoint& pt) { return kernel_D(pt.k, invariants_coords(pt.x, pt.nx, pt.y, pt.ny)); }

Complex kernel_Sprime(const KernelPoint& pt) {
    return kernel_Sprime(pt.k, invariants_coords(pt.x, pt.nx, pt.y, pt.ny));
}

Complex kernel_Dprime(const KernelPoint& pt) {
    return kernel_Dprime(pt.k, invariants_coords(pt.x, pt.nx, pt.y, pt.ny));
}

Complex kernel_combined_DpSpp(const KernelPoint& pt) {
    return kernel_combined_DpSpp(pt.k, invariants_coords(pt.x, pt.nx, pt.y, pt.ny), pt.kappa_x);
}

Complex kernel_Dprimeprime(const KernelPoint& pt) {
    GeomInv g = invariants_coords(pt.x, pt.nx, pt.y, pt.ny);
    require_offdiag(g, "kernel_Dprimeprime");
    double k = pt.k, r = g.r, z = k * r;
    Hankel01 h = hankel01(z);
    double a = g.sxd / r, b = g.syd / r, c = g.qm1 + 1.0;
    // radial derivatives of g(r) = (i/4) H0(kr)
    Complex g1 = -0.25 * I * k * h.h1;
    Complex g2 = -0.25 * I * k * k * (h.h0 - h.h1 / z);
    Complex g3 = 0.25 * I * k * k * k * (h.h1 + h.h0 / z - 2.0 * h.h1 / (z * z));
    return -g3 * a * a * b + (g2 / r - g1 / g.r2) * (2.0 * a * (a * b - c) - b * (1.0 - a * a));
}

double kernel_Tpp(const Vec2& x, const Vec2& nx, const Vec2& y, const Vec2& ny) {
    GeomInv g = invariants_coords(x, nx, y, ny);
    require_offdiag(g, "kernel_Tpp");
    double a = g.sxd / g.r, b = g.syd / g.r, c = g.qm1 + 1.0;
    // on the flat offset pair x = y0 - h n this reduces to the classical
    // (2h^3 + 6h s^2)/(h^2+s^2)^2 profile whose integral jumps by 4 pi
    return -(2.0 * b + 4.0 * a * c - 4.0 * a * a * b) / g.r;
}

} // namespace vtbem
