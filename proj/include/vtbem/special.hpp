#ifndef VTBEM_SPECIAL_HPP
#define VTBEM_SPECIAL_HPP

#include <vector>

#include "vtbem/types.hpp"

namespace vtbem {

struct Hankel01 {
    Complex h0, h1; // H0^(1)(z), H1^(1)(z)
};

// First-kind Hankel functions of orders 0 and 1, relative accuracy <= 1e-14
// on z in [1e-8, 1e4]. Throws DomainError for z <= 0.
Hankel01 hankel01(double z);

// Cancellation-free companions for small arguments, used by the combined
// hypersingular kernel:
//   h1reg(z)  = H1(z)/z + 2i/(pi z^2)        (log-singular but finite as z->0)
Complex hankel_h1reg(double z);

// Regular Bessel J_0..J_n by Miller's downward recurrence.
std::vector<double> bessel_jn(int nmax, double x);
// Y_0..Y_n by upward recurrence.
std::vector<double> bessel_yn(int nmax, double x);

// Free-space Helmholtz Green's function G = (i/4) H0(k|x-y|) and derivatives.
Complex greens(double k, const Vec2& x, const Vec2& y);
Complex greens_grad_dot(double k, const Vec2& x, const Vec2& y, const Vec2& dir); // dir . grad_x G
// dirA^T (grad_x grad_x G) dirB
Complex greens_hess_quad(double k, const Vec2& x, const Vec2& y, const Vec2& dirA, const Vec2& dirB);

} // namespace vtbem

#endif
