#ifndef VTBEM_PARAMS_HPP
#define VTBEM_PARAMS_HPP

#include "vtbem/types.hpp"

namespace vtbem {

// Physical inputs and the derived visco-thermal coefficients. kGamma is
// computed once here; downstream modules read it rather than re-deriving, so
// the square-root branch is chosen in exactly one place.
struct PhysicalParams {
    double lambda = 0.0;  // wavelength
    double k = 0.0;       // 2 pi / lambda
    double deltaV = 0.0;  // viscous boundary layer thickness
    double deltaT = 0.0;  // thermal boundary layer thickness
    double gamma = 1.0;   // specific heat ratio
    Complex robin_a;      // Robin coefficient on circ components
    Complex c1, c2;
    Complex kGamma;       // sqrt((1 + c1 c2)/c1^2), Im > 0
};

// c1 = -deltaV (i-1)/2,  c2 = deltaT k^2 (gamma-1) (i-1)/2
std::pair<Complex, Complex> derive_coefficients(double deltaV, double deltaT, double gamma, double k);

// branch with Im > 0; BranchDegenerate when both roots are real
Complex surface_wavenumber(Complex c1, Complex c2);

PhysicalParams make_params(double lambda, double deltaV, double deltaT, double gamma,
                           Complex robin_a = Complex(0.0, 0.0));

} // namespace vtbem

#endif
