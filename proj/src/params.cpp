#include "vtbem/params.hpp"

#include <cmath>
#include <tuple>

namespace vtbem {

std::pair<Complex, Complex> derive_coefficients(double deltaV, double deltaT, double gamma, double k) {
    if (!(k > 0.0)) fail(Err::NonPhysical, "wavenumber must be positive");
    if (deltaV < 0.0 || deltaT < 0.0) fail(Err::NonPhysical, "boundary layer thicknesses must be nonnegative");
    if (gamma < 1.0) fail(Err::NonPhysical, "specific heat ratio must be at least 1");
    Complex im1{-1.0, 1.0}; // i - 1
    Complex c1 = -deltaV * 0.5 * im1;
    Complex c2 = deltaT * k * k * (gamma - 1.0) * 0.5 * im1;
    return {c1, c2};
}

Complex surface_wavenumber(Complex c1, Complex c2) {
    if (c1 == Complex(0.0)) fail(Err::DivisionByZero, "surface wavenumber undefined for c1 = 0");
    Complex kg2 = (1.0 + c1 * c2) / (c1 * c1);
    Complex kg = std::sqrt(kg2);
    if (kg.imag() < 0.0) kg = -kg;
    if (kg.imag() == 0.0)
        fail(Err::BranchDegenerate, "surface wavenumber has no branch with positive imaginary part");
    return kg;
}

PhysicalParams make_params(double lambda, double deltaV, double deltaT, double gamma, Complex robin_a) {
    if (!(lambda > 0.0)) fail(Err::NonPhysical, "wavelength must be positive");
    PhysicalParams p;
    p.lambda = lambda;
    p.k = 2.0 * PI / lambda;
    p.deltaV = deltaV;
    p.deltaT = deltaT;
    p.gamma = gamma;
    p.robin_a = robin_a;
    std::tie(p.c1, p.c2) = derive_coefficients(deltaV, deltaT, gamma, p.k);
    p.kGamma = surface_wavenumber(p.c1, p.c2);
    return p;
}

} // namespace vtbem
