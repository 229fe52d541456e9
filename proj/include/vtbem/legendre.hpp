#ifndef VTBEM_LEGENDRE_HPP
#define VTBEM_LEGENDRE_HPP

#include <vector>

#include "vtbem/types.hpp"

namespace vtbem {

// Gauss-Legendre rule and nodal spectral operators on [-1,1], cached per order.
struct LegendreRule {
    int order = 0;
    std::vector<double> nodes;   // ascending in (-1,1)
    std::vector<double> weights;
    std::vector<double> bary;    // barycentric weights of the node set
    std::vector<double> diff;    // order x order nodal differentiation matrix (row-major)

    // interpolation row from nodal values to point xi (|xi| may slightly exceed 1)
    std::vector<double> interp_row(double xi) const;
    // value of interpolant at xi
    double interp(const std::vector<double>& values, double xi) const;
    // Legendre expansion coefficients of the nodal interpolant
    std::vector<double> to_coefficients(const std::vector<double>& values) const;
    // integral_{-1}^{xi} of a Legendre expansion
    static double eval_antiderivative(const std::vector<double>& coef, double xi);
    // antider[q] = integral_{-1}^{node q} of the nodal interpolant
    std::vector<double> antiderivative_at_nodes(const std::vector<double>& values) const;
    double integrate(const std::vector<double>& values) const;
};

const LegendreRule& legendre_rule(int order);

} // namespace vtbem

#endif
