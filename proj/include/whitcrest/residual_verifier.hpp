#pragma once

// Independent verification, by direct singular quadrature, that rescaled
// profiles satisfy (1+n(u))u^2 = int_0^inf delta_x^2 K(y) u(y) dy, and that
// u = beta_s |x|^s solves the pure-power model equation exactly.

#include "whitcrest/asymptotics.hpp"
#include "whitcrest/quadrature.hpp"

namespace whitcrest::verify {

struct CondensedResidual {
    double x;
    double lhs;        // (1 + n(u(x))) u(x)^2
    double rhs;        // quadrature of the second-difference integral
    double tail_bound; // analytic bound on the dropped (3P, inf) tail
    double abs_residual;
    double rel_residual; // normalized by the quadratic left side
};

CondensedResidual condensed_residual(const asym::RescaledProfile& r, double x,
                                     const quad::QuadratureConfig& cfg = {});

// Relative residual of u = beta_s |x|^s in u^2 = int delta_x^2 H_s(y) u(y) dy.
double toy_residual(double s, double x, const quad::QuadratureConfig& cfg = {});

} // namespace whitcrest::verify
