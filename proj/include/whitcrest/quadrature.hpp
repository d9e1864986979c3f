#pragma once

// Adaptive Gauss-Kronrod integration for integrands with algebraic
// (|t-a|^{s-1}, 0<s<1) or logarithmic endpoint singularities on finite
// panels, and algebraically decaying tails on semi-infinite ranges.

#include <functional>
#include <span>
#include <vector>

#include "whitcrest/errors.hpp"

namespace whitcrest::quad {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 40;    // per-panel bisection limit
    double tail_cut = 1e4; // truncation point T for semi-infinite ranges
    double tail_order = 2.0;

    void validate() const; // throws InvalidInput
};

enum class SingularityKind {
    Algebraic,  // |t - location|^{s-1}, s in (0,1)
    Logarithmic // log(1/|t - location|)
};

struct Singularity {
    double location = 0.0;
    SingularityKind kind = SingularityKind::Algebraic;
    double exponent = 0.5; // s for the algebraic kind; ignored otherwise
};

struct Integral {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    long long evaluations = 0;

    Integral& operator+=(const Integral& other) {
        value += other.value;
        error += other.error;
        evaluations += other.evaluations;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

// Integral over [a,b].  Singularities must lie inside [a,b]; interior ones
// split the panel, endpoint ones are removed by substitution (t = a + u^{1/s}
// for the algebraic kind, t = a + e^{-u} for the logarithmic kind).
Integral integrate_panel(const Integrand& f, double a, double b,
                         std::span<const Singularity> singularities,
                         const QuadratureConfig& cfg = {});

Integral integrate_panel(const Integrand& f, double a, double b,
                         const QuadratureConfig& cfg = {});

// Integral over [a, infinity) for |f(t)| ~ C t^{-p} beyond cfg.tail_cut.
// Finite part up to T = max(tail_cut, 4a) plus the analytic remainder
// f(T) T/(p-1); the model uncertainty is folded into the error estimate.
Integral integrate_tail(const Integrand& f, double a, double decay_order,
                        const QuadratureConfig& cfg = {});

} // namespace whitcrest::quad
