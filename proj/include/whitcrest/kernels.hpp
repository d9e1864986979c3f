#pragma once

// Convolution kernels for the uni- and bidirectional Whitham equations,
// their Fourier symbols, singular/regular decompositions K = S + R, the
// antiderivative, central differences, and periodized symbol tables.

#include <functional>
#include <vector>

#include "whitcrest/errors.hpp"
#include "whitcrest/quadrature.hpp"

namespace whitcrest::kernels {

enum class Family {
    Whitham,               // symbol sqrt(tanh(xi)/xi), |x|^{-1/2}-type singularity
    BidirectionalWhitham,  // symbol tanh(xi)/xi, log(1/|x|)-type singularity
    PureHomogeneous,       // H_s(x) = |x|^{s-1} itself (test kernel)
    PureLogarithmic        // L(x) = log(1/|x|) itself (test kernel)
};

enum class SingularKind { Homogeneous, Logarithmic };

struct KernelSpec {
    Family family = Family::Whitham;
    double scale = 1.0;    // multiplier applied to the base kernel
    double s = 0.5;        // exponent for PureHomogeneous, in (0,1)
    int series_pairs = 4000; // merged pairs used by the Whitham evaluator

    // Scale that makes the singular part exactly H(x)=|x|^{-1/2}
    // resp. L(x)=log(1/|x|): sqrt(2*pi) for Whitham, pi for the
    // bidirectional kernel, 1 for the pure model kernels.
    double canonical_scale() const;
    SingularKind singular_kind() const;

    static KernelSpec whitham(double scale = 1.0);
    static KernelSpec whitham_scaled();        // scale = sqrt(2*pi)
    static KernelSpec bidirectional(double scale = 1.0);
    static KernelSpec bidirectional_scaled();  // scale = pi
    static KernelSpec pure_homogeneous(double s, double scale = 1.0);
    static KernelSpec pure_logarithmic(double scale = 1.0);
};

struct KernelDecomposition {
    SingularKind singular_kind;
    std::function<double(double)> regular_eval;   // R(x), continuous through 0
    double regular_second_derivative_l1;          // ||R''||_{L^1}
};

// Fourier symbol of the scaled kernel; the removable singularity at xi=0 is
// filled by the limit for the Whitham families.
double symbol(const KernelSpec& spec, double xi);

// Kernel value at x != 0.  Evaluation below |x| = 1e-12 raises DomainError
// instead of returning a huge float.
double value(const KernelSpec& spec, double x);

// dK/dx for x > 0 (odd continuation for x < 0).
double derivative(const KernelSpec& spec, double x);

// (scale/canonical_scale) * H or L; for the pure families the kernel itself.
double singular_part(const KernelSpec& spec, double x);

// R(x) = K(x) - S(x), continued through x = 0 by its limit.
double regular_part(const KernelSpec& spec, double x);

// ||R''||_{L^1} for the canonical-scale decomposition of this family,
// multiplied by scale/canonical_scale.  Computed once per family, cached.
double regular_second_derivative_l1(const KernelSpec& spec);

KernelDecomposition decompose(const KernelSpec& spec);

// K_B(x) = (1/pi) log(coth(pi |x| / 4)).
double kernel_bidirectional_closed(double x);

// Partial sum of the K_W expansion with the n=2k-1 and n=2k terms merged
// pairwise; n_terms counts the leading singular term plus merged pairs.
// The raw unpaired series is only conditionally convergent and is not
// exposed.
double kernel_whitham_series(double x, int n_terms);

// Merged pair k >= 1 of the expansion (smooth, even, negative, increasing
// on the positive half-line).
double whitham_series_pair(double x, int k);

// Partial sum over `pairs` merged pairs plus a fitted k^-2..k^-4
// Euler-Maclaurin tail correction; accurate to ~1e-12 for pairs >= 500.
double kernel_whitham_series_accelerated(double x, int pairs);

// Inverse Fourier integral of the symbol with the singular part split off
// analytically; the module's independent oracle.
double kernel_numeric_from_symbol(const KernelSpec& spec, double x,
                                  const quad::QuadratureConfig& cfg = {});

// delta_x^2 K(y) = K(y+x) + K(y-x) - 2 K(y).
double second_difference(const std::function<double(double)>& kernel, double x, double y);
double second_difference(const KernelSpec& spec, double x, double y);

// delta_{2x} K(y) = K(y+x) - K(y-x).
double first_central_difference(const std::function<double(double)>& kernel, double x, double y);
double first_central_difference(const KernelSpec& spec, double x, double y);

// Antiderivative of the kernel from 0 to x >= 0.
double antiderivative(const KernelSpec& spec, double x,
                      const quad::QuadratureConfig& cfg = {});

// Table k -> symbol(2 pi k / period) for k = 0..n_modes; convolution with a
// period-periodic function is diagonal in the cosine basis.
std::vector<double> periodized_fourier_coefficients(const KernelSpec& spec, double period,
                                                    int n_modes);

// Cosine integral Ci(x), x > 0 (used by the numeric-oracle split).
double cosine_integral(double x);

} // namespace whitcrest::kernels
