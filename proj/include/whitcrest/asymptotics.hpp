#pragma once

// Crest rescaling of solver output, windowed extraction of the crest
// limits with extrapolation, and the regularity scans (Hoelder seminorm,
// log-Lipschitz constant).

#include <string>
#include <vector>

#include "whitcrest/errors.hpp"
#include "whitcrest/wave_solver.hpp"

namespace whitcrest::asym {

enum class Quantity {
    ValueHomogeneous,      // u / x^{1/2}            -> pi/2
    ValueLogarithmic,      // u / (x log(1/x))        -> 1/2
    DerivativeHomogeneous, // u' x^{1/2}              -> pi/4
    DerivativeLogarithmic  // u' / log(1/x)           -> 1/2
};

const char* quantity_name(Quantity q);
double quantity_target(Quantity q);

// u = lambda (height_max - profile) sampled on the half-period grid, with
// the spectral derivative and the series data needed to evaluate u anywhere.
//
// The grid array u is crest-referenced (u(0) = 0 exactly): the limit
// quotients are those of the corollary, (phi(0)-phi)/x^{1/2} etc., so the
// residual height gap of a near-highest wave does not leak a u(0)/x^{1/2}
// bias into the fits.  value() stays height-referenced, which is the
// offset the condensed equation itself pins; there the gap only enters as
// an O(gap^2) residual.
struct RescaledProfile {
    solver::WaveFamily family;
    double period;
    double speed_c;
    double lambda;        // sqrt(2 pi) resp. sqrt(3) pi c / 2
    double u_offset;      // lambda * height_max(c)
    std::vector<double> modes; // underlying cosine coefficients
    std::vector<double> x;     // grid points 0..P/2 inclusive
    std::vector<double> u;     // crest-referenced samples
    std::vector<double> u_prime;
    double u_at_crest;    // lambda * (height_max - mu), the residual gap
    double nu;            // fit-region cap, default P/8

    double value(double y) const; // height-referenced evaluation at any y
    double nonlinearity(double t) const; // n(t): 0 resp. 2t/(3 pi c^2)
};

RescaledProfile rescale(const solver::WaveProfile& profile, double max_gap = 1e-3);

struct AsymptoticFit {
    Quantity quantity;
    double x_min, x_max;
    std::vector<double> raw; // sampled quotient over the full window
    double extrapolated;
    double uncertainty;  // half-spread over the three nested windows
    double raw_innermost; // quotient at the smallest x in the window
    int samples;
};

// Quotient fit on [x_min, x_max]: extrapolation in sqrt(x) for the
// homogeneous quantities, in 1/log(1/x) for the logarithmic ones;
// uncertainty from three nested windows.  Throws WindowTooSmall below 16
// samples.
AsymptoticFit fit_limit(const RescaledProfile& r, Quantity q, double x_min, double x_max);

// Window [8 dx, nu/4] used by the reporting pipeline.
AsymptoticFit fit_limit_default(const RescaledProfile& r, Quantity q);

// Family-appropriate derivative limit with the default window.
AsymptoticFit derivative_limits(const RescaledProfile& r);

enum class CorollaryLevel { SurfaceElevation, Velocity };

// Map a fitted rescaled limit back to the surface-profile (or velocity)
// coefficient: pi/2 -> sqrt(pi/8), 1/2 -> 1/(3 pi) resp. 1/(sqrt(3) pi c).
double corollary_constant(double fitted_limit, solver::WaveFamily family,
                          CorollaryLevel level, double c);

struct SeminormResult {
    double value;
    double x_at, h_at;
};

// sup over sampled 0 < h < x <= nu of x^{1/2} (u(x+h)-u(x-h))/h.
SeminormResult holder_seminorm(const RescaledProfile& r, long long max_pairs = 2000000);

// Least M with |v(x)-v(y)| <= M |x-y| log(1+1/|x-y|) over sampled grid
// pairs (circular distance within one period).
double log_lipschitz_constant(const solver::WaveProfile& profile,
                              long long max_pairs = 2000000);

} // namespace whitcrest::asym
