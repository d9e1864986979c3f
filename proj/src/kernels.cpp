#include "whitcrest/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

namespace whitcrest::kernels {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286;
constexpr double kMinAbscissa = 1e-12;

void require_nonzero(double x) {
    if (std::abs(x) < kMinAbscissa)
        throw DomainError("kernel evaluation too close to the singular point x = 0");
}

// a_m = C(2m, m) / 4^m, the binomial weight of the K_W expansion.
double central_binomial_weight(int m) {
    double a = 1.0;
    for (int j = 1; j <= m; ++j) a *= (2.0 * j - 1.0) / (2.0 * j);
    return a;
}

// w_n(x) = sqrt((2n + sqrt(4n^2+x^2)) / (4n^2+x^2)) and its x-derivatives.
double series_w(double x, double n) {
    const double rho = std::sqrt(4.0 * n * n + x * x);
    return std::sqrt((2.0 * n + rho) / (rho * rho));
}

double series_w_dx(double x, double n) {
    const double rho = std::sqrt(4.0 * n * n + x * x);
    const double w = std::sqrt((2.0 * n + rho) / (rho * rho));
    return -w * x * (4.0 * n + rho) / (2.0 * (2.0 * n + rho) * rho * rho);
}

double series_w_dxx(double x, double n) {
    const double rho = std::sqrt(4.0 * n * n + x * x);
    const double w = std::sqrt((2.0 * n + rho) / (rho * rho));
    const double g = 1.0 / (2.0 * (2.0 * n + rho) * rho) - 1.0 / (rho * rho);
    const double gp = 0.5 * (-1.0 / ((2.0 * n + rho) * (2.0 * n + rho) * rho) -
                             1.0 / ((2.0 * n + rho) * rho * rho)) +
                      2.0 / (rho * rho * rho);
    const double big_g = x * g;
    const double big_gp = g + x * x * gp / rho;
    return w * (big_g * big_g + big_gp);
}

struct PairSum {
    double sum = 0.0;
    // last three pair values, for the tail fit
    std::array<double, 3> tail_k{};
    std::array<double, 3> tail_v{};
};

template <typename Term>
PairSum sum_pairs(int pairs, Term term) {
    PairSum out;
    double a_prev = 1.0; // a_0
    const int probes[3] = {std::max(1, pairs - 16), std::max(1, pairs - 8), pairs};
    for (int k = 1; k <= pairs; ++k) {
        const double a_k = a_prev * (2.0 * k - 1.0) / (2.0 * k);
        const double pair = term(k, a_prev, a_k);
        out.sum += pair;
        for (int j = 0; j < 3; ++j)
            if (k == probes[j]) {
                out.tail_k[j] = k;
                out.tail_v[j] = pair;
            }
        a_prev = a_k;
    }
    return out;
}

// Sum_{k > K} k^{-p} by Euler-Maclaurin; ample accuracy for K >= 100.
double zeta_tail(double p, double big_k) {
    const double k = big_k;
    return std::pow(k, 1.0 - p) / (p - 1.0) - 0.5 * std::pow(k, -p) +
           (p / 12.0) * std::pow(k, -p - 1.0) -
           (p * (p + 1.0) * (p + 2.0) / 720.0) * std::pow(k, -p - 3.0);
}

// Fit pair_k ~ A/k^2 + B/k^3 + C/k^4 through three sampled pairs and return
// the summed tail beyond the last one.
double fitted_tail(const PairSum& ps) {
    const double k1 = ps.tail_k[0], k2 = ps.tail_k[1], k3 = ps.tail_k[2];
    if (k1 == k2 || k2 == k3) return 0.0;
    // Solve the 3x3 Vandermonde system in 1/k for (A, B, C).
    double m[3][4];
    const double ks[3] = {k1, k2, k3};
    for (int i = 0; i < 3; ++i) {
        const double inv = 1.0 / ks[i];
        m[i][0] = inv * inv;
        m[i][1] = inv * inv * inv;
        m[i][2] = inv * inv * inv * inv;
        m[i][3] = ps.tail_v[i];
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        if (m[c][c] == 0.0) return 0.0;
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double fac = m[r][c] / m[c][c];
            for (int cc = c; cc < 4; ++cc) m[r][cc] -= fac * m[c][cc];
        }
    }
    const double a = m[0][3] / m[0][0];
    const double b = m[1][3] / m[1][1];
    const double c = m[2][3] / m[2][2];
    return a * zeta_tail(2.0, k3) + b * zeta_tail(3.0, k3) + c * zeta_tail(4.0, k3);
}

double whitham_series_core(double x, int pairs, bool accelerate) {
    const double ax = std::abs(x);
    double sum = series_w(ax, 0.0); // leading term: |x|^{-1/2}
    if (pairs >= 1) {
        PairSum ps = sum_pairs(pairs, [ax](int k, double a_km1, double a_k) {
            return a_k * series_w(ax, 2.0 * k) - a_km1 * series_w(ax, 2.0 * k - 1.0);
        });
        sum += ps.sum;
        if (accelerate) sum += fitted_tail(ps);
    }
    return sum / std::sqrt(kTwoPi);
}

double whitham_series_derivative(double x, int pairs) {
    const double ax = std::abs(x);
    double sum = series_w_dx(ax, 0.0);
    PairSum ps = sum_pairs(pairs, [ax](int k, double a_km1, double a_k) {
        return a_k * series_w_dx(ax, 2.0 * k) - a_km1 * series_w_dx(ax, 2.0 * k - 1.0);
    });
    sum += ps.sum + fitted_tail(ps);
    return std::copysign(sum / std::sqrt(kTwoPi), x);
}

// Second derivative of the canonical-scale Whitham remainder
// R(y) = sqrt(2 pi) K_W(y) - |y|^{-1/2} (pairs only; term 0 cancels).
double whitham_regular_dxx(double y, int pairs) {
    const double ax = std::abs(y);
    PairSum ps = sum_pairs(pairs, [ax](int k, double a_km1, double a_k) {
        return a_k * series_w_dxx(ax, 2.0 * k) - a_km1 * series_w_dxx(ax, 2.0 * k - 1.0);
    });
    return ps.sum + fitted_tail(ps);
}

// Canonical-scale remainders, continuous through 0.
double regular_whitham_canonical(double x, int pairs) {
    const double ax = std::abs(x);
    PairSum ps = sum_pairs(pairs, [ax](int k, double a_km1, double a_k) {
        return a_k * series_w(ax, 2.0 * k) - a_km1 * series_w(ax, 2.0 * k - 1.0);
    });
    return ps.sum + fitted_tail(ps);
}

double regular_bidirectional_canonical(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-6) {
        // x*coth(pi x/4) = 4/pi + pi x^2/12 - ...
        const double z = kPi * ax / 4.0;
        return std::log(4.0 / kPi * (1.0 + z * z / 3.0 - z * z * z * z / 45.0));
    }
    return std::log(ax / std::tanh(kPi * ax / 4.0));
}

double regular_bidirectional_canonical_dxx(double x) {
    const double ax = std::abs(x);
    const double z = kPi * ax / 2.0;
    if (ax < 1e-2) {
        // Series of -1/x^2 + (pi^2/4) cosh(z)/sinh(z)^2 around 0.
        return kPi * kPi / 24.0 - 7.0 * std::pow(kPi, 4) * ax * ax / 1920.0;
    }
    const double sh = std::sinh(z);
    return -1.0 / (ax * ax) + (kPi * kPi / 4.0) * std::cosh(z) / (sh * sh);
}

double lgamma_pos(double x) { return std::lgamma(x); }

// ||R''||_{L^1} cached per family (canonical scale).
double cached_r2_norm(Family family) {
    static std::once_flag flag_w, flag_b;
    static double norm_w = 0.0, norm_b = 0.0;

    quad::QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-12;

    if (family == Family::Whitham) {
        std::call_once(flag_w, [&cfg] {
            auto abs_r2 = [](double y) { return std::abs(whitham_regular_dxx(y, 3000)); };
            quad::Integral body = quad::integrate_panel(abs_r2, 1e-9, 30.0, cfg);
            quad::Integral tail = quad::integrate_tail(abs_r2, 30.0, 2.5, cfg);
            norm_w = 2.0 * (body.value + tail.value);
        });
        return norm_w;
    }
    std::call_once(flag_b, [&cfg] {
        auto abs_r2 = [](double y) { return std::abs(regular_bidirectional_canonical_dxx(y)); };
        quad::Integral body = quad::integrate_panel(abs_r2, 1e-9, 30.0, cfg);
        quad::Integral tail = quad::integrate_tail(abs_r2, 30.0, 2.0, cfg);
        norm_b = 2.0 * (body.value + tail.value);
    });
    return norm_b;
}

} // namespace

double KernelSpec::canonical_scale() const {
    switch (family) {
        case Family::Whitham: return std::sqrt(kTwoPi);
        case Family::BidirectionalWhitham: return kPi;
        default: return 1.0;
    }
}

SingularKind KernelSpec::singular_kind() const {
    switch (family) {
        case Family::Whitham: return SingularKind::Homogeneous;
        case Family::BidirectionalWhitham: return SingularKind::Logarithmic;
        case Family::PureHomogeneous: return SingularKind::Homogeneous;
        default: return SingularKind::Logarithmic;
    }
}

KernelSpec KernelSpec::whitham(double scale) { return {Family::Whitham, scale, 0.5, 4000}; }
KernelSpec KernelSpec::whitham_scaled() { return whitham(std::sqrt(kTwoPi)); }
KernelSpec KernelSpec::bidirectional(double scale) {
    return {Family::BidirectionalWhitham, scale, 0.5, 4000};
}
KernelSpec KernelSpec::bidirectional_scaled() { return bidirectional(kPi); }
KernelSpec KernelSpec::pure_homogeneous(double s, double scale) {
    if (!(s > 0.0 && s < 1.0))
        throw InvalidInput("pure homogeneous kernel: s must lie in (0,1)");
    return {Family::PureHomogeneous, scale, s, 0};
}
KernelSpec KernelSpec::pure_logarithmic(double scale) {
    return {Family::PureLogarithmic, scale, 0.5, 0};
}

double symbol(const KernelSpec& spec, double xi) {
    const double a = std::abs(xi);
    switch (spec.family) {
        case Family::Whitham:
            if (a == 0.0) return spec.scale;
            return spec.scale * std::sqrt(std::tanh(a) / a);
        case Family::BidirectionalWhitham:
            if (a == 0.0) return spec.scale;
            return spec.scale * std::tanh(a) / a;
        case Family::PureHomogeneous: {
            if (a == 0.0) throw DomainError("symbol of |x|^{s-1} diverges at xi = 0");
            const double s = spec.s;
            return spec.scale * 2.0 * std::exp(lgamma_pos(s)) * std::cos(kPi * s / 2.0) *
                   std::pow(a, -s);
        }
        default:
            if (a == 0.0) throw DomainError("symbol of log(1/|x|) diverges at xi = 0");
            return spec.scale * kPi / a;
    }
}

double value(const KernelSpec& spec, double x) {
    require_nonzero(x);
    const double ax = std::abs(x);
    switch (spec.family) {
        case Family::Whitham:
            return spec.scale * whitham_series_core(ax, std::max(500, spec.series_pairs), true);
        case Family::BidirectionalWhitham:
            return spec.scale * kernel_bidirectional_closed(ax);
        case Family::PureHomogeneous:
            return spec.scale * std::pow(ax, spec.s - 1.0);
        default:
            return spec.scale * std::log(1.0 / ax);
    }
}

double derivative(const KernelSpec& spec, double x) {
    require_nonzero(x);
    const double ax = std::abs(x);
    double d;
    switch (spec.family) {
        case Family::Whitham:
            d = whitham_series_derivative(ax, std::max(500, spec.series_pairs));
            break;
        case Family::BidirectionalWhitham:
            // d/dx (1/pi) log coth(pi x/4) = -1/(2 sinh(pi x/2)), x > 0
            d = -0.5 / std::sinh(kPi * ax / 2.0);
            break;
        case Family::PureHomogeneous:
            d = (spec.s - 1.0) * std::pow(ax, spec.s - 2.0);
            break;
        default:
            d = -1.0 / ax;
            break;
    }
    return spec.scale * std::copysign(d, x);
}

double singular_part(const KernelSpec& spec, double x) {
    require_nonzero(x);
    const double ax = std::abs(x);
    const double ratio = spec.scale / spec.canonical_scale();
    switch (spec.family) {
        case Family::Whitham: return ratio / std::sqrt(ax);
        case Family::BidirectionalWhitham: return ratio * std::log(1.0 / ax);
        case Family::PureHomogeneous: return spec.scale * std::pow(ax, spec.s - 1.0);
        default: return spec.scale * std::log(1.0 / ax);
    }
}

double regular_part(const KernelSpec& spec, double x) {
    const double ax = std::abs(x);
    const double ratio = spec.scale / spec.canonical_scale();
    switch (spec.family) {
        case Family::Whitham:
            return ratio * regular_whitham_canonical(ax, std::max(500, spec.series_pairs));
        case Family::BidirectionalWhitham:
            return ratio * regular_bidirectional_canonical(ax);
        default:
            return 0.0;
    }
}

double regular_second_derivative_l1(const KernelSpec& spec) {
    if (spec.family == Family::PureHomogeneous || spec.family == Family::PureLogarithmic)
        return 0.0;
    return (spec.scale / spec.canonical_scale()) * cached_r2_norm(spec.family);
}

KernelDecomposition decompose(const KernelSpec& spec) {
    KernelDecomposition d;
    d.singular_kind = spec.singular_kind();
    d.regular_eval = [spec](double x) { return regular_part(spec, x); };
    d.regular_second_derivative_l1 = regular_second_derivative_l1(spec);
    return d;
}

double kernel_bidirectional_closed(double x) {
    require_nonzero(x);
    const double z = kPi * std::abs(x) / 4.0;
    if (z > 19.0) {
        // coth(z) - 1 = 2/(e^{2z} - 1); keeps precision for large x.
        return std::log1p(2.0 / std::expm1(2.0 * z)) / kPi;
    }
    return std::log(1.0 / std::tanh(z)) / kPi;
}

double kernel_whitham_series(double x, int n_terms) {
    require_nonzero(x);
    if (n_terms < 1) throw InvalidInput("kernel_whitham_series: n_terms must be >= 1");
    return whitham_series_core(std::abs(x), n_terms - 1, false);
}

double whitham_series_pair(double x, int k) {
    if (k < 1) throw InvalidInput("whitham_series_pair: k must be >= 1");
    const double ax = std::abs(x);
    const double a_km1 = central_binomial_weight(k - 1);
    const double a_k = a_km1 * (2.0 * k - 1.0) / (2.0 * k);
    return (a_k * series_w(ax, 2.0 * k) - a_km1 * series_w(ax, 2.0 * k - 1.0)) /
           std::sqrt(kTwoPi);
}

double kernel_whitham_series_accelerated(double x, int pairs) {
    require_nonzero(x);
    if (pairs < 3) throw InvalidInput("accelerated series needs at least 3 pairs");
    return whitham_series_core(std::abs(x), pairs, true);
}

double cosine_integral(double x) {
    if (!(x > 0.0)) throw DomainError("cosine integral requires x > 0");
    if (x <= 8.0) {
        // Ci(x) = gamma + log x + sum (-1)^k x^{2k} / (2k (2k)!)
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -x * x / ((2.0 * k) * (2.0 * k - 1.0));
            const double add = term / (2.0 * k);
            sum += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return kEulerGamma + std::log(x) + sum;
    }
    // Asymptotic auxiliary functions: Ci(x) = f sin(x) - g cos(x).
    const double inv2 = 1.0 / (x * x);
    double f = 1.0, g = 1.0, term_f = 1.0, term_g = 1.0;
    for (int k = 1; k <= 9; ++k) {
        term_f *= -(2.0 * k) * (2.0 * k - 1.0) * inv2;
        term_g *= -(2.0 * k) * (2.0 * k + 1.0) * inv2;
        f += term_f;
        g += term_g;
    }
    f /= x;
    g *= inv2;
    return f * std::sin(x) - g * std::cos(x);
}

double kernel_numeric_from_symbol(const KernelSpec& spec, double x,
                                  const quad::QuadratureConfig& cfg) {
    require_nonzero(x);
    const double ax = std::abs(x);
    const double cut = 40.0; // symbols reach their |xi|->inf behaviour exponentially fast

    switch (spec.family) {
        case Family::Whitham: {
            // K_W(x) = 1/sqrt(2 pi x)  +  (1/pi) int_0^inf xi^{-1/2} (sqrt(tanh xi) - 1) cos(xi x) dxi
            auto f = [ax](double xi) {
                return (std::sqrt(std::tanh(xi)) - 1.0) / std::sqrt(xi) * std::cos(xi * ax);
            };
            const quad::Singularity sing{0.0, quad::SingularityKind::Algebraic, 0.5};
            quad::Integral j = quad::integrate_panel(f, 0.0, cut, std::span(&sing, 1), cfg);
            return spec.scale * (1.0 / std::sqrt(kTwoPi * ax) + j.value / kPi);
        }
        case Family::BidirectionalWhitham: {
            // K_B(x) = (1/pi)[ int_0^1 (tanh xi/xi) cos(xi x) dxi
            //                 + int_1^inf ((tanh xi - 1)/xi) cos(xi x) dxi - Ci(x) ];
            // the -Ci(x) term carries the log(1/x) singularity analytically.
            auto head = [ax](double xi) {
                const double t = xi == 0.0 ? 1.0 : std::tanh(xi) / xi;
                return t * std::cos(xi * ax);
            };
            auto rest = [ax](double xi) {
                return (std::tanh(xi) - 1.0) / xi * std::cos(xi * ax);
            };
            quad::Integral i0 = quad::integrate_panel(head, 0.0, 1.0, cfg);
            quad::Integral i1 = quad::integrate_panel(rest, 1.0, cut, cfg);
            return spec.scale * (i0.value + i1.value - cosine_integral(ax)) / kPi;
        }
        case Family::PureHomogeneous:
            return spec.scale * std::pow(ax, spec.s - 1.0);
        default:
            return spec.scale * std::log(1.0 / ax);
    }
}

double second_difference(const std::function<double(double)>& kernel, double x, double y) {
    return kernel(y + x) + kernel(y - x) - 2.0 * kernel(y);
}

double second_difference(const KernelSpec& spec, double x, double y) {
    return second_difference([&spec](double t) { return value(spec, t); }, x, y);
}

double first_central_difference(const std::function<double(double)>& kernel, double x, double y) {
    return kernel(y + x) - kernel(y - x);
}

double first_central_difference(const KernelSpec& spec, double x, double y) {
    return first_central_difference([&spec](double t) { return value(spec, t); }, x, y);
}

double antiderivative(const KernelSpec& spec, double x, const quad::QuadratureConfig& cfg) {
    if (x < 0.0) throw InvalidRange("antiderivative requires x >= 0");
    if (x == 0.0) return 0.0;
    switch (spec.family) {
        case Family::PureHomogeneous:
            return spec.scale * std::pow(x, spec.s) / spec.s;
        case Family::PureLogarithmic:
            return spec.scale * x * (1.0 + std::log(1.0 / x));
        case Family::Whitham: {
            // Integrate the singular model exactly and the smooth remainder
            // numerically.
            auto reg = [&spec](double y) {
                return regular_whitham_canonical(y, std::max(500, spec.series_pairs));
            };
            quad::Integral r = quad::integrate_panel(reg, 0.0, x, cfg);
            return spec.scale / spec.canonical_scale() * (2.0 * std::sqrt(x) + r.value);
        }
        default: {
            auto reg = [](double y) { return regular_bidirectional_canonical(y); };
            quad::Integral r = quad::integrate_panel(reg, 0.0, x, cfg);
            return spec.scale / spec.canonical_scale() *
                   (x * (1.0 + std::log(1.0 / x)) + r.value);
        }
    }
}

std::vector<double> periodized_fourier_coefficients(const KernelSpec& spec, double period,
                                                    int n_modes) {
    if (!(period > 0.0)) throw InvalidInput("periodization requires period > 0");
    if (n_modes < 4) throw InvalidInput("periodization requires at least 4 modes");
    std::vector<double> coeffs(static_cast<std::size_t>(n_modes) + 1);
    for (int k = 0; k <= n_modes; ++k) coeffs[k] = symbol(spec, kTwoPi * k / period);
    return coeffs;
}

} // namespace whitcrest::kernels
