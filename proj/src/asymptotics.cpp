#include "whitcrest/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace whitcrest::asym {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clenshaw(const std::vector<double>& modes, double theta) {
    const double ct = std::cos(theta);
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(modes.size()) - 1; k >= 1; --k) {
        const double b0 = modes[k] + 2.0 * ct * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return modes[0] + ct * b1 - b2;
}

// Least-squares fit q ~ c0 + c1 t + c2 t^2 against the correction variable,
// returning the intercept c0.
double fit_intercept(const std::vector<double>& t, const std::vector<double>& q) {
    double s[5] = {0, 0, 0, 0, 0};
    double r[3] = {0, 0, 0};
    for (std::size_t i = 0; i < t.size(); ++i) {
        double p = 1.0;
        for (int k = 0; k < 5; ++k) {
            s[k] += p;
            if (k < 3) r[k] += p * q[i];
            p *= t[i];
        }
    }
    double m[3][4] = {{s[0], s[1], s[2], r[0]},
                      {s[1], s[2], s[3], r[1]},
                      {s[2], s[3], s[4], r[2]}};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int rr = c + 1; rr < 3; ++rr)
            if (std::abs(m[rr][c]) > std::abs(m[piv][c])) piv = rr;
        std::swap(m[c], m[piv]);
        for (int rr = 0; rr < 3; ++rr) {
            if (rr == c) continue;
            const double f = m[rr][c] / m[c][c];
            for (int cc = c; cc < 4; ++cc) m[rr][cc] -= f * m[c][cc];
        }
    }
    return m[0][3] / m[0][0];
}

double quotient(const RescaledProfile& r, Quantity q, std::size_t i) {
    const double x = r.x[i];
    switch (q) {
        case Quantity::ValueHomogeneous: return r.u[i] / std::sqrt(x);
        case Quantity::ValueLogarithmic: return r.u[i] / (x * std::log(1.0 / x));
        case Quantity::DerivativeHomogeneous: return r.u_prime[i] * std::sqrt(x);
        default: return r.u_prime[i] / std::log(1.0 / x);
    }
}

double correction_variable(Quantity q, double x) {
    switch (q) {
        case Quantity::ValueHomogeneous:
        case Quantity::DerivativeHomogeneous:
            return std::sqrt(x);
        default:
            return 1.0 / std::log(1.0 / x);
    }
}

double fit_window(const RescaledProfile& r, Quantity q, double x_min, double x_max,
                  std::vector<double>* raw_out, int* count_out) {
    std::vector<double> t, qv;
    for (std::size_t i = 1; i < r.x.size(); ++i) {
        if (r.x[i] < x_min || r.x[i] > x_max) continue;
        t.push_back(correction_variable(q, r.x[i]));
        qv.push_back(quotient(r, q, i));
    }
    if (count_out) *count_out = static_cast<int>(t.size());
    if (t.size() < 16)
        throw WindowTooSmall("fit window holds " + std::to_string(t.size()) +
                             " samples; need at least 16");
    if (raw_out) *raw_out = qv;
    return fit_intercept(t, qv);
}

} // namespace

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::ValueHomogeneous: return "u/x^1/2";
        case Quantity::ValueLogarithmic: return "u/(x*log(1/x))";
        case Quantity::DerivativeHomogeneous: return "u'*x^1/2";
        default: return "u'/log(1/x)";
    }
}

double quantity_target(Quantity q) {
    switch (q) {
        case Quantity::ValueHomogeneous: return kPi / 2.0;
        case Quantity::ValueLogarithmic: return 0.5;
        case Quantity::DerivativeHomogeneous: return kPi / 4.0;
        default: return 0.5;
    }
}

double RescaledProfile::value(double y) const {
    return u_offset - lambda * clenshaw(modes, kTwoPi * y / period);
}

double RescaledProfile::nonlinearity(double t) const {
    if (family == solver::WaveFamily::Unidirectional) return 0.0;
    return 2.0 * t / (3.0 * kPi * speed_c * speed_c);
}

RescaledProfile rescale(const solver::WaveProfile& profile, double max_gap) {
    const double c = profile.speed_c;
    const double hmax = solver::height_max(profile.family, c);
    const double mu = profile.crest_height();
    const double gap = hmax - mu;
    if (!(gap < max_gap * std::max(1.0, hmax)))
        throw NotHighest("crest gap " + std::to_string(gap) +
                         " too large for crest rescaling");

    RescaledProfile r;
    r.family = profile.family;
    r.period = profile.period;
    r.speed_c = c;
    r.lambda = profile.family == solver::WaveFamily::Unidirectional
                   ? std::sqrt(kTwoPi)
                   : std::sqrt(3.0) * kPi * c / 2.0;
    r.u_offset = r.lambda * hmax;
    r.modes = profile.modes;
    r.nu = profile.period / 8.0;

    const int n = profile.n_modes();
    const double dx = profile.period / (2.0 * n);
    r.x.resize(n + 1);
    r.u.resize(n + 1);
    r.u_prime.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        r.x[j] = j * dx;
        const double val = j < static_cast<int>(profile.grid_values.size())
                               ? profile.grid_values[j]
                               : profile.value(r.x[j]);
        r.u[j] = r.lambda * (mu - val); // crest-referenced: r.u[0] == 0
    }
    // Centered differences of the spectrally exact samples.  The raw
    // spectral derivative series has k^{-1/2} coefficients for the cusped
    // wave and its Gibbs deficit decays too slowly in the fit region; the
    // difference quotient converges like (dx/x)^2 there.
    r.u_prime[0] = 0.0;
    for (int j = 1; j < n; ++j) r.u_prime[j] = (r.u[j + 1] - r.u[j - 1]) / (2.0 * dx);
    r.u_prime[n] = 0.0;
    r.u_at_crest = r.lambda * gap;
    return r;
}

AsymptoticFit fit_limit(const RescaledProfile& r, Quantity q, double x_min, double x_max) {
    if (!(x_min > 0.0) || !(x_max > x_min))
        throw InvalidInput("fit_limit: requires 0 < x_min < x_max");
    if (x_max > r.nu + 1e-12)
        throw InvalidInput("fit_limit: window must stay inside (0, nu]");

    AsymptoticFit fit;
    fit.quantity = q;
    fit.x_min = x_min;
    fit.x_max = x_max;

    // Nested windows shrink the outer edge; the spread measures how much
    // the extrapolation still depends on the window.
    double values[3];
    for (int k = 0; k < 3; ++k) {
        const double hi = x_max / std::pow(2.0, k);
        std::vector<double>* raw = (k == 0) ? &fit.raw : nullptr;
        int count = 0;
        values[k] = fit_window(r, q, x_min, hi, raw, &count);
        if (k == 0) fit.samples = count;
    }
    fit.extrapolated = values[1];
    fit.uncertainty =
        0.5 * (std::max({values[0], values[1], values[2]}) -
               std::min({values[0], values[1], values[2]}));

    // Innermost raw quotient, reported alongside the extrapolation.
    fit.raw_innermost = fit.raw.empty() ? 0.0 : fit.raw.front();
    return fit;
}

AsymptoticFit fit_limit_default(const RescaledProfile& r, Quantity q) {
    const double dx = r.x.size() > 1 ? r.x[1] : r.period / 2.0;
    // Truncation inflates the quotients within ~32 cells of the crest
    // (about +2% at 8 dx, +0.1% at 32 dx in resolution studies); the outer
    // edge is wide enough that the innermost nested window keeps 16 samples.
    const double x_min = 32.0 * dx;
    const double x_max = std::min(r.nu, std::max(r.nu / 4.0, 4.0 * x_min + 70.0 * dx));
    return fit_limit(r, q, x_min, x_max);
}

AsymptoticFit derivative_limits(const RescaledProfile& r) {
    const Quantity q = r.family == solver::WaveFamily::Unidirectional
                           ? Quantity::DerivativeHomogeneous
                           : Quantity::DerivativeLogarithmic;
    return fit_limit_default(r, q);
}

double corollary_constant(double fitted_limit, solver::WaveFamily family,
                          CorollaryLevel level, double c) {
    if (family == solver::WaveFamily::Unidirectional) {
        // u = sqrt(2 pi)(c/2 - phi): phi-level coefficient is fit/sqrt(2 pi).
        return fitted_limit / std::sqrt(kTwoPi);
    }
    const double v_level = fitted_limit * 2.0 / (std::sqrt(3.0) * kPi * c);
    if (level == CorollaryLevel::Velocity) return v_level;
    // phi(0)-phi ~ (c - v(0)) (v(0)-v) = (c/sqrt(3)) (v(0)-v) near the crest.
    return v_level * c / std::sqrt(3.0);
}

SeminormResult holder_seminorm(const RescaledProfile& r, long long max_pairs) {
    const double dx = r.x.size() > 1 ? r.x[1] : 1.0;
    const long long i_max = std::min<long long>(
        static_cast<long long>(r.nu / dx), static_cast<long long>(r.x.size()) - 1);

    long long stride = 1;
    while ((i_max / stride) * (i_max / stride) / 2 > max_pairs) ++stride;

    SeminormResult best{0.0, 0.0, 0.0};
    for (long long i = 2; i <= i_max; i += stride) {
        const double x = r.x[i];
        const double sx = std::sqrt(x);
        for (long long j = 1; j < i; j += stride) {
            const double h = r.x[j];
            // x_i +- x_j are again grid points
            const double diff = r.u[i + j] - r.u[i - j];
            const double ratio = sx * diff / h;
            if (ratio > best.value) best = {ratio, x, h};
        }
    }
    return best;
}

double log_lipschitz_constant(const solver::WaveProfile& profile, long long max_pairs) {
    const std::vector<double>& v = profile.grid_values;
    const long long n = static_cast<long long>(v.size());
    const double dx = profile.period / static_cast<double>(n);

    long long stride = 1;
    while ((n / stride) * (n / stride) / 2 > max_pairs) ++stride;

    double best = 0.0;
    auto scan_pair = [&](long long i, long long j) {
        long long d = j - i;
        if (d > n / 2) d = n - d; // circular distance
        if (d == 0) return;
        const double dist = d * dx;
        const double omega = dist * std::log1p(1.0 / dist);
        const double ratio = std::abs(v[i] - v[j]) / omega;
        if (ratio > best) best = ratio;
    };

    for (long long i = 0; i < n; i += stride)
        for (long long j = i + 1; j < n; j += stride) scan_pair(i, j);

    // The constant is attained by near-crest pairs; always include the fine
    // pairs around the crest regardless of the stride.
    const long long fine = std::min<long long>(1024, n / 2);
    for (long long i = 0; i < fine; ++i)
        for (long long j = i + 1; j <= fine; ++j) scan_pair(i, j);
    for (long long i = n - fine; i < n; ++i)
        for (long long j = i + 1; j < n; ++j) scan_pair(i, j);

    return best;
}

} // namespace whitcrest::asym
