#include "whitcrest/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

namespace whitcrest::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double error;
    int depth;
    long long id; // deterministic tie-break in the refinement queue
};

struct PanelWorse {
    bool operator()(const Panel& l, const Panel& r) const {
        const double le = std::isnan(l.error) ? std::numeric_limits<double>::infinity() : l.error;
        const double re = std::isnan(r.error) ? std::numeric_limits<double>::infinity() : r.error;
        if (le != re) return le < re;
        return l.id > r.id;
    }
};

Panel evaluate_panel(const Integrand& f, double a, double b, int depth, long long id) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double gauss = kWg[3] * fc;
    double kronrod = kWgk[7] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kWgk[i] * fsum;
        if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
    }
    gauss *= half;
    kronrod *= half;

    // Error estimate: difference of the two nested rules.
    double err = std::abs(kronrod - gauss);
    if (!std::isfinite(kronrod)) err = std::numeric_limits<double>::infinity();
    return Panel{a, b, kronrod, err, depth, id};
}

double neumaier_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

// Globally adaptive refinement over a set of seed ranges.  The panel with
// the largest error estimate is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |value|) or no panel below max_depth remains.
Integral adapt(const Integrand& f, const std::vector<std::pair<double, double>>& seeds,
               const QuadratureConfig& cfg, double abs_tol) {
    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> active;
    std::vector<Panel> frozen; // panels at max_depth
    long long next_id = 0;
    long long evals = 0;

    double total_value = 0.0;
    double active_error = 0.0;
    double frozen_error = 0.0;

    for (const auto& [a, b] : seeds) {
        if (!(b > a)) continue;
        Panel p = evaluate_panel(f, a, b, 0, next_id++);
        evals += 15;
        total_value += p.value;
        active_error += p.error;
        active.push(p);
    }

    const long long max_panels = 400000;
    while (true) {
        const double tol = std::max(abs_tol, cfg.rel_tol * std::abs(total_value));
        const double total_error = active_error + frozen_error;
        if (total_error <= tol || !std::isfinite(tol)) break;
        if (active.empty() || next_id > max_panels)
            throw NonConvergent("quadrature: max_depth exceeded with error " +
                                std::to_string(total_error) + " above tolerance " +
                                std::to_string(tol));

        Panel worst = active.top();
        active.pop();
        active_error -= worst.error;
        if (worst.depth >= cfg.max_depth) {
            frozen.push_back(worst);
            frozen_error += worst.error;
            continue;
        }

        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) { // interval exhausted in double precision
            frozen.push_back(worst);
            frozen_error += worst.error;
            continue;
        }
        total_value -= worst.value;
        Panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1, next_id++);
        Panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1, next_id++);
        evals += 30;
        total_value += left.value + right.value;
        active_error += left.error + right.error;
        active.push(left);
        active.push(right);
    }

    // Deterministic recombination: panels sorted by interval, compensated sum.
    std::vector<Panel> all = std::move(frozen);
    while (!active.empty()) {
        all.push_back(active.top());
        active.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });
    std::vector<double> values, errors;
    values.reserve(all.size());
    errors.reserve(all.size());
    for (const Panel& p : all) {
        values.push_back(p.value);
        errors.push_back(p.error);
    }
    return Integral{neumaier_sum(values), neumaier_sum(errors), evals};
}

Integral adapt_single(const Integrand& f, double a, double b, const QuadratureConfig& cfg,
                      double abs_tol) {
    return adapt(f, {{a, b}}, cfg, abs_tol);
}

// One-sided singular panels; the substitution makes the integrand bounded
// so the plain adaptive engine converges geometrically.
//
// Inside the probe offset the integrand cannot be sampled reliably: the
// abscissa quantization destroys |t - a|.  There f is modelled by
// C |t-a|^{s-1} + E fitted at two exactly-representable offsets and the
// zone is integrated analytically.
struct EndpointZone {
    double value = 0.0;
    double error = 0.0;
    double u_floor = 0.0; // in the substituted variable
};

EndpointZone algebraic_zone(const Integrand& f, double endpoint, double sign, double width,
                            double s) {
    EndpointZone zone;
    const double scale_ref = std::max(std::abs(endpoint), 1.0);
    double probe = 1e-9 * scale_ref;
    if (probe > width / 32.0) probe = width / 32.0;
    const double t1 = endpoint + sign * probe;
    const double t2 = endpoint + sign * 8.0 * probe;
    const double d1 = sign * (t1 - endpoint); // exact: nearby subtraction
    const double d2 = sign * (t2 - endpoint);
    if (!(d1 > 0.0) || !(d2 > d1)) return zone;

    const double f1 = f(t1), f2 = f(t2);
    const double p1 = std::pow(d1, s - 1.0), p2 = std::pow(d2, s - 1.0);
    const double c_sing = (f1 - f2) / (p1 - p2);
    const double c_const = f1 - c_sing * p1;

    zone.value = c_sing * std::pow(d1, s) / s + c_const * d1;
    zone.error = std::abs(zone.value) * 1e-4 + 1e-300;
    zone.u_floor = std::pow(d1, s);
    return zone;
}

Integral integrate_left_singular(const Integrand& f, double a, double b,
                                 const Singularity& sing, const QuadratureConfig& cfg,
                                 double abs_tol) {
    const double width = b - a;
    if (sing.kind == SingularityKind::Algebraic) {
        const double s = sing.exponent;
        const double inv_s = 1.0 / s;
        const EndpointZone zone = algebraic_zone(f, a, +1.0, width, s);
        auto g = [&f, a, inv_s](double u) {
            const double t = a + std::pow(u, inv_s);
            return f(t) * inv_s * std::pow(u, inv_s - 1.0);
        };
        Integral result = adapt_single(g, zone.u_floor, std::pow(width, s), cfg, abs_tol);
        result.value += zone.value;
        result.error += zone.error;
        return result;
    }
    // Logarithmic: t = a + e^{-u}; truncate where e^{-u} is negligible.
    // Beyond the representability floor a + e^{-u} rounds to a itself, so
    // the cap also keeps evaluations off the singular point.
    const double u0 = -std::log(width);
    double u_max = std::max(u0, 0.0) + 55.0;
    if (a != 0.0) u_max = std::min(u_max, -std::log(std::abs(a) * 1e-15));
    u_max = std::max(u_max, u0 + 2.0);
    auto g = [&f, a](double u) { return f(a + std::exp(-u)) * std::exp(-u); };
    Integral result = adapt_single(g, u0, u_max, cfg, abs_tol);
    result.error += std::abs(g(u_max)) * 2.0;
    return result;
}

Integral integrate_right_singular(const Integrand& f, double a, double b,
                                  const Singularity& sing, const QuadratureConfig& cfg,
                                  double abs_tol) {
    const double width = b - a;
    if (sing.kind == SingularityKind::Algebraic) {
        const double s = sing.exponent;
        const double inv_s = 1.0 / s;
        const EndpointZone zone = algebraic_zone(f, b, -1.0, width, s);
        auto g = [&f, b, inv_s](double u) {
            const double t = b - std::pow(u, inv_s);
            return f(t) * inv_s * std::pow(u, inv_s - 1.0);
        };
        Integral result = adapt_single(g, zone.u_floor, std::pow(width, s), cfg, abs_tol);
        result.value += zone.value;
        result.error += zone.error;
        return result;
    }
    const double u0 = -std::log(width);
    double u_max = std::max(u0, 0.0) + 55.0;
    if (b != 0.0) u_max = std::min(u_max, -std::log(std::abs(b) * 1e-15));
    u_max = std::max(u_max, u0 + 2.0);
    auto g = [&f, b](double u) { return f(b - std::exp(-u)) * std::exp(-u); };
    Integral result = adapt_single(g, u0, u_max, cfg, abs_tol);
    result.error += std::abs(g(u_max)) * 2.0;
    return result;
}

} // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw InvalidInput("quadrature config: rel_tol must be positive");
    if (!(abs_tol >= 0.0)) throw InvalidInput("quadrature config: abs_tol must be nonnegative");
    if (max_depth < 1) throw InvalidInput("quadrature config: max_depth must be at least 1");
    if (!(tail_cut > 1.0)) throw InvalidInput("quadrature config: tail_cut must exceed 1");
    if (!(tail_order > 1.0)) throw InvalidInput("quadrature config: tail_order must exceed 1");
}

Integral integrate_panel(const Integrand& f, double a, double b,
                         std::span<const Singularity> singularities,
                         const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(a < b)) throw InvalidRange("integrate_panel: requires a < b");

    std::vector<Singularity> sings;
    for (const Singularity& s : singularities) {
        if (s.kind == SingularityKind::Algebraic && !(s.exponent > 0.0 && s.exponent < 1.0))
            throw InvalidInput("integrate_panel: algebraic exponent s must lie in (0,1)");
        if (s.location < a - 1e-14 || s.location > b + 1e-14)
            throw InvalidInput("integrate_panel: singularity outside [a,b]");
        sings.push_back(s);
    }
    std::sort(sings.begin(), sings.end(),
              [](const Singularity& l, const Singularity& r) { return l.location < r.location; });

    // Split points: panel ends plus every singular location.  Never
    // integrate across a singularity.
    std::vector<double> cuts{a};
    for (const Singularity& s : sings)
        if (s.location > cuts.back() + 1e-15 && s.location < b - 1e-15)
            cuts.push_back(s.location);
    cuts.push_back(b);

    auto singular_at = [&sings](double x) -> const Singularity* {
        for (const Singularity& s : sings)
            if (std::abs(s.location - x) <= 1e-14 * std::max(1.0, std::abs(x))) return &s;
        return nullptr;
    };

    const int n_parts = static_cast<int>(cuts.size()) - 1;
    const double abs_tol_part = cfg.abs_tol / std::max(1, n_parts);

    Integral total;
    for (int i = 0; i < n_parts; ++i) {
        const double l = cuts[i], r = cuts[i + 1];
        const Singularity* sl = singular_at(l);
        const Singularity* sr = singular_at(r);
        if (sl && sr) {
            const double mid = 0.5 * (l + r);
            total += integrate_left_singular(f, l, mid, *sl, cfg, 0.5 * abs_tol_part);
            total += integrate_right_singular(f, mid, r, *sr, cfg, 0.5 * abs_tol_part);
        } else if (sl) {
            total += integrate_left_singular(f, l, r, *sl, cfg, abs_tol_part);
        } else if (sr) {
            total += integrate_right_singular(f, l, r, *sr, cfg, abs_tol_part);
        } else {
            total += adapt_single(f, l, r, cfg, abs_tol_part);
        }
    }
    return total;
}

Integral integrate_panel(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
    return integrate_panel(f, a, b, std::span<const Singularity>{}, cfg);
}

Integral integrate_tail(const Integrand& f, double a, double decay_order,
                        const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(decay_order > 1.0)) throw InvalidDecay("integrate_tail: decay order must exceed 1");
    if (!(a > 0.0)) throw InvalidRange("integrate_tail: requires a > 0");

    const double p = decay_order;
    const double t_cut = std::max(cfg.tail_cut, 4.0 * a);

    // Geometric seed panels keep each one well scaled for the fixed rule.
    std::vector<std::pair<double, double>> seeds;
    double lo = a;
    while (lo < t_cut) {
        const double hi = std::min(lo * 4.0, t_cut);
        seeds.emplace_back(lo, hi);
        lo = hi;
    }
    Integral finite = adapt(f, seeds, cfg, 0.5 * cfg.abs_tol);

    // Analytic remainder: if f = C t^{-p} exactly beyond T, the tail equals
    // f(T) T/(p-1).  The spread between matching C at T and at T/2 bounds
    // the model error.
    const double f_at_cut = f(t_cut);
    const double remainder = f_at_cut * t_cut / (p - 1.0);
    const double c_at_cut = f_at_cut * std::pow(t_cut, p);
    const double c_at_half = f(0.5 * t_cut) * std::pow(0.5 * t_cut, p);
    const double remainder_spread =
        std::abs(c_at_cut - c_at_half) * std::pow(t_cut, 1.0 - p) / (p - 1.0);

    Integral result = finite;
    result.value += remainder;
    result.error += remainder_spread + std::abs(remainder) * 1e-12;
    result.evaluations += 2;
    return result;
}

} // namespace whitcrest::quad
