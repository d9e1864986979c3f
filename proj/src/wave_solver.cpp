#include "whitcrest/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <numeric>

#include <fftw3.h>

extern "C" {
void dgetrf_(const int* m, const int* n, double* a, const int* lda, int* ipiv, int* info);
void dgetrs_(const char* trans, const int* n, const int* nrhs, const double* a, const int* lda,
             const int* ipiv, double* b, const int* ldb, int* info);
}

namespace whitcrest::solver {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// DCT-I pair for even periodic functions sampled on the closed half period
// x_j = j P/(2M), j = 0..M.  REDFT00 applied twice is 2M times the identity.
std::vector<double> coeff_to_grid_half(const std::vector<double>& coeffs, int m_grid) {
    std::vector<double> in(static_cast<std::size_t>(m_grid) + 1, 0.0);
    const int n_have = static_cast<int>(coeffs.size()) - 1;
    const int n_use = std::min(n_have, m_grid);
    in[0] = coeffs[0];
    for (int k = 1; k <= n_use; ++k) in[k] = (k == m_grid) ? coeffs[k] : 0.5 * coeffs[k];
    std::vector<double> out(in.size());
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan = fftw_plan_r2r_1d(m_grid + 1, in.data(), out.data(), FFTW_REDFT00,
                                          FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> grid_half_to_coeff(const std::vector<double>& grid) {
    const int m_grid = static_cast<int>(grid.size()) - 1;
    std::vector<double> in = grid;
    std::vector<double> out(grid.size());
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan = fftw_plan_r2r_1d(m_grid + 1, in.data(), out.data(), FFTW_REDFT00,
                                          FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / (2.0 * m_grid);
    std::vector<double> coeffs(grid.size());
    coeffs[0] = out[0] * scale;
    for (int k = 1; k < m_grid; ++k) coeffs[k] = 2.0 * out[k] * scale;
    coeffs[m_grid] = out[m_grid] * scale;
    return coeffs;
}

struct System {
    WaveFamily family;
    double period;
    int n; // mode count N
    std::vector<double> sym; // symbol(2 pi k / P), k = 0..N

    System(WaveFamily fam, double p, int modes) : family(fam), period(p), n(modes) {
        const kernels::KernelSpec spec = fam == WaveFamily::Unidirectional
                                             ? kernels::KernelSpec::whitham()
                                             : kernels::KernelSpec::bidirectional();
        sym = kernels::periodized_fourier_coefficients(spec, p, modes);
    }
};

struct NonlinearTerms {
    std::vector<double> residual; // coefficients 0..N
    std::vector<double> sq;       // coefficients of phi^2 resp. v^2, 0..2N
};

// Residual coefficients with the nonlinearity evaluated on a 4N grid, so
// quadratic and cubic products are aliasing-free.
NonlinearTerms residual_coeffs(const System& sys, const std::vector<double>& a, double c) {
    const int n = sys.n;
    const int m_big = 4 * n;
    std::vector<double> grid = coeff_to_grid_half(a, m_big);

    std::vector<double> sq_grid(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) sq_grid[j] = grid[j] * grid[j];
    std::vector<double> sq = grid_half_to_coeff(sq_grid);

    NonlinearTerms out;
    out.residual.resize(n + 1);
    if (sys.family == WaveFamily::Unidirectional) {
        for (int k = 0; k <= n; ++k)
            out.residual[k] = (sys.sym[k] - c) * a[k] + sq[k];
    } else {
        std::vector<double> cube_grid(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) cube_grid[j] = sq_grid[j] * grid[j];
        std::vector<double> cube = grid_half_to_coeff(cube_grid);
        for (int k = 0; k <= n; ++k)
            out.residual[k] =
                (sys.sym[k] - c * c) * a[k] + 1.5 * c * sq[k] - 0.5 * cube[k];
    }
    out.sq.assign(sq.begin(), sq.begin() + std::min<std::size_t>(sq.size(), 2 * n + 1));
    return out;
}

double grid_residual_norm(const System& sys, const std::vector<double>& rcoeff) {
    std::vector<double> grid = coeff_to_grid_half(rcoeff, sys.n);
    double norm = 0.0;
    for (double v : grid) norm = std::max(norm, std::abs(v));
    return norm;
}

// Dense Jacobian in coefficient space, column-major, order N+2
// (unknowns a_0..a_N, c; last row is the crest constraint).
class NewtonMatrix {
  public:
    explicit NewtonMatrix(int n) : n_(n), dim_(n + 2), data_(std::size_t(dim_) * dim_),
                                   ipiv_(dim_) {}

    void assemble(const System& sys, const std::vector<double>& a, double c,
                  const NonlinearTerms& terms) {
        std::fill(data_.begin(), data_.end(), 0.0);
        const int n = n_;
        double* j = data_.data();
        const std::size_t ld = dim_;

        if (sys.family == WaveFamily::Unidirectional) {
            for (int k = 0; k <= n; ++k) j[std::size_t(k) * ld + k] = sys.sym[k] - c;
            // d(phi^2)_k/da_l: products cos(m x) cos(l x) send a_m half to
            // k = m+l and half to k = |m-l|; doubled by the product rule.
            for (int l = 0; l <= n; ++l) {
                double* col = j + std::size_t(l) * ld;
                for (int m = 0; m <= n; ++m) {
                    const double w = a[m];
                    const int k1 = m + l;
                    if (k1 <= n) col[k1] += w;
                    col[std::abs(m - l)] += w;
                }
            }
            for (int k = 0; k <= n; ++k) j[std::size_t(n + 1) * ld + k] = -a[k];
        } else {
            for (int k = 0; k <= n; ++k) j[std::size_t(k) * ld + k] = sys.sym[k] - c * c;
            const std::vector<double>& sq = terms.sq;
            for (int l = 0; l <= n; ++l) {
                double* col = j + std::size_t(l) * ld;
                for (int m = 0; m <= n; ++m) { // 3c * M[v]
                    const double w = 1.5 * c * a[m];
                    const int k1 = m + l;
                    if (k1 <= n) col[k1] += w;
                    col[std::abs(m - l)] += w;
                }
                const int m_max = static_cast<int>(sq.size()) - 1;
                for (int m = 0; m <= m_max; ++m) { // -(3/2) M[v^2]
                    const double w = -0.75 * sq[m];
                    const int k1 = m + l;
                    if (k1 <= n) col[k1] += w;
                    const int k2 = std::abs(m - l);
                    if (k2 <= n) col[k2] += w;
                }
            }
            for (int k = 0; k <= n; ++k)
                j[std::size_t(n + 1) * ld + k] = -2.0 * c * a[k] + 1.5 * (k < (int)sq.size() ? sq[k] : 0.0);
        }
        for (int l = 0; l <= n; ++l) j[std::size_t(l) * ld + (n + 1)] = 1.0;
        j[std::size_t(n + 1) * ld + (n + 1)] = 0.0;
        factored_ = false;
    }

    void factor() {
        int info = 0;
        dgetrf_(&dim_, &dim_, data_.data(), &dim_, ipiv_.data(), &info);
        if (info != 0) throw SingularJacobian("Newton Jacobian factorization failed, info=" +
                                              std::to_string(info));
        factored_ = true;
    }

    bool factored() const { return factored_; }

    void solve(std::vector<double>& rhs) const {
        if (!factored_) throw SingularJacobian("solve called before factorization");
        const char trans = 'N';
        const int one = 1;
        int info = 0;
        dgetrs_(&trans, &dim_, &one, data_.data(), &dim_, ipiv_.data(), rhs.data(), &dim_,
                &info);
        if (info != 0) throw SingularJacobian("Newton backsolve failed");
    }

  private:
    int n_;
    int dim_;
    std::vector<double> data_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

WaveProfile make_profile(const System& sys, const std::vector<double>& a, double c,
                         double residual_norm) {
    WaveProfile p;
    p.family = sys.family;
    p.period = sys.period;
    p.speed_c = c;
    p.modes = a;
    p.residual_norm = residual_norm;
    p.surface_elevation = sys.family == WaveFamily::Unidirectional;
    std::vector<double> half = coeff_to_grid_half(a, sys.n);
    p.grid_values.resize(std::size_t(2) * sys.n);
    for (int j = 0; j <= sys.n; ++j) p.grid_values[j] = half[j];
    for (int j = sys.n + 1; j < 2 * sys.n; ++j) p.grid_values[j] = half[2 * sys.n - j];
    return p;
}

struct NewtonOutcome {
    std::vector<double> a;
    double c;
    int iterations;
    double residual_norm;
};

NewtonOutcome newton_core(const System& sys, std::vector<double> a, double c, double mu,
                          const SolverConfig& cfg, NewtonMatrix& matrix) {
    const int n = sys.n;
    a.resize(n + 1, 0.0);

    auto norm_of = [&](const std::vector<double>& r, double rc) {
        double nr = 0.0;
        for (double v : r) nr = std::max(nr, std::abs(v));
        return std::max(nr, std::abs(rc));
    };

    NonlinearTerms terms = residual_coeffs(sys, a, c);
    double constraint = std::accumulate(a.begin(), a.end(), 0.0) - mu;
    double norm = norm_of(terms.residual, constraint);
    double previous_norm = norm;
    bool fresh_factor = false;

    for (int it = 1; it <= cfg.newton_max_iter; ++it) {
        if (norm <= cfg.newton_tol) {
            const double hmax = height_max(sys.family, c);
            if (mu > hmax + 1e-12)
                throw NoConvergence("converged iterate violates the height bound");
            return {std::move(a), c, it - 1, norm};
        }

        // Chord strategy: reuse the factorization while it contracts well.
        const bool need_factor = !matrix.factored() ||
                                 (it > 1 && norm > 0.25 * previous_norm && !fresh_factor);
        if (need_factor) {
            matrix.assemble(sys, a, c, terms);
            matrix.factor();
            fresh_factor = true;
        } else {
            fresh_factor = false;
        }

        std::vector<double> rhs(n + 2);
        for (int k = 0; k <= n; ++k) rhs[k] = -terms.residual[k];
        rhs[n + 1] = -constraint;
        matrix.solve(rhs);

        double lambda = 1.0;
        for (int tries = 0; tries < 5; ++tries) {
            std::vector<double> a_new(a);
            for (int k = 0; k <= n; ++k) a_new[k] += lambda * rhs[k];
            const double c_new = c + lambda * rhs[n + 1];
            NonlinearTerms terms_new = residual_coeffs(sys, a_new, c_new);
            const double constraint_new =
                std::accumulate(a_new.begin(), a_new.end(), 0.0) - mu;
            const double norm_new = norm_of(terms_new.residual, constraint_new);
            if (norm_new < norm || tries == 4) {
                a = std::move(a_new);
                c = c_new;
                terms = std::move(terms_new);
                constraint = constraint_new;
                previous_norm = norm;
                norm = norm_new;
                break;
            }
            lambda *= 0.5;
        }
    }
    if (norm <= cfg.newton_tol) {
        const double hmax = height_max(sys.family, c);
        if (mu > hmax + 1e-12)
            throw NoConvergence("converged iterate violates the height bound");
        return {std::move(a), c, cfg.newton_max_iter, norm};
    }
    throw NoConvergence("Newton iteration cap hit with residual " + std::to_string(norm));
}

} // namespace

double WaveProfile::crest_height() const {
    double s = 0.0;
    for (double a : modes) s += a;
    return s;
}

double WaveProfile::value(double x) const {
    const double theta = kTwoPi * x / period;
    const double ct = std::cos(theta);
    double b1 = 0.0, b2 = 0.0;
    for (int k = n_modes(); k >= 1; --k) {
        const double b0 = modes[k] + 2.0 * ct * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return modes[0] + ct * b1 - b2;
}

double WaveProfile::derivative(double x) const {
    const double theta = kTwoPi * x / period;
    double sum = 0.0;
    for (int k = n_modes(); k >= 1; --k)
        sum -= (kTwoPi * k / period) * modes[k] * std::sin(k * theta);
    return sum;
}

void SolverConfig::validate() const {
    if (modes < 16 || continuation_modes < 16)
        throw InvalidInput("solver config: mode counts must be at least 16");
    if (!(newton_tol > 0.0) || !(stop_gap > 0.0) || !(period > 0.0))
        throw InvalidInput("solver config: tolerances and period must be positive");
    if (!(step_min > 0.0) || !(step_max >= step_min))
        throw InvalidInput("solver config: requires 0 < step_min <= step_max");
}

double height_max(WaveFamily family, double c) {
    return family == WaveFamily::Unidirectional ? 0.5 * c
                                                : (1.0 - 1.0 / std::sqrt(3.0)) * c;
}

double bifurcation_speed(WaveFamily family, double period) {
    const double xi = kTwoPi / period;
    if (family == WaveFamily::Unidirectional) {
        // c phi - phi^2 linearizes to c phi: c0 equals the K_W symbol.
        return std::sqrt(std::tanh(xi) / xi);
    }
    // v(c-v)(c-v/2) linearizes to c^2 v: c0^2 equals the K_B symbol.
    return std::sqrt(std::tanh(xi) / xi);
}

std::vector<double> residual_unidirectional(const WaveProfile& profile, double c) {
    System sys(WaveFamily::Unidirectional, profile.period, profile.n_modes());
    NonlinearTerms t = residual_coeffs(sys, profile.modes, c);
    std::vector<double> half = coeff_to_grid_half(t.residual, sys.n);
    std::vector<double> full(std::size_t(2) * sys.n);
    for (int j = 0; j <= sys.n; ++j) full[j] = half[j];
    for (int j = sys.n + 1; j < 2 * sys.n; ++j) full[j] = half[2 * sys.n - j];
    return full;
}

std::vector<double> residual_bidirectional(const WaveProfile& profile, double c) {
    System sys(WaveFamily::Bidirectional, profile.period, profile.n_modes());
    NonlinearTerms t = residual_coeffs(sys, profile.modes, c);
    std::vector<double> half = coeff_to_grid_half(t.residual, sys.n);
    std::vector<double> full(std::size_t(2) * sys.n);
    for (int j = 0; j <= sys.n; ++j) full[j] = half[j];
    for (int j = sys.n + 1; j < 2 * sys.n; ++j) full[j] = half[2 * sys.n - j];
    return full;
}

WaveProfile recover_phi(const WaveProfile& v_profile, double c) {
    const int n = v_profile.n_modes();
    const int m_big = 4 * n;
    std::vector<double> v = coeff_to_grid_half(v_profile.modes, m_big);
    std::vector<double> phi_grid(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) phi_grid[j] = c * v[j] - 0.5 * v[j] * v[j];
    std::vector<double> coeffs = grid_half_to_coeff(phi_grid);
    coeffs.resize(std::size_t(2) * n + 1); // phi = c v - v^2/2 is exactly degree 2N

    WaveProfile phi;
    phi.family = v_profile.family;
    phi.period = v_profile.period;
    phi.speed_c = c;
    phi.modes = std::move(coeffs);
    phi.residual_norm = v_profile.residual_norm;
    phi.surface_elevation = true;
    const int n2 = phi.n_modes();
    std::vector<double> half = coeff_to_grid_half(phi.modes, n2);
    phi.grid_values.resize(std::size_t(2) * n2);
    for (int j = 0; j <= n2; ++j) phi.grid_values[j] = half[j];
    for (int j = n2 + 1; j < 2 * n2; ++j) phi.grid_values[j] = half[2 * n2 - j];
    return phi;
}

WaveProfile newton_solve(WaveFamily family, const WaveProfile& initial, double mu,
                         const SolverConfig& cfg) {
    cfg.validate();
    const int n = initial.n_modes();
    System sys(family, initial.period, n);
    NewtonMatrix matrix(n);
    NewtonOutcome out = newton_core(sys, initial.modes, initial.speed_c, mu, cfg, matrix);
    return make_profile(sys, out.a, out.c, out.residual_norm);
}

ContinuationResult continue_to_highest(WaveFamily family, const SolverConfig& cfg) {
    cfg.validate();
    const int n = cfg.continuation_modes;
    System sys(family, cfg.period, n);
    NewtonMatrix matrix(n);

    const double c0 = bifurcation_speed(family, cfg.period);

    ContinuationResult result;
    std::vector<double> a(n + 1, 0.0);
    double mu = std::min(0.01, 0.05 * height_max(family, c0));
    a[1] = mu;
    double c = c0;

    NewtonOutcome current = newton_core(sys, a, c, mu, cfg, matrix);
    result.history.push_back({mu, current.c, current.residual_norm, current.iterations});

    std::vector<double> a_prev = current.a;
    double c_prev = current.c;
    double mu_prev = mu;

    double step = cfg.step_initial;
    const int snapshot_stride = 8;
    int accepted = 0;

    while (true) {
        const double gap = height_max(family, current.c) - mu;
        if (gap < cfg.stop_gap) break;

        const double dmu = std::min({step, 0.5 * gap, cfg.step_max});
        const double mu_next = mu + dmu;

        // Secant predictor along the branch.
        std::vector<double> guess(current.a);
        double c_guess = current.c;
        if (mu > mu_prev) {
            const double ratio = dmu / (mu - mu_prev);
            for (int k = 0; k <= n; ++k)
                guess[k] += ratio * (current.a[k] - a_prev[k]);
            c_guess += ratio * (current.c - c_prev);
        }

        try {
            NewtonOutcome next = newton_core(sys, guess, c_guess, mu_next, cfg, matrix);
            a_prev = std::move(current.a);
            c_prev = current.c;
            mu_prev = mu;
            current = std::move(next);
            mu = mu_next;
            result.history.push_back({mu, current.c, current.residual_norm,
                                      current.iterations});
            ++accepted;
            if (accepted % snapshot_stride == 0 && result.profiles.size() < 64)
                result.profiles.push_back(make_profile(sys, current.a, current.c,
                                                       current.residual_norm));
            if (current.iterations <= 4) step = std::min(step * 1.4, cfg.step_max);
        } catch (const Error&) {
            step *= 0.5;
            if (step < cfg.step_min)
                throw BranchStalled("continuation step fell below step_min at mu=" +
                                    std::to_string(mu));
        }
    }

    result.final = make_profile(sys, current.a, current.c, current.residual_norm);
    result.profiles.push_back(result.final);
    return result;
}

WaveProfile refine_modes(const WaveProfile& profile, int new_modes, const SolverConfig& cfg) {
    System sys(profile.family, profile.period, new_modes);
    NewtonMatrix matrix(new_modes);
    std::vector<double> a = profile.modes;
    a.resize(new_modes + 1, 0.0);
    const double mu = profile.crest_height();
    NewtonOutcome out = newton_core(sys, a, profile.speed_c, mu, cfg, matrix);
    return make_profile(sys, out.a, out.c, out.residual_norm);
}

ContinuationResult solve_highest(WaveFamily family, const SolverConfig& cfg) {
    cfg.validate();
    SolverConfig stage = cfg;
    stage.continuation_modes = std::min(cfg.continuation_modes, cfg.modes);
    stage.stop_gap = cfg.stop_gap * 0.6; // keep margin for the mode escalation

    ContinuationResult result = continue_to_highest(family, stage);
    int n = stage.continuation_modes;
    while (n < cfg.modes) {
        n = std::min(2 * n, cfg.modes);
        result.final = refine_modes(result.final, n, cfg);
    }

    // The speed drifts slightly with resolution; take extra continuation
    // steps at full resolution if the drift reopened the gap.
    int extra = 0;
    while (height_max(family, result.final.speed_c) - result.final.crest_height() >=
               cfg.stop_gap &&
           extra < 8) {
        const double gap = height_max(family, result.final.speed_c) -
                           result.final.crest_height();
        const double mu_next = result.final.crest_height() + 0.5 * gap;
        result.final = newton_solve(family, result.final, mu_next, cfg);
        result.history.push_back({mu_next, result.final.speed_c,
                                  result.final.residual_norm, 0});
        ++extra;
    }
    result.profiles.push_back(result.final);
    return result;
}

std::vector<double> spectral_derivative(const WaveProfile& profile) {
    const int n = profile.n_modes();
    const double omega = kTwoPi / profile.period;

    std::vector<double> deriv_half(n + 1, 0.0);
    if (n >= 2) {
        std::vector<double> in(n - 1), out(n - 1);
        for (int m = 1; m < n; ++m) in[m - 1] = omega * m * profile.modes[m];
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_plan plan =
                fftw_plan_r2r_1d(n - 1, in.data(), out.data(), FFTW_RODFT00, FFTW_ESTIMATE);
            fftw_execute(plan);
            fftw_destroy_plan(plan);
        }
        // RODFT00: out_k = 2 sum_j in_j sin(pi (j+1)(k+1)/n)
        for (int j = 1; j < n; ++j) deriv_half[j] = -0.5 * out[j - 1];
    }
    // Endpoints x = 0 and x = P/2 are even-symmetry points: derivative 0.
    std::vector<double> full(std::size_t(2) * n, 0.0);
    for (int j = 1; j <= n; ++j) full[j] = deriv_half[j];
    for (int j = n + 1; j < 2 * n; ++j) full[j] = -deriv_half[2 * n - j];
    return full;
}

} // namespace whitcrest::solver
