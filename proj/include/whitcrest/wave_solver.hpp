#pragma once

// Even periodic steady waves of the uni- and bidirectional Whitham
// equations by cosine-basis collocation and Newton iteration, with
// continuation in the crest height toward the highest wave.

#include <vector>

#include "whitcrest/errors.hpp"
#include "whitcrest/kernels.hpp"

namespace whitcrest::solver {

enum class WaveFamily { Unidirectional, Bidirectional };

struct WaveProfile {
    WaveFamily family = WaveFamily::Unidirectional;
    double period = 2.0 * 3.14159265358979323846;
    double speed_c = 0.0;
    std::vector<double> modes;       // cosine coefficients a_0..a_N
    std::vector<double> grid_values; // 2N samples over one period, x_j = j P/(2N)
    double residual_norm = 0.0;
    bool surface_elevation = true; // false: bidirectional velocity variable v

    int n_modes() const { return static_cast<int>(modes.size()) - 1; }
    double crest_height() const; // value at x = 0
    double value(double x) const;      // Clenshaw evaluation of the cosine series
    double derivative(double x) const; // term-wise derivative series
};

struct SolverConfig {
    int modes = 1024;             // N of the final wave
    int continuation_modes = 1024; // N used while tracing the branch
    double period = 2.0 * 3.14159265358979323846;
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    double step_initial = 5e-3;
    double step_min = 1e-9;
    double step_max = 2e-2;
    double stop_gap = 1e-4; // stop when height_max(c) - mu < stop_gap

    void validate() const;
};

struct BranchPoint {
    double height_mu;
    double speed_c;
    double residual_norm;
    int iterations;
};

struct ContinuationResult {
    std::vector<BranchPoint> history;
    std::vector<WaveProfile> profiles; // decimated snapshots along the branch
    WaveProfile final;
};

// Maximal admissible height: c/2 resp. (1 - 1/sqrt(3)) c.
double height_max(WaveFamily family, double c);

// Speed of the small-amplitude bifurcation point for the fundamental mode.
double bifurcation_speed(WaveFamily family, double period);

// Dealiased residual of K_W*phi - phi(c - phi) on the 2N grid.
std::vector<double> residual_unidirectional(const WaveProfile& profile, double c);

// Dealiased residual of K_B*v - v(c - v)(c - v/2) on the 2N grid.
std::vector<double> residual_bidirectional(const WaveProfile& profile, double c);

// phi = c v - v^2/2 evaluated exactly (2N modes).
WaveProfile recover_phi(const WaveProfile& v_profile, double c);

// Solve with the crest pinned at mu; the speed c is an unknown.
WaveProfile newton_solve(WaveFamily family, const WaveProfile& initial, double mu,
                         const SolverConfig& cfg);

// Trace the branch from the bifurcation point until
// height_max(c) - mu < stop_gap, stepping mu with adaptive halving.
ContinuationResult continue_to_highest(WaveFamily family, const SolverConfig& cfg);

// Re-converge a profile with the mode count raised to new_modes (same mu).
WaveProfile refine_modes(const WaveProfile& profile, int new_modes, const SolverConfig& cfg);

// Continuation at cfg.continuation_modes followed by mode-doubling
// refinement up to cfg.modes; the standard way to produce a near-highest
// wave at high resolution.
ContinuationResult solve_highest(WaveFamily family, const SolverConfig& cfg);

// Spectral derivative sampled on the 2N grid.
std::vector<double> spectral_derivative(const WaveProfile& profile);

} // namespace whitcrest::solver
