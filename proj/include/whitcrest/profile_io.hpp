#pragma once

// JSON profile files, branch-history CSV, and atomic writes shared by the
// CLI and the tests.

#include <string>
#include <vector>

#include "whitcrest/wave_solver.hpp"

namespace whitcrest::io {

// Writes content to path via a temp file and rename.
void atomic_write(const std::string& path, const std::string& content);

// Schema: {family, period, speed_c, modes, grid, residual_norm, variable}.
std::string profile_to_json(const solver::WaveProfile& profile);
void write_profile_json(const solver::WaveProfile& profile, const std::string& path);
solver::WaveProfile read_profile_json(const std::string& path);

std::string history_to_csv(const std::vector<solver::BranchPoint>& history);

} // namespace whitcrest::io
