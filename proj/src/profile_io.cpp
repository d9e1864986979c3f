#include "whitcrest/profile_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace whitcrest::io {

namespace {

using nlohmann::json;

std::string family_name(solver::WaveFamily family) {
    return family == solver::WaveFamily::Unidirectional ? "whitham" : "bidirectional";
}

solver::WaveFamily family_from(const std::string& name) {
    if (name == "whitham" || name == "unidirectional") return solver::WaveFamily::Unidirectional;
    if (name == "bidirectional") return solver::WaveFamily::Bidirectional;
    throw InvalidInput("unknown wave family '" + name + "'");
}

} // namespace

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out.good()) throw Error("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string profile_to_json(const solver::WaveProfile& profile) {
    json j;
    j["family"] = family_name(profile.family);
    j["period"] = profile.period;
    j["speed_c"] = profile.speed_c;
    j["modes"] = profile.modes;
    j["grid"] = profile.grid_values;
    j["residual_norm"] = profile.residual_norm;
    j["variable"] = profile.surface_elevation ? "phi" : "v";
    return j.dump(2) + "\n";
}

void write_profile_json(const solver::WaveProfile& profile, const std::string& path) {
    atomic_write(path, profile_to_json(profile));
}

solver::WaveProfile read_profile_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open profile '" + path + "'");
    json j;
    in >> j;

    solver::WaveProfile profile;
    profile.family = family_from(j.at("family").get<std::string>());
    profile.period = j.at("period").get<double>();
    profile.speed_c = j.at("speed_c").get<double>();
    profile.modes = j.at("modes").get<std::vector<double>>();
    profile.grid_values = j.at("grid").get<std::vector<double>>();
    profile.residual_norm = j.at("residual_norm").get<double>();
    profile.surface_elevation = j.value("variable", "phi") == std::string("phi");
    if (profile.modes.empty()) throw InvalidInput("profile '" + path + "' has no modes");
    return profile;
}

std::string history_to_csv(const std::vector<solver::BranchPoint>& history) {
    std::ostringstream out;
    out << "mu,c,residual,iterations\n";
    char line[128];
    for (const solver::BranchPoint& p : history) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.3e,%d\n", p.height_mu, p.speed_c,
                      p.residual_norm, p.iterations);
        out << line;
    }
    return out.str();
}

} // namespace whitcrest::io
