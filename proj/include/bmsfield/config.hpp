#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bmsfield/chaos_basis.hpp"
#include "bmsfield/metric.hpp"

namespace bms {

/// Run configuration shared by the CLI and the verification suites.
struct Config {
    int L_max = 8;
    double k = 2.0;
    int N = 6;
    Metric signature = Metric::mostly_minus();
    std::vector<std::pair<int, int>> st_directions{{2, -2}, {2, -1}, {2, 0}, {2, 1}, {2, 2}};
    std::uint64_t seed = 20240917;
    DegreePolicy degree_policy = DegreePolicy::strict;
    std::map<std::string, double> tolerances = default_tolerances();

    // Sizes of the randomized batteries.
    std::int64_t mc_samples = 1000000;
    int fd_states = 50;
    int induced_n_chi = 60;
    int induced_n_sphere = 20;
    int induced_refine = 2;
    double boost_rapidity = 0.2;
    double weight_exponent = 0.25;

    static std::map<std::string, double> default_tolerances();

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
    DirectionSet directions() const { return DirectionSet(st_directions, k); }
    /// Throws ConfigError for an unknown name.
    double tol(const std::string& name) const;

    /// Keys not present keep their defaults; unknown keys are errors.
    static Config from_json_text(const std::string& text);
    static Config load(const std::string& path);
    std::string to_json_text() const;
};

/// The explicit path if given, else $BMSFIELD_CONFIG if set, else nothing.
std::optional<std::string> resolve_config_path(const std::optional<std::string>& explicit_path);

} // namespace bms
