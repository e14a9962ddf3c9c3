#pragma once

#include <random>
#include <string>
#include <vector>

#include "bmsfield/config.hpp"
#include "bmsfield/dynamics.hpp"

namespace bms {

/// How a measured defect is compared with its tolerance.
enum class Comparison { at_most, at_least };

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double defect = 0.0;
    double tolerance = 0.0;
    std::string tolerance_key;
    Comparison comparison = Comparison::at_most;
    std::string detail;
    double runtime_s = 0.0;
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double runtime_s = 0.0;

    bool passed() const;
    /// Runtimes are left out unless requested, so identical (config, seed) gives identical bytes.
    std::string to_json(bool include_runtime = false) const;
    std::string table() const;
};

const std::vector<std::string>& suite_names(); // cocycle, casimir, operators, transforms, variational, induced, all

/// Throws std::invalid_argument for an unknown suite and ConfigError for an invalid config.
VerificationReport run_suite(const std::string& name, const Config& config);

// Random inputs shared by the batteries and the tests.
SphereFunction random_sphere_function(int lmax, std::mt19937_64& rng);
/// Real coefficients N(0, 1) / sqrt(n!) up to `degree`.
HermiteSeries random_series(const DirectionSet& dirs, int cap, int degree, std::mt19937_64& rng);
/// psi and v at cap N, one multiplier of degree <= 2 per l = 2 slot.
FieldState random_state(const DirectionSet& dirs, int N, std::mt19937_64& rng);

/// Stable 64-bit seed for a named battery.
std::uint64_t derived_seed(std::uint64_t seed, const std::string& name);

} // namespace bms
