#pragma once

#include <array>
#include <string>

namespace bms {

/// Diagonal metric on the four translation directions e_0..e_3.
///
/// The two Lorentzian signatures are the only values the configuration layer
/// accepts, but any diagonal is allowed programmatically (a degenerate
/// diag(1,0,0,0) restricts the wave operator to the e_0 direction).
struct Metric {
    std::array<double, 4> diag{1.0, -1.0, -1.0, -1.0};

    static constexpr Metric mostly_minus() { return Metric{{1.0, -1.0, -1.0, -1.0}}; }
    static constexpr Metric mostly_plus() { return Metric{{-1.0, 1.0, 1.0, 1.0}}; }

    constexpr double operator()(int mu) const { return diag[static_cast<std::size_t>(mu)]; }

    double contract(const std::array<double, 4>& a, const std::array<double, 4>& b) const {
        double s = 0.0;
        for (int mu = 0; mu < 4; ++mu) s += diag[mu] * a[mu] * b[mu];
        return s;
    }

    /// "+---" or "-+++"; throws ConfigError otherwise.
    static Metric from_signature(const std::string& sig);
    std::string signature() const;

    friend bool operator==(const Metric&, const Metric&) = default;
};

} // namespace bms
