#pragma once

#include <array>
#include <cstdint>

#include "e2espin/bell.hpp"

namespace e2espin {

struct CoincidenceCounts {
    std::uint64_t n_pp = 0;
    std::uint64_t n_pm = 0;
    std::uint64_t n_mp = 0;
    std::uint64_t n_mm = 0;

    std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }
    // (n_pp + n_mm - n_pm - n_mp) / n
    double correlator() const;
};

// P(+,+), P(+,-), P(-,+), P(-,-) for spin projections along a (first) and b (second).
std::array<double, 4> outcome_probabilities(const SpinDensityMatrix& rho, const Vec3& a, const Vec3& b);

// Multinomial draw by inverse CDF; `stream` separates setting pairs sharing a seed.
CoincidenceCounts sample_coincidences(const SpinDensityMatrix& rho, const Vec3& a, const Vec3& b, std::uint64_t n,
                                      std::uint64_t seed, std::uint32_t stream = 0);

struct ChshEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

// Counts ordered (a1 b1, a1 b2, a2 b1, a2 b2).
ChshEstimate chsh_estimate(const std::array<CoincidenceCounts, 4>& counts);

struct ChshExperiment {
    std::array<CoincidenceCounts, 4> counts;
    ChshEstimate estimate;
};

// n samples at each of the four setting pairs; setting pair i uses stream i.
ChshExperiment run_chsh_experiment(const SpinDensityMatrix& rho, std::uint64_t n_per_setting, std::uint64_t seed,
                                   const DetectorSettings& s = DetectorSettings::standard(), unsigned workers = 1);

} // namespace e2espin
