#pragma once

#include <cstdint>
#include <optional>

#include "e2espin/kinematics.hpp"
#include "e2espin/special.hpp"

namespace e2espin {

inline constexpr double kHydrogenCharge = 1.0;

double hydrogen_1s_position(const Vec3& r, double charge = kHydrogenCharge);
// Fourier transform with the (2 pi)^-3 d^3q normalization.
double hydrogen_1s_momentum(double q, double charge = kHydrogenCharge);
double hydrogen_1s_momentum(const Vec3& q, double charge = kHydrogenCharge);

// Plane-wave Born amplitudes for ionization of hydrogen 1s.
AmplitudePair pwba_amplitudes(const Kinematics& kin);

// Incoming-wave Coulomb continuum state exp(ik.r) N 1F1(i xi, 1, -i(kr + k.r)), xi = -Z/k.
// rho_max > 0 tabulates 1F1 for kr + k.r up to rho_max.
class CoulombWave {
public:
    CoulombWave(const Vec3& k, double charge, double rho_max = 0.0);

    Complex operator()(const Vec3& r) const;
    // Everything except the plane-wave factor.
    Complex distortion(const Vec3& r) const;

    double xi() const { return xi_; }
    Complex normalization() const { return norm_; }

private:
    Vec3 k_;
    double kmag_;
    double xi_;
    Complex norm_;
    Kummer1F1 hyp_;
    std::optional<KummerRayTable> table_;
};

Complex coulomb_wave(const Vec3& k, const Vec3& r, double charge);

// Electron-electron Coulomb factor N(xi) 1F1(i xi, 1, -i(k r12 + k.r12)), xi = 1/(2k),
// k the relative momentum (kA - kB)/2. For xi > kVanishingXi the factor is below 1e-100
// at every r12 < 1e3 and is treated as zero.
class EeCorrelation {
public:
    static constexpr double kVanishingXi = 100.0;

    explicit EeCorrelation(const Vec3& k_ab, double rho_max = 0.0);

    Complex operator()(const Vec3& r12) const;
    bool vanishes() const { return vanishes_; }
    double xi() const { return xi_; }

private:
    Vec3 k_;
    double kmag_;
    double xi_;
    bool vanishes_;
    Complex norm_;
    Kummer1F1 hyp_;
    std::optional<KummerRayTable> table_;
};

Complex ee_correlation(const Vec3& k_ab, const Vec3& r12);

struct McConfig {
    std::uint64_t samples = 10'000'000; // integrand evaluations per amplitude
    std::uint64_t seed = 0;
    double lambda1 = 1.0;               // inverse transverse length of the line sampler
    double r_max = 40.0;
    bool debug_free_limit = false;      // plane waves, no e-e factor
    int line_points = 0;                // points per line; 0 picks from |k0 - k| r_max
    double taper = 0.25;                // fraction of r_max over which the window falls to 0
    unsigned workers = 1;               // 0 = hardware concurrency

    static constexpr std::uint64_t kMinSamples = 1000;
    void validate() const;
};

struct AmplitudeEstimate {
    Complex value;
    double stderr_re = 0.0;
    double stderr_im = 0.0;
    std::uint64_t evaluations = 0;
    std::uint64_t rejected = 0;

    double stderr_abs() const;
};

enum class Ordering { direct, exchange };

// Monte Carlo estimate of the three-Coulomb T-matrix element. The exchange ordering
// reuses the direct sample set, reflected through the plane that holds the beam and
// bisects kA, kB; at mirror-symmetric kinematics both orderings agree bit for bit.
AmplitudeEstimate c3_tmatrix(const Kinematics& kin, Ordering ordering, const McConfig& cfg);

enum class Model { pwba, c3 };

struct AmplitudeResult {
    AmplitudePair amps;
    AmplitudeEstimate direct;
    AmplitudeEstimate exchange;
};

AmplitudeResult amplitude_pair(Model model, const Kinematics& kin, const McConfig& cfg);

} // namespace e2espin
