#pragma once

#include "e2espin/spin.hpp"

namespace e2espin {

inline constexpr double kTsirelson = 2.0 * kSqrt2;
inline constexpr double kCrossSectionBound = 1.0 / kSqrt2;

struct DetectorSettings {
    Vec3 a1;
    Vec3 a2;
    Vec3 b1;
    Vec3 b2;

    // a1 = z, a2 = x, b1 = -(x+z)/sqrt2, b2 = (z-x)/sqrt2
    static DetectorSettings standard();
    void validate() const;
};

Mat2 pauli_projection(const Vec3& n);
Mat4 kron(const Mat2& a, const Mat2& b);

// A1 (B1 - B2) + A2 (B1 + B2)
Mat4 chsh_operator(const DetectorSettings& s = DetectorSettings::standard());
double chsh_expectation(const SpinDensityMatrix& rho, const DetectorSettings& s = DetectorSettings::standard());

// <Pi> at the standard settings in terms of amplitudes. zeta may be partial polarizations.
double chsh_closed_form(const AmplitudePair& amps, const PolarizationVector& zeta1, const PolarizationVector& zeta2);

// Cross-section form of the inequality; violated when the result exceeds 1/sqrt2.
double bell_lhs_cross_sections(double i_anti, double i_par, const PolarizationVector& p1,
                               const PolarizationVector& p2);

double spin_asymmetry(double i_anti, double i_par);

inline bool chsh_violated(double expectation) { return expectation > 2.0; }
inline bool cross_section_violated(double lhs) { return lhs > kCrossSectionBound; }

} // namespace e2espin
