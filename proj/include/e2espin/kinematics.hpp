#pragma once

#include "e2espin/spin.hpp"

namespace e2espin {

inline constexpr double kHartreeEv = 27.211386245988;

inline double ev_to_hartree(double ev) { return ev / kHartreeEv; }

// Coplanar geometry in the xz plane, incident beam along +z, target at rest.
// Angles are signed, positive towards +x. Energies in hartree.
struct Kinematics {
    double e0 = 0.0;
    double ea = 0.0;
    double eb = 0.0;
    double et = 0.0;
    double theta_a = 0.0;
    double theta_b = 0.0;
    Vec3 k0 = Vec3::Zero();
    Vec3 ka = Vec3::Zero();
    Vec3 kb = Vec3::Zero();

    // Momentum transferred to the residual ion.
    Vec3 q() const { return ka + kb - k0; }
};

// eA is fixed by energy conservation: eA = e0 + eT - eB.
Kinematics build_coplanar(double e0, double eb, double theta_a, double theta_b, double et);

struct CrossSections {
    double i_par = 0.0;    // parallel spins
    double i_anti_d = 0.0; // antiparallel, direct
    double i_anti_e = 0.0; // antiparallel, exchange
    double i_s = 0.0;      // singlet part of the unpolarized cross section
    double i_t = 0.0;      // triplet part

    double i_anti() const { return i_anti_d + i_anti_e; }
};

// kA kB / ((2 pi)^5 k0)
double tdcs_prefactor(const Kinematics& kin);

CrossSections tdcs_basic(const AmplitudePair& amps, const Kinematics& kin);

// Spin-unresolved cross section for beam/target polarizations with P1.P2 = p_dot.
double tdcs_polarized(const AmplitudePair& amps, double p_dot, const Kinematics& kin);

} // namespace e2espin
