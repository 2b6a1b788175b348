#include "e2espin/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "e2espin/errors.hpp"

namespace e2espin {

namespace {

// sin is evaluated on |theta| so that mirrored angles give exactly mirrored vectors.
Vec3 in_plane(double k, double theta) {
    const double s = std::sin(std::abs(theta));
    return {k * (theta < 0.0 ? -s : s), 0.0, k * std::cos(theta)};
}

} // namespace

Kinematics build_coplanar(double e0, double eb, double theta_a, double theta_b, double et) {
    if (!std::isfinite(e0) || !std::isfinite(eb) || !std::isfinite(et) || !std::isfinite(theta_a) ||
        !std::isfinite(theta_b))
        throw KinematicsError("non-finite kinematic input");
    if (std::abs(theta_a) > kPi || std::abs(theta_b) > kPi)
        throw KinematicsError("emission angles must lie in [-pi, pi]");
    if (!(e0 > 0.0)) throw KinematicsError("incident energy must be positive");
    if (!(eb > 0.0)) throw KinematicsError("closed channel: eB = " + std::to_string(eb) + " <= 0");
    const double ea = e0 + et - eb;
    if (!(ea > 0.0)) throw KinematicsError("closed channel: eA = " + std::to_string(ea) + " <= 0");

    Kinematics k;
    k.e0 = e0;
    k.ea = ea;
    k.eb = eb;
    k.et = et;
    k.theta_a = theta_a;
    k.theta_b = theta_b;
    k.k0 = Vec3(0.0, 0.0, std::sqrt(2.0 * e0));
    k.ka = in_plane(std::sqrt(2.0 * ea), theta_a);
    k.kb = in_plane(std::sqrt(2.0 * eb), theta_b);
    return k;
}

double tdcs_prefactor(const Kinematics& kin) {
    const double two_pi = 2.0 * kPi;
    const double p5 = two_pi * two_pi * two_pi * two_pi * two_pi;
    return kin.ka.norm() * kin.kb.norm() / (p5 * kin.k0.norm());
}

CrossSections tdcs_basic(const AmplitudePair& amps, const Kinematics& kin) {
    const double c = tdcs_prefactor(kin);
    CrossSections x;
    x.i_par = c * std::norm(amps.direct - amps.exchange);
    x.i_anti_d = c * std::norm(amps.direct);
    x.i_anti_e = c * std::norm(amps.exchange);
    x.i_s = 0.25 * c * std::norm(amps.direct + amps.exchange);
    x.i_t = 0.75 * x.i_par;
    return x;
}

double tdcs_polarized(const AmplitudePair& amps, double p_dot, const Kinematics& kin) {
    // max() guards the p_dot = 1 rounding of |td - te|^2 below zero
    return tdcs_prefactor(kin) * std::max(0.0, final_state_norm(amps, p_dot));
}

} // namespace e2espin
