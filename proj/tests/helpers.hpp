#pragma once

#include <random>

#include "e2espin/spin.hpp"

namespace testing {

using namespace e2espin;

struct Rng {
    std::mt19937_64 gen;
    std::normal_distribution<double> normal{0.0, 1.0};
    std::uniform_real_distribution<double> uniform{0.0, 1.0};

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double u() { return uniform(gen); }
    double n() { return normal(gen); }
    Complex c() { return {n(), n()}; }
    Vec3 unit() {
        Vec3 v(n(), n(), n());
        return v.normalized();
    }
    PolarizationVector zeta() { return PolarizationVector(unit()); }
    PolarizationVector partial() { return PolarizationVector(unit() * u()); }
    AmplitudePair amps() { return {c(), c()}; }

    // random full-rank density matrix
    Mat4 rho() {
        Mat4 a;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a(i, j) = c();
        Mat4 m = a * a.adjoint();
        m /= m.trace().real();
        return 0.5 * (m + m.adjoint());
    }
};

inline Mat4 projector(const Eigen::Vector4cd& v) { return v * v.adjoint() / v.squaredNorm(); }

// product basis (uu, ud, du, dd)
inline Eigen::Vector4cd singlet() { return Eigen::Vector4cd(0, 1, -1, 0) / std::sqrt(2.0); }

} // namespace testing
