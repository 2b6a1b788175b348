#include "e2espin/bell.hpp"

#include <cmath>
#include <string>

#include "e2espin/errors.hpp"

namespace e2espin {

DetectorSettings DetectorSettings::standard() {
    const double s = 1.0 / kSqrt2;
    return {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(-s, 0, -s), Vec3(-s, 0, s)};
}

void DetectorSettings::validate() const {
    const Vec3* all[4] = {&a1, &a2, &b1, &b2};
    const char* names[4] = {"a1", "a2", "b1", "b2"};
    for (int i = 0; i < 4; ++i) {
        const double n = all[i]->norm();
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12)
            throw ValidationError(std::string("detector setting ") + names[i] + " is not a unit vector");
    }
}

Mat2 pauli_projection(const Vec3& n) {
    Mat2 m;
    m << Complex(n.z(), 0.0), Complex(n.x(), -n.y()),
         Complex(n.x(), n.y()), Complex(-n.z(), 0.0);
    return m;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Mat4 chsh_operator(const DetectorSettings& s) {
    s.validate();
    const Mat2 a1 = pauli_projection(s.a1), a2 = pauli_projection(s.a2);
    const Mat2 b1 = pauli_projection(s.b1), b2 = pauli_projection(s.b2);
    return kron(a1, b1 - b2) + kron(a2, b1 + b2);
}

double chsh_expectation(const SpinDensityMatrix& rho, const DetectorSettings& s) {
    const SpinDensityMatrix p = to_product_basis(rho);
    return (p.matrix() * chsh_operator(s)).trace().real();
}

double chsh_closed_form(const AmplitudePair& amps, const PolarizationVector& zeta1,
                        const PolarizationVector& zeta2) {
    const double d2 = std::norm(amps.direct), e2 = std::norm(amps.exchange);
    const double re = (amps.direct * std::conj(amps.exchange)).real();
    const Vec3& z1 = zeta1.vec();
    const Vec3& z2 = zeta2.vec();
    const double den = d2 + e2 - re * (1.0 + z1.dot(z2));
    if (!(den > 1e-14 * (d2 + e2))) throw DegenerateStateError("chsh_closed_form: final spin state vanishes");
    const double num = 2.0 * re * (1.0 - z1.y() * z2.y()) - (d2 + e2) * (z1.x() * z2.x() + z1.z() * z2.z());
    return kSqrt2 * num / den;
}

double bell_lhs_cross_sections(double i_anti, double i_par, const PolarizationVector& p1,
                               const PolarizationVector& p2) {
    if (i_anti < 0.0 || i_par < 0.0) throw DomainError("cross sections must be nonnegative");
    const double pp = p1.dot(p2);
    const double anti = i_anti * (1.0 - pp);
    const double den = anti + i_par * (1.0 + pp);
    if (den == 0.0) throw DomainError("bell_lhs_cross_sections: zero denominator");
    return (anti - i_par * (1.0 - p1.y() * p2.y())) / den;
}

double spin_asymmetry(double i_anti, double i_par) {
    if (!(i_anti + i_par > 0.0)) throw DomainError("spin_asymmetry: zero denominator");
    return (i_anti - i_par) / (i_anti + i_par);
}

} // namespace e2espin
