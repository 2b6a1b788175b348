#include "e2espin/spin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "e2espin/errors.hpp"

namespace e2espin {

namespace {

constexpr double kUnitTol = 1e-12;

Mat4 outer(const Eigen::Vector4cd& v) { return v * v.adjoint(); }

// Unnormalized outer product of the final state; trace = u.
Mat4 unnormalized_rho(const AmplitudePair& amps, const PolarizationVector& z1, const PolarizationVector& z2) {
    return outer(final_pair_state(amps, spinor_along(z1), spinor_along(z2)).amp);
}

} // namespace

PolarizationVector::PolarizationVector(double x, double y, double z) : v_(x, y, z) {
    if (!v_.allFinite()) throw DomainError("polarization vector has non-finite components");
    if (v_.norm() > 1.0 + kUnitTol)
        throw DomainError("polarization vector norm " + std::to_string(v_.norm()) + " exceeds 1");
}

bool PolarizationVector::is_unit() const { return std::abs(v_.norm() - 1.0) <= kUnitTol; }

bool PairSpinState::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

PairSpinState PairSpinState::normalized() const {
    const double n = std::sqrt(norm2());
    if (n == 0.0) throw DegenerateStateError("cannot normalize a zero pair state");
    return PairSpinState{amp / n};
}

SpinDensityMatrix::SpinDensityMatrix(const Mat4& m, Basis basis) : m_(m), basis_(basis) {
    if (!m.allFinite()) throw ValidationError("density matrix has non-finite entries");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) throw ValidationError("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-12) throw ValidationError("density matrix trace " + std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < -1e-10)
        throw ValidationError("density matrix has negative eigenvalue " + std::to_string(lmin));
}

SpinDensityMatrix SpinDensityMatrix::projector(const PairSpinState& psi) {
    const auto n = psi.normalized();
    return SpinDensityMatrix(outer(n.amp));
}

SpinDensityMatrix SpinDensityMatrix::maximally_mixed() { return SpinDensityMatrix(Mat4::Identity() / 4.0); }

Spinor bloch_spinor(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("bloch_spinor: theta outside [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * kPi)) throw DomainError("bloch_spinor: phi outside [0, 2pi)");
    return {Complex(std::cos(0.5 * theta), 0.0), std::sin(0.5 * theta) * std::polar(1.0, phi)};
}

Spinor spinor_along(const PolarizationVector& zeta) {
    if (!zeta.is_unit()) throw DomainError("spinor_along: polarization vector is not a unit vector");
    const Vec3 v = zeta.vec() / zeta.norm();
    const double theta = std::acos(std::clamp(v.z(), -1.0, 1.0));
    double phi = std::atan2(v.y(), v.x());
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi) phi = 0.0;
    return bloch_spinor(theta, phi);
}

Vec3 pauli_expectation(const Spinor& s) {
    const Complex c = std::conj(s.up) * s.down;
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(s.up) - std::norm(s.down)};
}

std::array<Complex, 4> bell_coefficients(const AmplitudePair& amps, const Spinor& chi, const Spinor& eta) {
    const Complex al = chi.up, be = chi.down, ga = eta.up, de = eta.down;
    const Complex minus = amps.direct - amps.exchange;
    const Complex plus = amps.direct + amps.exchange;
    return {minus * (al * ga + be * de), minus * (al * ga - be * de), minus * (al * de + be * ga),
            plus * (al * de - be * ga)};
}

PairSpinState final_pair_state(const AmplitudePair& amps, const Spinor& chi, const Spinor& eta) {
    const Eigen::Vector4cd ce(chi.up * eta.up, chi.up * eta.down, chi.down * eta.up, chi.down * eta.down);
    const Eigen::Vector4cd ec(eta.up * chi.up, eta.up * chi.down, eta.down * chi.up, eta.down * chi.down);
    return PairSpinState{amps.direct * ce - amps.exchange * ec};
}

double final_state_norm(const AmplitudePair& amps, double p_dot) {
    return std::norm(amps.direct) + std::norm(amps.exchange) -
           (1.0 + p_dot) * (amps.direct * std::conj(amps.exchange)).real();
}

SpinDensityMatrix rho_pure(const AmplitudePair& amps, const PolarizationVector& zeta1,
                           const PolarizationVector& zeta2) {
    if (!zeta1.is_unit() || !zeta2.is_unit()) throw DomainError("rho_pure: polarizations must be unit vectors");
    const double scale = std::norm(amps.direct) + std::norm(amps.exchange);
    const Mat4 m = unnormalized_rho(amps, zeta1, zeta2);
    const double u = m.trace().real();
    if (!(u > 1e-14 * scale)) throw DegenerateStateError("final spin state vanishes (u = 0)");
    return SpinDensityMatrix(m / u);
}

SpinDensityMatrix rho_mixed(const AmplitudePair& amps, const PolarizationVector& p1, const PolarizationVector& p2) {
    const double n1 = p1.norm(), n2 = p2.norm();
    const PolarizationVector z1 = n1 > 0.0 ? PolarizationVector(p1.vec() / n1) : PolarizationVector(0, 0, 1);
    const PolarizationVector z2 = n2 > 0.0 ? PolarizationVector(p2.vec() / n2) : PolarizationVector(0, 0, 1);
    const double w1[2] = {0.5 * (1.0 + std::min(n1, 1.0)), 0.5 * (1.0 - std::min(n1, 1.0))};
    const double w2[2] = {0.5 * (1.0 + std::min(n2, 1.0)), 0.5 * (1.0 - std::min(n2, 1.0))};
    const PolarizationVector s1[2] = {z1, -z1};
    const PolarizationVector s2[2] = {z2, -z2};

    Mat4 acc = Mat4::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (w1[i] * w2[j] > 0.0) acc += (w1[i] * w2[j]) * unnormalized_rho(amps, s1[i], s2[j]);

    const double scale = std::norm(amps.direct) + std::norm(amps.exchange);
    const double tr = acc.trace().real();
    if (!(tr > 1e-14 * scale)) throw DegenerateStateError("averaged final spin state vanishes");
    Mat4 m = acc / tr;
    m = 0.5 * (m + m.adjoint()).eval();
    return SpinDensityMatrix(m);
}

Mat2 reduced_density(const SpinDensityMatrix& rho, Subsystem keep) {
    const Mat4 m = rho.basis() == Basis::product ? rho.matrix() : to_product_basis(rho).matrix();
    Mat2 r = Mat2::Zero();
    // index = 2*s1 + s2
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 2; ++k)
                r(a, b) += keep == Subsystem::first ? m(2 * a + k, 2 * b + k) : m(2 * k + a, 2 * k + b);
    return r;
}

const Mat4& bell_basis_matrix() {
    static const Mat4 u = [] {
        const double s = 1.0 / kSqrt2;
        Mat4 m;
        m << s, s, 0, 0,
             0, 0, s, s,
             0, 0, s, -s,
             s, -s, 0, 0;
        return m;
    }();
    return u;
}

SpinDensityMatrix to_bell_basis(const SpinDensityMatrix& rho) {
    if (rho.basis() == Basis::bell) return rho;
    const Mat4& u = bell_basis_matrix();
    return SpinDensityMatrix(u.adjoint() * rho.matrix() * u, Basis::bell);
}

SpinDensityMatrix to_product_basis(const SpinDensityMatrix& rho) {
    if (rho.basis() == Basis::product) return rho;
    const Mat4& u = bell_basis_matrix();
    return SpinDensityMatrix(u * rho.matrix() * u.adjoint(), Basis::product);
}

Mat4 swap_qubits(const Mat4& m) {
    static constexpr int perm[4] = {0, 2, 1, 3};
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(perm[i], perm[j]) = m(i, j);
    return out;
}

} // namespace e2espin
