#pragma once

#include <array>

#include "e2espin/types.hpp"

namespace e2espin {

struct Spinor {
    Complex up;
    Complex down;
};

// Polarization (Bloch) vector with |P| <= 1.
class PolarizationVector {
public:
    PolarizationVector() = default;
    PolarizationVector(double x, double y, double z);
    explicit PolarizationVector(const Vec3& v) : PolarizationVector(v.x(), v.y(), v.z()) {}

    const Vec3& vec() const { return v_; }
    double x() const { return v_.x(); }
    double y() const { return v_.y(); }
    double z() const { return v_.z(); }
    double norm() const { return v_.norm(); }
    bool is_unit() const;
    double dot(const PolarizationVector& o) const { return v_.dot(o.v_); }
    PolarizationVector operator-() const { return PolarizationVector(-v_); }

private:
    Vec3 v_ = Vec3::Zero();
};

struct AmplitudePair {
    Complex direct;   // t_d
    Complex exchange; // t_e
};

// Product-basis amplitudes, ordered (uu, ud, du, dd).
struct PairSpinState {
    Eigen::Vector4cd amp = Eigen::Vector4cd::Zero();

    double norm2() const { return amp.squaredNorm(); }
    bool is_normalized(double tol = 1e-12) const;
    PairSpinState normalized() const;
};

enum class Basis { product, bell };

// Hermitian, unit-trace, PSD 4x4 matrix. Validated on construction.
class SpinDensityMatrix {
public:
    SpinDensityMatrix(const Mat4& m, Basis basis = Basis::product);

    const Mat4& matrix() const { return m_; }
    Basis basis() const { return basis_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    static SpinDensityMatrix projector(const PairSpinState& psi);
    static SpinDensityMatrix maximally_mixed();

private:
    Mat4 m_;
    Basis basis_;
};

Spinor bloch_spinor(double theta, double phi);
// Spin-up spinor along a unit polarization vector.
Spinor spinor_along(const PolarizationVector& zeta);
Vec3 pauli_expectation(const Spinor& s);

// Coefficients on (Phi+, Phi-, Psi+, Psi-), without normalization.
std::array<Complex, 4> bell_coefficients(const AmplitudePair& amps, const Spinor& chi, const Spinor& eta);

// t_d chi (x) eta - t_e eta (x) chi, product basis, unnormalized.
PairSpinState final_pair_state(const AmplitudePair& amps, const Spinor& chi, const Spinor& eta);

// Squared norm of the final state for polarizations with P1.P2 = p_dot.
double final_state_norm(const AmplitudePair& amps, double p_dot);

SpinDensityMatrix rho_pure(const AmplitudePair& amps, const PolarizationVector& zeta1,
                           const PolarizationVector& zeta2);
SpinDensityMatrix rho_mixed(const AmplitudePair& amps, const PolarizationVector& p1, const PolarizationVector& p2);

enum class Subsystem { first, second };
// Partial trace; `keep` names the surviving electron.
Mat2 reduced_density(const SpinDensityMatrix& rho, Subsystem keep);

// Columns are Phi+, Phi-, Psi+, Psi- in the product basis.
const Mat4& bell_basis_matrix();
SpinDensityMatrix to_bell_basis(const SpinDensityMatrix& rho);
SpinDensityMatrix to_product_basis(const SpinDensityMatrix& rho);

Mat4 swap_qubits(const Mat4& m);

} // namespace e2espin
