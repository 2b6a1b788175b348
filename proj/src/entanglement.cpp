#include "e2espin/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "e2espin/errors.hpp"

namespace e2espin {

namespace {

const Mat4& sigma_yy() {
    static const Mat4 m = [] {
        Mat4 s = Mat4::Zero();
        s(0, 3) = -1.0;
        s(1, 2) = 1.0;
        s(2, 1) = 1.0;
        s(3, 0) = -1.0;
        return s;
    }();
    return m;
}

double clamp_unit(double c) {
    if (c < -1e-10) throw NumericError("concurrence evaluated to " + std::to_string(c));
    return std::clamp(c, 0.0, 1.0);
}

} // namespace

double concurrence_wootters(const SpinDensityMatrix& rho) {
    const Mat4 m = to_product_basis(rho).matrix();
    Eigen::SelfAdjointEigenSolver<Mat4> es(m);
    // Exact zeros come out as +-1e-17 and would enter the square root as 1e-8; concurrence is
    // Lipschitz in rho, so flushing them costs at most kFlush.
    constexpr double kFlush = 1e-11;
    const Eigen::Vector4d lam = es.eigenvalues().unaryExpr([](double x) { return x < kFlush ? 0.0 : x; });
    const Mat4 root = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    // Singular values of root^T Y root are the square roots of the spectrum of rho Y rho* Y.
    const Mat4 a = root.transpose() * sigma_yy() * root;
    Eigen::JacobiSVD<Mat4> svd(a);
    const Eigen::Vector4d s = svd.singularValues(); // descending
    return std::clamp(s(0) - s(1) - s(2) - s(3), 0.0, 1.0);
}

double concurrence_pure_closed(const AmplitudePair& amps, const PolarizationVector& zeta1,
                               const PolarizationVector& zeta2) {
    if (!zeta1.is_unit() || !zeta2.is_unit())
        throw DomainError("concurrence_pure_closed: polarizations must be unit vectors");
    const double p = zeta1.dot(zeta2);
    const double u = final_state_norm(amps, p);
    const double scale = std::norm(amps.direct) + std::norm(amps.exchange);
    if (!(u > 1e-14 * scale)) throw DegenerateStateError("final spin state vanishes (u = 0)");
    return clamp_unit(std::abs(amps.direct) * std::abs(amps.exchange) * (1.0 - p) / u);
}

double concurrence_pure_from_state(const PairSpinState& psi) {
    if (!psi.is_normalized()) throw ValidationError("concurrence_pure_from_state: state is not normalized");
    // 1 - Tr rho1^2 = 2 |det psi|^2, evaluated from the amplitudes to avoid cancellation
    const Complex det = psi.amp(0) * psi.amp(3) - psi.amp(1) * psi.amp(2);
    return std::min(1.0, 2.0 * std::abs(det));
}

double concurrence_unpolarized(const AmplitudePair& amps) {
    const Complex td = amps.direct, te = amps.exchange;
    const double d2 = std::norm(td), e2 = std::norm(te);
    if (d2 + e2 == 0.0) throw DomainError("concurrence_unpolarized: both amplitudes vanish");
    const double gate = std::norm(td + te) - 3.0 * std::norm(td - te);
    if (!(gate > 0.0)) return 0.0;
    const double re = (td * std::conj(te)).real();
    return clamp_unit((4.0 * re - d2 - e2) / (2.0 * (d2 + e2 - re)));
}

double singlet_triplet_concurrence(double i_singlet, double i_triplet) {
    if (i_singlet < 0.0 || i_triplet < 0.0) throw DomainError("singlet/triplet intensities must be >= 0");
    if (i_singlet + i_triplet == 0.0) throw DomainError("singlet and triplet intensities both vanish");
    if (!(i_singlet > i_triplet)) return 0.0;
    return (i_singlet - i_triplet) / (i_singlet + i_triplet);
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double entanglement_of_formation(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("entanglement_of_formation: concurrence outside [0, 1]");
    return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double entropy_from_concurrence(double c) { return entanglement_of_formation(c); }

double von_neumann_entropy(const Mat2& rho1) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho1, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double p = es.eigenvalues()(i);
        if (p < -1e-10) throw ValidationError("reduced matrix has negative eigenvalue " + std::to_string(p));
        if (p > 0.0) s -= p * std::log2(p);
    }
    return std::max(s, 0.0);
}

double linear_entropy(const Mat2& rho1) { return 1.0 - (rho1 * rho1).trace().real(); }

} // namespace e2espin
