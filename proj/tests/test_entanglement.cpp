#include <doctest.h>

#include "e2espin/entanglement.hpp"
#include "e2espin/errors.hpp"
#include "helpers.hpp"

using namespace e2espin;
using testing::Rng;

namespace {

SpinDensityMatrix werner(double p) {
    return SpinDensityMatrix(p * testing::projector(testing::singlet()) + (1 - p) * Mat4::Identity() / 4.0);
}

} // namespace

TEST_CASE("Wootters concurrence: reference states") {
    CHECK(concurrence_wootters(SpinDensityMatrix(testing::projector(testing::singlet()))) == doctest::Approx(1.0).epsilon(1e-12));
    const Eigen::Vector4cd phi_minus = Eigen::Vector4cd(1, 0, 0, -1) / kSqrt2;
    CHECK(concurrence_wootters(SpinDensityMatrix(testing::projector(phi_minus))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence_wootters(SpinDensityMatrix::maximally_mixed()) == 0.0);
    CHECK(concurrence_wootters(SpinDensityMatrix(testing::projector(Eigen::Vector4cd(1, 0, 0, 0)))) < 1e-12);
    // Werner state: C = max(0, (3p - 1)/2)
    CHECK(concurrence_wootters(werner(0.9)) == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(concurrence_wootters(werner(0.3)) == 0.0);
    // basis of the input does not matter
    CHECK(concurrence_wootters(to_bell_basis(werner(0.7))) == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("pure closed form matches Wootters") {
    Rng r(21);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const AmplitudePair t = r.amps();
        const auto z1 = r.zeta(), z2 = r.zeta();
        const double closed = concurrence_pure_closed(t, z1, z2);
        worst = std::max(worst, std::abs(closed - concurrence_wootters(rho_pure(t, z1, z2))));
        const PairSpinState psi = final_pair_state(t, spinor_along(z1), spinor_along(z2)).normalized();
        worst = std::max(worst, std::abs(closed - concurrence_pure_from_state(psi)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("pure closed form: examples and errors") {
    const PolarizationVector z(0, 0, 1), x(1, 0, 0);
    // t_d = t_e, antiparallel: singlet
    CHECK(concurrence_pure_closed({1.0, 1.0}, z, -z) == doctest::Approx(1.0));
    // t_e = 0: product state
    CHECK(concurrence_pure_closed({1.0, 0.0}, z, x) == 0.0);
    CHECK_THROWS_AS(concurrence_pure_closed({1.0, 1.0}, z, z), DegenerateStateError);
    CHECK_THROWS_AS(concurrence_pure_closed({1.0, 1.0}, PolarizationVector(0, 0, 0.3), z), DomainError);
    PairSpinState un{Eigen::Vector4cd(1, 1, 0, 0)};
    CHECK_THROWS_AS(concurrence_pure_from_state(un), ValidationError);
}

TEST_CASE("unpolarized closed form matches Wootters on the averaged state") {
    Rng r(22);
    const PolarizationVector zero;
    double worst = 0.0, one = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const AmplitudePair t = r.amps();
        worst = std::max(worst, std::abs(concurrence_unpolarized(t) - concurrence_wootters(rho_mixed(t, zero, zero))));
        const double d2 = std::norm(t.direct), e2 = std::norm(t.exchange);
        const double perp = std::abs(t.direct) * std::abs(t.exchange) / (d2 + e2 - (t.direct * std::conj(t.exchange)).real());
        one = std::max(one, std::abs(perp - concurrence_wootters(rho_mixed(t, r.zeta(), zero))));
    }
    CHECK(worst <= 1e-10);
    CHECK(one <= 1e-10);
    CHECK(concurrence_unpolarized({1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(concurrence_unpolarized({1.0, -1.0}) == 0.0);
    CHECK_THROWS_AS(concurrence_unpolarized({0.0, 0.0}), DomainError);
}

TEST_CASE("unpolarized concurrence vanishes once the triplet channel dominates") {
    Rng r(23);
    for (int i = 0; i < 2000; ++i) {
        const AmplitudePair t = r.amps();
        const double is = 0.25 * std::norm(t.direct + t.exchange), it = 0.75 * std::norm(t.direct - t.exchange);
        if (it >= is) CHECK(concurrence_unpolarized(t) == 0.0);
        CHECK(concurrence_unpolarized(t) == doctest::Approx(singlet_triplet_concurrence(is, it)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(singlet_triplet_concurrence(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(singlet_triplet_concurrence(0.0, 0.0), DomainError);
}

TEST_CASE("entanglement of formation and entropies") {
    CHECK(entanglement_of_formation(0.0) == 0.0);
    CHECK(entanglement_of_formation(1.0) == doctest::Approx(1.0));
    CHECK(entanglement_of_formation(0.5) == doctest::Approx(0.3546).epsilon(1e-4));
    CHECK_THROWS_AS(entanglement_of_formation(1.2), DomainError);
    CHECK_THROWS_AS(entanglement_of_formation(-0.1), DomainError);
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double e = entanglement_of_formation(i / 100.0);
        CHECK(e >= prev);
        prev = e;
    }
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(von_neumann_entropy(Mat2::Identity() / 2.0) == doctest::Approx(1.0));
    CHECK(linear_entropy(Mat2::Identity() / 2.0) == doctest::Approx(0.5));
    Mat2 pure = Mat2::Zero();
    pure(0, 0) = 1.0;
    CHECK(von_neumann_entropy(pure) == 0.0);
}

TEST_CASE("pure states: reduced-state entropy equals the concurrence entropy") {
    Rng r(24);
    for (int i = 0; i < 500; ++i) {
        const AmplitudePair t = r.amps();
        const auto z1 = r.zeta(), z2 = r.zeta();
        const SpinDensityMatrix rho = rho_pure(t, z1, z2);
        const double c = concurrence_pure_closed(t, z1, z2);
        const Mat2 r1 = reduced_density(rho, Subsystem::first);
        CHECK(von_neumann_entropy(r1) == doctest::Approx(entropy_from_concurrence(c)).epsilon(1e-9));
        CHECK(std::sqrt(2.0 * linear_entropy(r1)) == doctest::Approx(c).epsilon(1e-9));
    }
}
