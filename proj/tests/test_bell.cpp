#include <doctest.h>

#include "e2espin/bell.hpp"
#include "e2espin/errors.hpp"
#include "helpers.hpp"

using namespace e2espin;
using testing::Rng;

TEST_CASE("standard settings") {
    const auto s = DetectorSettings::standard();
    CHECK_NOTHROW(s.validate());
    DetectorSettings bad = s;
    bad.b2 = Vec3(1, 1, 0);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(chsh_operator(bad), ValidationError);
}

TEST_CASE("singlet reaches the Tsirelson bound") {
    const SpinDensityMatrix s(testing::projector(testing::singlet()));
    CHECK(std::abs(chsh_expectation(s) - kTsirelson) <= 1e-12);
    CHECK(std::abs(chsh_expectation(to_bell_basis(s)) - kTsirelson) <= 1e-12);
    CHECK(chsh_violated(chsh_expectation(s)));
    // closed form: t_d = t_e with antiparallel polarizations is the singlet
    CHECK(std::abs(chsh_closed_form({1.0, 1.0}, {0, 0, 1}, {0, 0, -1}) - kTsirelson) <= 1e-12);
}

TEST_CASE("product state gives -sqrt2") {
    const SpinDensityMatrix uu(testing::projector(Eigen::Vector4cd(1, 0, 0, 0)));
    CHECK(chsh_expectation(uu) == doctest::Approx(-kSqrt2).epsilon(1e-14));
    CHECK_FALSE(chsh_violated(chsh_expectation(uu)));
}

TEST_CASE("closed form equals the trace, pure and partial polarizations") {
    Rng r(31);
    double worst = 0.0, over = -10.0;
    for (int i = 0; i < 10000; ++i) {
        const AmplitudePair t = r.amps();
        const bool pure = i % 2 == 0;
        const auto p1 = pure ? r.zeta() : r.partial();
        const auto p2 = pure ? r.zeta() : r.partial();
        const double tr = chsh_expectation(pure ? rho_pure(t, p1, p2) : rho_mixed(t, p1, p2));
        worst = std::max(worst, std::abs(chsh_closed_form(t, p1, p2) - tr));
        over = std::max(over, std::abs(tr) - kTsirelson);
    }
    CHECK(worst <= 1e-12);
    CHECK(over <= 1e-12);
    CHECK_THROWS_AS(chsh_closed_form({1.0, 1.0}, {0, 0, 1}, {0, 0, 1}), DegenerateStateError);
}

TEST_CASE("Tsirelson bound over random density matrices") {
    Rng r(32);
    for (int i = 0; i < 2000; ++i) CHECK(std::abs(chsh_expectation(SpinDensityMatrix(r.rho()))) <= kTsirelson + 1e-12);
}

TEST_CASE("cross-section form equals <Pi>/(2 sqrt2)") {
    Rng r(33);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const AmplitudePair t = r.amps();
        const bool pure = i % 2 == 0;
        const auto p1 = pure ? r.zeta() : r.partial();
        const auto p2 = pure ? r.zeta() : r.partial();
        const double i_anti = std::norm(t.direct) + std::norm(t.exchange);
        const double i_par = std::norm(t.direct - t.exchange);
        const double lhs = bell_lhs_cross_sections(i_anti, i_par, p1, p2);
        worst = std::max(worst, std::abs(lhs - chsh_closed_form(t, p1, p2) / kTsirelson));
    }
    CHECK(worst <= 1e-12);
    CHECK_THROWS_AS(bell_lhs_cross_sections(0.0, 0.0, {}, {}), DomainError);
    CHECK_THROWS_AS(bell_lhs_cross_sections(-1.0, 0.0, {}, {}), DomainError);
}

TEST_CASE("unpolarized beams: cross-section form is the spin asymmetry") {
    const PolarizationVector zero;
    for (double ia : {0.3, 1.0, 2.5})
        for (double ip : {0.0, 0.4, 1.7}) CHECK(bell_lhs_cross_sections(ia, ip, zero, zero) == doctest::Approx(spin_asymmetry(ia, ip)));
    CHECK(spin_asymmetry(1.0, 0.0) == 1.0);
    CHECK_THROWS_AS(spin_asymmetry(0.0, 0.0), DomainError);
    CHECK(cross_section_violated(0.75));
    CHECK_FALSE(cross_section_violated(0.7));
}

TEST_CASE("operator algebra") {
    const Mat2 sz = pauli_projection(Vec3(0, 0, 1));
    CHECK(sz(0, 0) == Complex(1));
    CHECK(sz(1, 1) == Complex(-1));
    const Mat2 sy = pauli_projection(Vec3(0, 1, 0));
    CHECK(sy(0, 1) == Complex(0, -1));
    const Mat4 k = kron(sz, sy);
    CHECK(k(0, 1) == Complex(0, -1));
    CHECK(k(2, 3) == Complex(0, 1));
    // Pi^2 = 4 + [A1, A2] x [B1, B2] has norm at most 8
    const Mat4 pi = chsh_operator();
    Eigen::SelfAdjointEigenSolver<Mat4> es(pi * pi);
    CHECK(es.eigenvalues().maxCoeff() <= 8.0 + 1e-12);
}
