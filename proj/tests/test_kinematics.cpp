#include <doctest.h>

#include "e2espin/errors.hpp"
#include "e2espin/kinematics.hpp"
#include "helpers.hpp"

using namespace e2espin;

TEST_CASE("energy conservation and momenta") {
    const Kinematics k = build_coplanar(2.0, 0.75, kPi / 4, -kPi / 4, -0.5);
    CHECK(k.ea == doctest::Approx(0.75));
    CHECK(k.k0 == Vec3(0, 0, 2.0));
    CHECK(k.ka.norm() == doctest::Approx(std::sqrt(1.5)));
    CHECK(k.ka.y() == 0.0);
    // mirror-symmetric emission gives exactly mirrored vectors
    CHECK(k.ka.x() == -k.kb.x());
    CHECK(k.ka.z() == k.kb.z());
    // |q| = |2 sqrt1.5 cos45 - 2|
    CHECK(k.q().norm() == doctest::Approx(std::abs(2 * std::sqrt(1.5) * std::cos(kPi / 4) - 2.0)).epsilon(1e-14));
}

TEST_CASE("hydrogen protocol energies") {
    CHECK(ev_to_hartree(54.4) == doctest::Approx(1.99916).epsilon(1e-5));
    CHECK(ev_to_hartree(-13.605693) == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("closed channels and bad angles") {
    CHECK_THROWS_AS(build_coplanar(2.0, 1.6, 0.1, 0.2, -0.5), KinematicsError);
    CHECK_THROWS_AS(build_coplanar(2.0, 0.0, 0.1, 0.2, -0.5), KinematicsError);
    CHECK_THROWS_AS(build_coplanar(-1.0, 0.5, 0.1, 0.2, -0.5), KinematicsError);
    CHECK_THROWS_AS(build_coplanar(2.0, 0.75, 3.5, 0.2, -0.5), KinematicsError);
    CHECK_THROWS_AS(build_coplanar(2.0, 0.75, NAN, 0.2, -0.5), KinematicsError);
    CHECK_NOTHROW(build_coplanar(2.0, 0.75, kPi, -kPi, -0.5));
}

TEST_CASE("cross sections") {
    const Kinematics k = build_coplanar(2.0, 0.75, 0.6, -1.1, -0.5);
    const double c = tdcs_prefactor(k);
    CHECK(c == doctest::Approx(1.5 / (std::pow(2 * kPi, 5) * 2.0)));
    testing::Rng r(41);
    for (int i = 0; i < 200; ++i) {
        const AmplitudePair t = r.amps();
        const CrossSections x = tdcs_basic(t, k);
        CHECK(x.i_t == 0.75 * x.i_par);
        CHECK(x.i_anti() == doctest::Approx(c * (std::norm(t.direct) + std::norm(t.exchange))));
        // unpolarized: singlet + triplet = average of parallel and antiparallel
        const double unpol = tdcs_polarized(t, 0.0, k);
        CHECK(unpol == doctest::Approx(x.i_s + x.i_t).epsilon(1e-12));
        CHECK(unpol == doctest::Approx(0.5 * (x.i_par + x.i_anti())).epsilon(1e-12));
        CHECK(tdcs_polarized(t, 1.0, k) == doctest::Approx(x.i_par).epsilon(1e-12));
        CHECK(tdcs_polarized(t, -1.0, k) == doctest::Approx(x.i_anti()).epsilon(1e-12));
    }
    CHECK(tdcs_polarized({1.0, 1.0}, 1.0, k) == 0.0);
}
