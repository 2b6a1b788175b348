#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

#include "e2espin/amplitudes.hpp"
#include "e2espin/errors.hpp"
#include "helpers.hpp"

using namespace e2espin;

namespace {

// Plane-wave limit of the three-Coulomb integral. The 1/r12 term factorizes into a Bethe
// integral times the bound-state transform at q; the -1/r1 term leaves the bound electron
// overlapping a plane wave of momentum k2.
Complex free_oracle(const Kinematics& k, bool direct) {
    const Vec3 k1 = direct ? k.ka : k.kb, k2 = direct ? k.kb : k.ka;
    const auto phi = [](double p) { return 8.0 * std::sqrt(kPi) / std::pow(p * p + 1.0, 2); };
    return 4.0 * kPi / (k.k0 - k1).squaredNorm() * (phi(k.q().norm()) - phi(k2.norm()));
}

Kinematics protocol() { return build_coplanar(2.0, 0.75, kPi / 4, -kPi / 4, -0.5); }

McConfig free_cfg(std::uint64_t samples, std::uint64_t seed) {
    McConfig c;
    c.samples = samples;
    c.seed = seed;
    c.debug_free_limit = true;
    return c;
}

} // namespace

TEST_CASE("hydrogen 1s: normalization in position and momentum space") {
    using boost::math::quadrature::exp_sinh;
    exp_sinh<double> q;
    const double pos = q.integrate([](double r) { return 4 * kPi * r * r * std::pow(hydrogen_1s_position(Vec3(r, 0, 0)), 2); });
    CHECK(pos == doctest::Approx(1.0).epsilon(1e-10));
    const double mom = q.integrate([](double p) { return 4 * kPi * p * p * std::pow(hydrogen_1s_momentum(p), 2); }) / std::pow(2 * kPi, 3);
    CHECK(mom == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(hydrogen_1s_momentum(1.0, 0.0), DomainError);
}

TEST_CASE("hydrogen 1s: momentum wavefunction is the Fourier transform") {
    using boost::math::quadrature::gauss_kronrod;
    for (double p : {0.1, 0.7, 1.5, 3.0}) {
        const double ft = gauss_kronrod<double, 61>::integrate(
            [p](double r) { return 4 * kPi * r * r * hydrogen_1s_position(Vec3(0, 0, r)) * std::sin(p * r) / (p * r); }, 0.0,
            60.0, 15, 1e-13);
        CHECK(hydrogen_1s_momentum(p) == doctest::Approx(ft).epsilon(1e-10));
    }
}

TEST_CASE("PWBA: screened Bethe integral fixes the 4 pi / K^2 prefactor") {
    const Kinematics k = protocol();
    const double K = (k.k0 - k.ka).norm();
    // int exp(iK.r) exp(-eps r)/r d^3r = 4 pi / (K^2 + eps^2)
    using boost::math::quadrature::gauss_kronrod;
    const double eps = 0.02;
    double bethe = 0.0;
    const double period = 2 * kPi / K;
    for (int i = 0; i * period < 1500.0; ++i)
        bethe += gauss_kronrod<double, 31>::integrate(
            [&](double r) { return 4 * kPi * std::sin(K * r) / K * std::exp(-eps * r); }, i * period, (i + 1) * period);
    const AmplitudePair a = pwba_amplitudes(k);
    CHECK(a.direct.real() == doctest::Approx(bethe * hydrogen_1s_momentum(k.q())).epsilon(1e-3));
    CHECK(a.direct.imag() == 0.0);
    // mirror kinematics: equal amplitudes
    CHECK(a.direct == a.exchange);
    CHECK_THROWS_AS(pwba_amplitudes(build_coplanar(2.0, 1.5, 0.0, 0.3, -0.5)), KinematicsError);
}

TEST_CASE("Coulomb waves") {
    const Vec3 k(0.3, 0.0, 1.1), r(0.4, -2.0, 1.5);
    // Z = 0 reduces to a plane wave
    CHECK(std::abs(coulomb_wave(k, r, 0.0) - std::polar(1.0, k.dot(r))) < 1e-15);
    // at the origin only the normalization survives: |psi(0)|^2 is the Gamow factor
    const CoulombWave w(k, 1.0);
    const double xi = w.xi();
    CHECK(xi == doctest::Approx(-1.0 / k.norm()));
    CHECK(std::norm(w(Vec3::Zero())) == doctest::Approx(2 * kPi * xi / (std::exp(2 * kPi * xi) - 1)).epsilon(1e-12));
    // far from the nucleus the distortion has unit modulus up to O(xi / rho)
    for (double s : {-0.5, 0.0, 0.8}) {
        const Vec3 dir = Vec3(std::sqrt(1 - s * s), 0, s);
        const double rmag = 200.0 / (k.norm() + k.dot(dir));
        CHECK(std::abs(w.distortion(rmag * dir)) == doctest::Approx(1.0).epsilon(0.05));
    }
    // the tabulated form agrees with direct evaluation
    const CoulombWave wt(k, 1.0, 60.0);
    testing::Rng rng(51);
    for (int i = 0; i < 200; ++i) {
        const Vec3 p = 20.0 * rng.u() * rng.unit();
        CHECK(std::abs(wt(p) - w(p)) <= 1e-10 * std::abs(w(p)) + 1e-300);
    }
    CHECK_THROWS_AS(CoulombWave(Vec3::Zero(), 1.0), DomainError);
    CHECK_THROWS_AS(CoulombWave(k, -1.0), DomainError);
}

TEST_CASE("electron-electron factor") {
    const Vec3 kab(0.4, 0.0, -0.2);
    const EeCorrelation c(kab);
    const double xi = c.xi();
    CHECK(std::norm(c(Vec3::Zero())) == doctest::Approx(2 * kPi * xi / (std::exp(2 * kPi * xi) - 1)).epsilon(1e-12));
    CHECK(std::abs(c(Vec3(1, 2, 3)) - ee_correlation(kab, Vec3(1, 2, 3))) < 1e-14);
    const EeCorrelation zero(Vec3::Zero());
    CHECK(zero.vanishes());
    CHECK(zero(Vec3(1, 0, 0)) == Complex(0.0));
}

TEST_CASE("Monte Carlo configuration checks") {
    McConfig c;
    c.samples = 999;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK_THROWS_AS(c3_tmatrix(protocol(), Ordering::direct, c), DomainError);
    c.samples = 1000;
    CHECK_NOTHROW(c.validate());
    c.lambda1 = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.lambda1 = 1.0;
    c.taper = 1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("coincident momenta give a zero amplitude") {
    const Kinematics k = build_coplanar(2.0, 0.75, 0.5, 0.5, -0.5);
    McConfig c;
    c.samples = 10000;
    const auto e = c3_tmatrix(k, Ordering::direct, c);
    CHECK(e.value == Complex(0.0));
    CHECK(e.stderr_abs() == 0.0);
}

TEST_CASE("free limit: pulls against the plane-wave closed form") {
    const Kinematics k = protocol();
    const Kinematics asym = build_coplanar(2.0, 0.75, kPi / 6, -4 * kPi / 9, -0.5);
    CHECK(std::abs(free_oracle(k, true) - free_oracle(k, false)) < 1e-15);
    double sum = 0.0, sum2 = 0.0, worst = 0.0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        for (const Kinematics* kin : {&k, &asym}) {
            const auto e = c3_tmatrix(*kin, Ordering::direct, free_cfg(100000, 1000 + s));
            const Complex d = e.value - free_oracle(*kin, true);
            const double pr = d.real() / e.stderr_re, pi = d.imag() / e.stderr_im;
            sum += pr + pi;
            sum2 += pr * pr + pi * pi;
            worst = std::max({worst, std::abs(pr), std::abs(pi)});
        }
    }
    const double n = 4.0 * seeds;
    const double mean = sum / n, sd = std::sqrt(sum2 / n - mean * mean);
    INFO("mean pull " << mean << ", sd " << sd << ", worst " << worst);
    CHECK(std::abs(mean) < 0.3);
    CHECK(sd > 0.75);
    CHECK(sd < 1.3);
    CHECK(worst < 4.5);
}

TEST_CASE("free limit: standard error falls as 1/sqrt(N)") {
    double ratio = 0.0;
    for (int s = 0; s < 10; ++s) {
        const auto a = c3_tmatrix(protocol(), Ordering::direct, free_cfg(50000, 77 + s));
        const auto b = c3_tmatrix(protocol(), Ordering::direct, free_cfg(100000, 177 + s));
        ratio += b.stderr_abs() / a.stderr_abs() / 10.0;
    }
    CHECK(ratio == doctest::Approx(1 / std::sqrt(2.0)).epsilon(0.12));
}

TEST_CASE("3C: reproducible across worker counts, exact mirror symmetry") {
    McConfig c;
    c.samples = 20000;
    c.seed = 9;
    const Kinematics k = protocol();
    c.workers = 1;
    const auto one = c3_tmatrix(k, Ordering::direct, c);
    c.workers = 3;
    const auto three = c3_tmatrix(k, Ordering::direct, c);
    CHECK(one.value == three.value);
    CHECK(one.stderr_re == three.stderr_re);
    const auto ex = c3_tmatrix(k, Ordering::exchange, c);
    CHECK(ex.value == one.value);
    CHECK(std::isfinite(one.value.real()));
    CHECK(one.rejected == 0);
    // a different seed moves the estimate
    c.seed = 10;
    CHECK(c3_tmatrix(k, Ordering::direct, c).value != one.value);
}

TEST_CASE("3C: amplitude pair dispatch") {
    McConfig c;
    c.samples = 20000;
    const Kinematics k = build_coplanar(2.0, 0.75, 0.6, -1.2, -0.5);
    const auto p = amplitude_pair(Model::pwba, k, c);
    CHECK(p.amps.direct == pwba_amplitudes(k).direct);
    const auto r = amplitude_pair(Model::c3, k, c);
    CHECK(r.amps.direct == r.direct.value);
    CHECK(r.amps.exchange == r.exchange.value);
    CHECK(r.direct.stderr_abs() > 0.0);
}
