#include "e2espin/validate.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "e2espin/entanglement.hpp"
#include "e2espin/errors.hpp"

namespace e2espin {

Mat4 bell_basis_closed_form(const AmplitudePair& amps, const PolarizationVector& p1, const PolarizationVector& p2) {
    const Complex td = amps.direct, te = amps.exchange;
    const Complex I(0.0, 1.0);
    const double x1 = p1.x(), y1 = p1.y(), z1 = p1.z();
    const double x2 = p2.x(), y2 = p2.y(), z2 = p2.z();
    const double m = std::norm(td - te);
    const double p = std::norm(td + te);
    const Complex c = (td - te) * std::conj(td + te);
    const double u = final_state_norm(amps, p1.dot(p2));
    if (!(u > 0.0)) throw DegenerateStateError("bell_basis_closed_form: final spin state vanishes");

    Mat4 a;
    a(0, 0) = m * (1 + x1 * x2 - y1 * y2 + z1 * z2);
    a(0, 1) = m * (z1 + z2 + I * x1 * y2 + I * y1 * x2);
    a(0, 2) = m * (x1 + x2 - I * y1 * z2 - I * z1 * y2);
    a(0, 3) = c * (I * y1 - I * y2 - x1 * z2 + z1 * x2);
    a(1, 1) = m * (1 - x1 * x2 + y1 * y2 + z1 * z2);
    a(1, 2) = m * (-I * y1 - I * y2 + x1 * z2 + z1 * x2);
    a(1, 3) = c * (-x1 + x2 + I * y1 * z2 - I * z1 * y2);
    a(2, 2) = m * (1 + x1 * x2 + y1 * y2 - z1 * z2);
    a(2, 3) = c * (z1 - z2 - I * x1 * y2 + I * y1 * x2);
    a(3, 3) = p * (1 - x1 * x2 - y1 * y2 - z1 * z2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) a(i, j) = std::conj(a(j, i));
    return a / (4.0 * u);
}

Complex free_limit_tmatrix(const Kinematics& kin, Ordering ordering) {
    const Vec3& k1 = ordering == Ordering::direct ? kin.ka : kin.kb;
    const Vec3& k2 = ordering == Ordering::direct ? kin.kb : kin.ka;
    const double k2t = (kin.k0 - k1).squaredNorm();
    if (k2t == 0.0) throw KinematicsError("free_limit_tmatrix: vanishing momentum transfer");
    return 4.0 * kPi / k2t * (hydrogen_1s_momentum(kin.q()) - hydrogen_1s_momentum(k2));
}

namespace {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    Complex amplitude() { return {normal_(gen_), normal_(gen_)}; }
    Vec3 unit() {
        Vec3 v(normal_(gen_), normal_(gen_), normal_(gen_));
        while (v.norm() < 1e-8) v = Vec3(normal_(gen_), normal_(gen_), normal_(gen_));
        return v.normalized();
    }
    PolarizationVector unit_pol() { return PolarizationVector(unit()); }
    PolarizationVector partial_pol() { return PolarizationVector(unit() * uniform_(gen_)); }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

SuiteResult finish(std::string name, double tol, double err, const Timer& t, std::string detail = {}) {
    SuiteResult r;
    r.name = std::move(name);
    r.tolerance = tol;
    r.max_error = err;
    r.passed = err <= tol;
    r.detail = std::move(detail);
    r.seconds = t.seconds();
    return r;
}

} // namespace

SuiteResult suite_pure_concurrence(const ValidateOptions& o) {
    Timer t;
    Sampler s(o.seed);
    double worst = 0.0;
    for (int i = 0; i < o.n_random; ++i) {
        const AmplitudePair a{s.amplitude(), s.amplitude()};
        const auto z1 = s.unit_pol(), z2 = s.unit_pol();
        worst = std::max(worst, std::abs(concurrence_pure_closed(a, z1, z2) - concurrence_wootters(rho_pure(a, z1, z2))));
    }
    return finish("pure concurrence: closed form vs Wootters", 1e-10, worst, t);
}

SuiteResult suite_mixed_concurrence(const ValidateOptions& o) {
    Timer t;
    Sampler s(o.seed + 1);
    const PolarizationVector zero;
    double unpol = 0.0, one = 0.0;
    for (int i = 0; i < o.n_random; ++i) {
        const AmplitudePair a{s.amplitude(), s.amplitude()};
        unpol = std::max(unpol, std::abs(concurrence_unpolarized(a) - concurrence_wootters(rho_mixed(a, zero, zero))));
        const double d2 = std::norm(a.direct), e2 = std::norm(a.exchange);
        const double perp = std::abs(a.direct) * std::abs(a.exchange) /
                            (d2 + e2 - (a.direct * std::conj(a.exchange)).real());
        one = std::max(one, std::abs(perp - concurrence_wootters(rho_mixed(a, s.unit_pol(), zero))));
    }
    std::ostringstream d;
    d << "unpolarized " << unpol << ", one unpolarized " << one;
    return finish("mixed concurrence: closed forms vs Wootters", 1e-10, std::max(unpol, one), t, d.str());
}

SuiteResult suite_appendix_b(const ValidateOptions& o) {
    Timer t;
    Sampler s(o.seed + 2);
    double pure = 0.0, mixed = 0.0;
    for (int i = 0; i < o.n_appendix; ++i) {
        const AmplitudePair a{s.amplitude(), s.amplitude()};
        const auto z1 = s.unit_pol(), z2 = s.unit_pol();
        pure = std::max(pure, (to_bell_basis(rho_pure(a, z1, z2)).matrix() - bell_basis_closed_form(a, z1, z2))
                                  .cwiseAbs()
                                  .maxCoeff());
        const auto p1 = s.partial_pol(), p2 = s.partial_pol();
        mixed = std::max(mixed, (to_bell_basis(rho_mixed(a, p1, p2)).matrix() - bell_basis_closed_form(a, p1, p2))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    std::ostringstream d;
    d << "pure " << pure << ", partial polarizations " << mixed;
    return finish("Bell-basis density matrix: constructive vs entrywise", 1e-12, std::max(pure, mixed), t, d.str());
}

SuiteResult suite_chsh(const ValidateOptions& o) {
    Timer t;
    Sampler s(o.seed + 3);
    double trace = 0.0, lhs = 0.0, over = 0.0;
    for (int i = 0; i < o.n_random; ++i) {
        const AmplitudePair a{s.amplitude(), s.amplitude()};
        const bool pure = i % 2 == 0;
        const auto p1 = pure ? s.unit_pol() : s.partial_pol();
        const auto p2 = pure ? s.unit_pol() : s.partial_pol();
        const SpinDensityMatrix rho = pure ? rho_pure(a, p1, p2) : rho_mixed(a, p1, p2);
        const double tr = chsh_expectation(rho);
        const double closed = o.chsh_closed(a, p1, p2);
        trace = std::max(trace, std::abs(closed - tr));
        const CrossSections x = tdcs_basic(a, build_coplanar(2.0, 0.75, 0.5, -0.5, -0.5));
        lhs = std::max(lhs, std::abs(bell_lhs_cross_sections(x.i_anti(), x.i_par, p1, p2) - tr / kTsirelson));
        over = std::max(over, std::abs(tr) - kTsirelson);
    }
    const PairSpinState singlet{Eigen::Vector4cd(0, 1 / kSqrt2, -1 / kSqrt2, 0)};
    const double sing = std::abs(chsh_expectation(SpinDensityMatrix::projector(singlet)) - kTsirelson);
    std::ostringstream d;
    d << "closed vs trace " << trace << ", cross-section form " << lhs << ", singlet " << sing
      << ", Tsirelson excess " << over;
    return finish("CHSH: closed form, trace, cross-section form", 1e-12,
                  std::max({trace, lhs, sing, std::max(over, 0.0)}), t, d.str());
}

SuiteResult suite_pwba_symmetry(const ValidateOptions&) {
    Timer t;
    const double e0 = ev_to_hartree(54.4), et = ev_to_hartree(-13.605693);
    const double eb = 0.5 * (e0 + et);
    double worst = 0.0;
    for (int deg = 1; deg < 180; ++deg) {
        const double th = deg * kPi / 180.0;
        const AmplitudePair a = pwba_amplitudes(build_coplanar(e0, eb, th, -th, et));
        worst = std::max(worst, std::abs(a.direct - a.exchange) / std::abs(a.direct));
    }
    return finish("PWBA: t_d = t_e at symmetric kinematics (relative)", 1e-15, worst, t);
}

SuiteResult suite_c3_mirror(const ValidateOptions& o) {
    Timer t;
    McConfig mc;
    mc.samples = 20000;
    mc.seed = o.seed;
    mc.workers = o.workers;
    const double e0 = ev_to_hartree(54.4), et = ev_to_hartree(-13.605693);
    const double eb = 0.5 * (e0 + et);
    double worst = 0.0;
    for (double deg : {30.0, 45.0, 100.0}) {
        const double th = deg * kPi / 180.0;
        const Kinematics k = build_coplanar(e0, eb, th, -th, et);
        const auto d = c3_tmatrix(k, Ordering::direct, mc);
        const auto e = c3_tmatrix(k, Ordering::exchange, mc);
        worst = std::max(worst, std::abs(d.value - e.value));
    }
    return finish("3C: t_d - t_e at symmetric kinematics", 0.0, worst, t);
}

SuiteResult suite_free_limit(const ValidateOptions& o) {
    Timer t;
    McConfig mc;
    mc.samples = o.mc_samples;
    mc.seed = o.seed;
    mc.debug_free_limit = true;
    mc.workers = o.workers;
    // the protocol point carries the 5% precision target; the asymmetric one, where the
    // exact value is small, only the 3-sigma agreement
    const Kinematics protocol = build_coplanar(2.0, 0.75, kPi / 4, -kPi / 4, -0.5);
    const Kinematics asym = build_coplanar(2.0, 0.75, kPi / 6, -4 * kPi / 9, -0.5);
    double worst_pull = 0.0, worst_rel = 0.0;
    for (const Kinematics* k : {&protocol, &asym})
        for (Ordering ord : {Ordering::direct, Ordering::exchange}) {
            const auto est = c3_tmatrix(*k, ord, mc);
            const Complex exact = free_limit_tmatrix(*k, ord);
            worst_pull = std::max(worst_pull, std::abs(est.value - exact) / est.stderr_abs());
            if (k == &protocol) worst_rel = std::max(worst_rel, est.stderr_abs() / std::abs(exact));
        }
    std::ostringstream d;
    d << "max |pull| " << worst_pull << " (limit 3), relative stderr at 45/-45 " << worst_rel << " (limit 0.05), "
      << mc.samples << " samples";
    SuiteResult r = finish("3C free limit vs plane-wave closed form", 3.0, worst_pull, t, d.str());
    r.passed = worst_pull <= 3.0 && worst_rel <= 0.05;
    return r;
}

std::vector<SuiteResult> run_validation(const ValidateOptions& o) {
    using Suite = SuiteResult (*)(const ValidateOptions&);
    std::vector<std::pair<const char*, Suite>> suites{
        {"pure concurrence", suite_pure_concurrence}, {"mixed concurrence", suite_mixed_concurrence},
        {"Bell-basis density matrix", suite_appendix_b}, {"CHSH", suite_chsh}, {"PWBA symmetry", suite_pwba_symmetry}};
    if (o.include_mc) {
        suites.emplace_back("3C mirror", suite_c3_mirror);
        suites.emplace_back("3C free limit", suite_free_limit);
    }
    std::vector<SuiteResult> out;
    for (const auto& [name, fn] : suites) {
        try {
            out.push_back(fn(o));
        } catch (const Error& e) {
            SuiteResult r;
            r.name = name;
            r.max_error = INFINITY;
            r.detail = std::string("threw: ") + e.what();
            out.push_back(r);
        }
    }
    return out;
}

} // namespace e2espin
