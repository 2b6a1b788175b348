#include "e2espin/report.hpp"

#include "e2espin/bell.hpp"
#include "e2espin/entanglement.hpp"
#include "e2espin/errors.hpp"

namespace e2espin {

using nlohmann::json;

namespace {

json amplitude_json(const AmplitudeEstimate& e) {
    return {{"re", e.value.real()},         {"im", e.value.imag()},          {"stderr_re", e.stderr_re},
            {"stderr_im", e.stderr_im},     {"evaluations", e.evaluations}, {"rejected", e.rejected}};
}

json vec_json(const PolarizationVector& p) { return json::array({p.x(), p.y(), p.z()}); }

} // namespace

json point_report(const ScanConfig& cfg, double theta_a_deg, double theta_b_deg) {
    const PointObservables o = evaluate_point(cfg, theta_a_deg, theta_b_deg);
    if (o.degenerate) throw DegenerateStateError("final spin state vanishes at this point");
    const AmplitudePair& a = o.amplitudes.amps;
    const Kinematics& k = o.kin;

    const SpinDensityMatrix rho = cfg.pure() ? rho_pure(a, cfg.p1, cfg.p2) : rho_mixed(a, cfg.p1, cfg.p2);
    const CrossSections x = tdcs_basic(a, k);

    json closed = nullptr;
    if (cfg.pure()) {
        closed = concurrence_pure_closed(a, cfg.p1, cfg.p2);
    } else if (cfg.p1.norm() == 0.0 && cfg.p2.norm() == 0.0) {
        closed = concurrence_unpolarized(a);
    } else if (cfg.p1.is_unit() && cfg.p2.norm() == 0.0) {
        // averaging the second spin leaves the pure-state value at perpendicular polarizations
        const Vec3 n = cfg.p1.vec().unitOrthogonal();
        closed = concurrence_pure_closed(a, cfg.p1, PolarizationVector(n));
    }

    const Mat2 rho1 = reduced_density(rho, Subsystem::first);
    json j;
    j["model"] = to_string(cfg.model);
    j["scenario"] = to_string(cfg.scenario);
    j["p1"] = vec_json(cfg.p1);
    j["p2"] = vec_json(cfg.p2);
    j["kinematics"] = {{"e0", k.e0},           {"ea", k.ea}, {"eb", k.eb}, {"et", k.et}, {"theta_a_deg", theta_a_deg},
                       {"theta_b_deg", theta_b_deg}, {"units", "hartree"}};
    j["amplitudes"] = {{"direct", amplitude_json(o.amplitudes.direct)},
                       {"exchange", amplitude_json(o.amplitudes.exchange)}};
    j["tdcs"] = {{"scenario", o.tdcs},       {"stderr", o.tdcs_stderr}, {"i_par", x.i_par},
                 {"i_anti_d", x.i_anti_d},   {"i_anti_e", x.i_anti_e},  {"i_anti", x.i_anti()},
                 {"i_s", x.i_s},             {"i_t", x.i_t},            {"prefactor", tdcs_prefactor(k)},
                 {"units", "atomic"}};
    j["concurrence"] = {{"closed_form", closed}, {"wootters", concurrence_wootters(rho)}};
    j["eof"] = o.eof;
    j["entropy"] = {{"von_neumann", von_neumann_entropy(rho1)}, {"linear", linear_entropy(rho1)}};
    const double chsh = chsh_expectation(rho);
    j["chsh"] = {{"trace", chsh},
                 {"closed_form", chsh_closed_form(a, cfg.p1, cfg.p2)},
                 {"violated", chsh_violated(chsh)}};
    j["bell_lhs"] = o.bell_lhs;
    j["bell_violated"] = cross_section_violated(o.bell_lhs);
    j["asymmetry"] = o.asymmetry;
    return j;
}

} // namespace e2espin
