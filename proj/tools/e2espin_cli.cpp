// e2espin: point / scan / bell-sim / validate front end.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "e2espin/bell_sim.hpp"
#include "e2espin/errors.hpp"
#include "e2espin/report.hpp"
#include "e2espin/scan.hpp"
#include "e2espin/validate.hpp"

namespace {

using namespace e2espin;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitValidation = 4;

struct Overrides {
    std::string config;
    std::string output_dir;
    std::string model;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> mc_samples;
};

void add_common(CLI::App* cmd, Overrides& o, bool with_output) {
    cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--model", o.model, "amplitude model")->check(CLI::IsMember({"pwba", "c3"}));
    cmd->add_option("--seed", o.seed, "master Monte Carlo seed");
    cmd->add_option("--workers", o.workers, "threads (0 = all cores)");
    cmd->add_option("--mc-samples", o.mc_samples, "Monte Carlo evaluations per amplitude");
    if (with_output) cmd->add_option("--output-dir", o.output_dir, "directory for CSV and PGM files");
}

ScanConfig resolve(const Overrides& o) {
    ScanConfig c = o.config.empty() ? parse_config(json::object()) : load_config(o.config);
    if (!o.model.empty()) c.model = o.model == "c3" ? Model::c3 : Model::pwba;
    if (o.seed) c.mc.seed = *o.seed;
    if (o.workers) c.workers = *o.workers;
    if (o.mc_samples) c.mc.samples = *o.mc_samples;
    if (!o.output_dir.empty()) c.output_dir = o.output_dir;
    c.validate();
    return c;
}

int cmd_point(const Overrides& o, double ta, double tb) {
    ScanConfig c = resolve(o);
    c.mc.workers = c.workers;
    std::cout << point_report(c, ta, tb).dump(2) << '\n';
    return 0;
}

int cmd_scan(const Overrides& o) {
    const ScanConfig c = resolve(o);
    const ScanResult r = run_scan(c);
    for (const auto& p : write_scan_outputs(c, r)) std::cout << p.string() << '\n';
    std::size_t measurable = 0;
    for (const auto& rec : r.records) measurable += rec.measurable;
    std::cerr << r.n_a << "x" << r.n_b << " grid, max tdcs " << r.max_tdcs << " a.u., " << measurable
              << " measurable points\n";
    return 0;
}

json counts_json(const CoincidenceCounts& c) {
    return {{"pp", c.n_pp}, {"pm", c.n_pm}, {"mp", c.n_mp}, {"mm", c.n_mm}};
}

int cmd_bell_sim(const Overrides& o, double ta, double tb, std::uint64_t n) {
    ScanConfig c = resolve(o);
    c.mc.workers = c.workers;
    const PointObservables p = evaluate_point(c, ta, tb);
    if (p.degenerate) throw DegenerateStateError("final spin state vanishes at this point");
    const AmplitudePair& a = p.amplitudes.amps;
    const SpinDensityMatrix rho = c.pure() ? rho_pure(a, c.p1, c.p2) : rho_mixed(a, c.p1, c.p2);
    const ChshExperiment ex = run_chsh_experiment(rho, n, c.mc.seed, DetectorSettings::standard(), c.workers);
    json j;
    j["theta_a_deg"] = ta;
    j["theta_b_deg"] = tb;
    j["n_per_setting"] = n;
    j["seed"] = c.mc.seed;
    j["counts"] = json::array();
    for (const auto& cc : ex.counts) j["counts"].push_back(counts_json(cc));
    j["chsh_estimate"] = ex.estimate.value;
    j["chsh_stderr"] = ex.estimate.stderr_;
    j["chsh_exact"] = chsh_expectation(rho);
    j["violation_sigma"] = (ex.estimate.value - 2.0) / ex.estimate.stderr_;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_validate(bool quick, std::optional<std::uint64_t> samples, std::optional<std::uint64_t> seed,
                 std::optional<unsigned> workers) {
    ValidateOptions v;
    v.include_mc = !quick;
    if (samples) v.mc_samples = *samples;
    if (seed) v.seed = *seed;
    if (workers) v.workers = *workers;
    bool ok = true;
    for (const auto& r : run_validation(v)) {
        ok = ok && r.passed;
        std::printf("%-4s %-55s max_err %.3e tol %.1e %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.max_error, r.tolerance, r.seconds, r.detail.c_str());
    }
    std::printf("%s\n", ok ? "all suites passed" : "validation FAILED");
    return ok ? 0 : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin entanglement in electron-impact ionization of hydrogen"};
    app.require_subcommand(1);

    Overrides po, so, bo;
    double ta = 0.0, tb = 0.0, bta = 0.0, btb = 0.0;
    std::uint64_t n = 100000;

    auto* point = app.add_subcommand("point", "all observables at one angle pair, as JSON");
    add_common(point, po, false);
    point->add_option("--theta-a", ta, "detector A angle, degrees")->required();
    point->add_option("--theta-b", tb, "detector B angle, degrees")->required();

    auto* scan = app.add_subcommand("scan", "angle-grid sweep to CSV and PGM");
    add_common(scan, so, true);

    auto* bell = app.add_subcommand("bell-sim", "simulated CHSH coincidence experiment at one angle pair");
    add_common(bell, bo, false);
    bell->add_option("--theta-a", bta, "detector A angle, degrees")->required();
    bell->add_option("--theta-b", btb, "detector B angle, degrees")->required();
    bell->add_option("--n", n, "coincidences per setting pair");

    auto* val = app.add_subcommand("validate", "run the oracle suites");
    bool quick = false;
    std::optional<std::uint64_t> vsamples, vseed;
    std::optional<unsigned> vworkers;
    val->add_flag("--quick", quick, "skip the Monte Carlo suites");
    val->add_option("--mc-samples", vsamples, "samples for the free-limit suite");
    val->add_option("--seed", vseed, "seed for random inputs");
    val->add_option("--workers", vworkers, "threads for the Monte Carlo suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*point) return cmd_point(po, ta, tb);
        if (*scan) return cmd_scan(so);
        if (*bell) return cmd_bell_sim(bo, bta, btb, n);
        if (*val) return cmd_validate(quick, vsamples, vseed, vworkers);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitModel;
    }
    return 0;
}
