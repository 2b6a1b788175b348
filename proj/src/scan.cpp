#include "e2espin/scan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "e2espin/bell.hpp"
#include "e2espin/entanglement.hpp"
#include "e2espin/errors.hpp"
#include "e2espin/parallel.hpp"
#include "e2espin/philox.hpp"

namespace e2espin {

using nlohmann::json;

int GridSpec::count() const {
    return static_cast<int>(std::llround((theta_max_deg - theta_min_deg) / step_deg)) + 1;
}

double GridSpec::angle_deg(int i) const {
    return i == count() - 1 ? theta_max_deg : theta_min_deg + i * step_deg;
}

double ScanConfig::eb() const {
    if (equal_sharing) return 0.5 * (e0() + et());
    return ev_to_hartree(*eb_ev);
}

namespace {

double deg_to_rad(double d) {
    if (std::abs(d) == 180.0) return std::copysign(kPi, d);
    return d * (kPi / 180.0);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) throw ConfigError("unknown key \"" + (where.empty() ? key : where + "." + key) + "\"");
}

double get_number(const json& obj, const char* key, const std::string& name, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("\"" + name + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("\"" + name + "\" must be finite");
    return x;
}

std::uint64_t get_count(const json& obj, const char* key, const std::string& name, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError("\"" + name + "\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const char* key, const std::string& name, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) throw ConfigError("\"" + name + "\" must be true or false");
    return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& name, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError("\"" + name + "\" must be a string");
    return obj.at(key).get<std::string>();
}

PolarizationVector get_vector(const json& obj, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); }))
        throw ConfigError(std::string("\"") + key + "\" must be an array of three numbers");
    try {
        return PolarizationVector(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    } catch (const Error& e) {
        throw ConfigError(std::string("\"") + key + "\": " + e.what());
    }
}

// Rethrows with the grid point prepended, keeping the error category.
[[noreturn]] void rethrow_at(const Error& e, double ta, double tb) {
    std::ostringstream os;
    os << "at theta_a=" << ta << " deg, theta_b=" << tb << " deg: " << e.what();
    const std::string msg = os.str();
    if (dynamic_cast<const KinematicsError*>(&e)) throw KinematicsError(msg);
    if (auto* n = dynamic_cast<const NumericError*>(&e)) throw NumericError(msg, n->abs_z());
    if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
    if (dynamic_cast<const DegenerateStateError*>(&e)) throw DegenerateStateError(msg);
    if (dynamic_cast<const ValidationError*>(&e)) throw ValidationError(msg);
    throw Error(msg);
}

} // namespace

const char* to_string(Model m) { return m == Model::pwba ? "pwba" : "c3"; }

const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::perp: return "perp";
    case Scenario::antiparallel: return "antiparallel";
    case Scenario::one_unpolarized: return "one_unpolarized";
    case Scenario::unpolarized: return "unpolarized";
    case Scenario::custom: return "custom";
    }
    return "?";
}

void ScanConfig::validate() const {
    if (!(e0_ev > 0.0)) throw ConfigError("\"e0_ev\" must be positive");
    if (!equal_sharing && !eb_ev) throw ConfigError("\"eB_ev\" is required when equal_sharing is false");
    if (equal_sharing && eb_ev) throw ConfigError("\"eB_ev\" conflicts with equal_sharing = true");
    if (!(eb() > 0.0)) throw ConfigError("\"eB_ev\": closed channel (eB <= 0)");
    if (!(e0() + et() - eb() > 0.0)) throw ConfigError("\"eT_ev\": closed channel (eA <= 0)");
    if (!(threshold_frac >= 0.0 && threshold_frac <= 1.0)) throw ConfigError("\"threshold_frac\" must lie in [0, 1]");
    if (!(grid.step_deg > 0.0)) throw ConfigError("\"grid.step_deg\" must be positive");
    if (grid.theta_min_deg < -180.0 || grid.theta_max_deg > 180.0 || grid.theta_min_deg > grid.theta_max_deg)
        throw ConfigError("\"grid\": angles must satisfy -180 <= theta_min_deg <= theta_max_deg <= 180");
    const double steps = (grid.theta_max_deg - grid.theta_min_deg) / grid.step_deg;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw ConfigError("\"grid.step_deg\" must divide the angle range");
    try {
        mc.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("\"mc\": ") + e.what());
    }
}

ScanConfig parse_config(const json& j) {
    check_keys(j, "", {"model", "e0_ev", "equal_sharing", "eB_ev", "eT_ev", "scenario", "p1", "p2", "grid",
                       "threshold_frac", "mc", "output", "workers"});
    ScanConfig c;
    const std::string model = get_string(j, "model", "model", "pwba");
    if (model == "pwba")
        c.model = Model::pwba;
    else if (model == "c3")
        c.model = Model::c3;
    else
        throw ConfigError("\"model\" must be \"pwba\" or \"c3\", got \"" + model + "\"");

    c.e0_ev = get_number(j, "e0_ev", "e0_ev", c.e0_ev);
    c.equal_sharing = get_bool(j, "equal_sharing", "equal_sharing", c.equal_sharing);
    if (j.contains("eB_ev")) c.eb_ev = get_number(j, "eB_ev", "eB_ev", 0.0);
    c.et_ev = get_number(j, "eT_ev", "eT_ev", c.et_ev);

    const std::string sc = get_string(j, "scenario", "scenario", "unpolarized");
    const bool has_p = j.contains("p1") || j.contains("p2");
    if (sc == "perp") {
        c.scenario = Scenario::perp;
        c.p1 = {0, 0, 1};
        c.p2 = {1, 0, 0};
    } else if (sc == "antiparallel") {
        c.scenario = Scenario::antiparallel;
        c.p1 = {0, 0, 1};
        c.p2 = {0, 0, -1};
    } else if (sc == "one_unpolarized") {
        c.scenario = Scenario::one_unpolarized;
        c.p1 = {0, 0, 1};
    } else if (sc == "unpolarized") {
        c.scenario = Scenario::unpolarized;
    } else if (sc == "custom") {
        c.scenario = Scenario::custom;
        if (!j.contains("p1") || !j.contains("p2")) throw ConfigError("scenario \"custom\" needs \"p1\" and \"p2\"");
        c.p1 = get_vector(j, "p1");
        c.p2 = get_vector(j, "p2");
    } else {
        throw ConfigError("\"scenario\" must be one of perp, antiparallel, one_unpolarized, unpolarized, custom");
    }
    if (has_p && c.scenario != Scenario::custom) throw ConfigError("\"p1\"/\"p2\" are only allowed with scenario custom");

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"theta_min_deg", "theta_max_deg", "step_deg"});
        c.grid.theta_min_deg = get_number(g, "theta_min_deg", "grid.theta_min_deg", c.grid.theta_min_deg);
        c.grid.theta_max_deg = get_number(g, "theta_max_deg", "grid.theta_max_deg", c.grid.theta_max_deg);
        c.grid.step_deg = get_number(g, "step_deg", "grid.step_deg", c.grid.step_deg);
    }
    c.threshold_frac = get_number(j, "threshold_frac", "threshold_frac", c.threshold_frac);

    if (j.contains("mc")) {
        const json& m = j.at("mc");
        check_keys(m, "mc", {"samples", "seed", "lambda1", "r_max", "debug_free_limit", "line_points", "taper"});
        c.mc.samples = get_count(m, "samples", "mc.samples", c.mc.samples);
        c.mc.seed = get_count(m, "seed", "mc.seed", c.mc.seed);
        c.mc.lambda1 = get_number(m, "lambda1", "mc.lambda1", c.mc.lambda1);
        c.mc.r_max = get_number(m, "r_max", "mc.r_max", c.mc.r_max);
        c.mc.debug_free_limit = get_bool(m, "debug_free_limit", "mc.debug_free_limit", c.mc.debug_free_limit);
        const std::uint64_t lp = get_count(m, "line_points", "mc.line_points", 0);
        if (lp > 1'000'000) throw ConfigError("\"mc.line_points\" is too large");
        c.mc.line_points = static_cast<int>(lp);
        c.mc.taper = get_number(m, "taper", "mc.taper", c.mc.taper);
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, "output", {"dir", "prefix"});
        c.output_dir = get_string(o, "dir", "output.dir", c.output_dir.string());
        c.prefix = get_string(o, "prefix", "output.prefix", c.prefix);
        if (c.prefix.empty()) throw ConfigError("\"output.prefix\" must not be empty");
    }
    const std::uint64_t w = get_count(j, "workers", "workers", c.workers);
    if (w > 4096) throw ConfigError("\"workers\" is too large");
    c.workers = static_cast<unsigned>(w);

    c.validate();
    return c;
}

ScanConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

ScanConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_text(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

PointObservables observables_from(const ScanConfig& cfg, const Kinematics& kin, const AmplitudeResult& amps) {
    PointObservables out;
    out.kin = kin;
    out.amplitudes = amps;
    const AmplitudePair& a = amps.amps;

    const double p = cfg.p1.dot(cfg.p2);
    const double u = final_state_norm(a, p);
    if (!(u > 1e-14 * (std::norm(a.direct) + std::norm(a.exchange)))) {
        out.degenerate = true;
        return out;
    }
    out.tdcs = tdcs_polarized(a, p, kin);
    out.concurrence =
        cfg.pure() ? concurrence_pure_closed(a, cfg.p1, cfg.p2) : concurrence_wootters(rho_mixed(a, cfg.p1, cfg.p2));
    out.eof = entanglement_of_formation(out.concurrence);

    const CrossSections x = tdcs_basic(a, kin);
    if (x.i_anti() * (1.0 - p) + x.i_par * (1.0 + p) > 0.0)
        out.bell_lhs = bell_lhs_cross_sections(x.i_anti(), x.i_par, cfg.p1, cfg.p2);
    if (x.i_anti() + x.i_par > 0.0) out.asymmetry = spin_asymmetry(x.i_anti(), x.i_par);

    if (cfg.model == Model::c3) {
        // first-order propagation, direct and exchange errors treated as independent
        const Complex td = a.direct, te = a.exchange;
        const double c = tdcs_prefactor(kin);
        const double gdr = c * (2.0 * td.real() - (1.0 + p) * te.real());
        const double gdi = c * (2.0 * td.imag() - (1.0 + p) * te.imag());
        const double ger = c * (2.0 * te.real() - (1.0 + p) * td.real());
        const double gei = c * (2.0 * te.imag() - (1.0 + p) * td.imag());
        const AmplitudeEstimate& d = amps.direct;
        const AmplitudeEstimate& e = amps.exchange;
        out.tdcs_stderr = std::sqrt(std::pow(gdr * d.stderr_re, 2) + std::pow(gdi * d.stderr_im, 2) +
                                    std::pow(ger * e.stderr_re, 2) + std::pow(gei * e.stderr_im, 2));
    }
    return out;
}

PointObservables evaluate_point(const ScanConfig& cfg, double theta_a_deg, double theta_b_deg,
                                std::uint64_t point_index) {
    try {
        const Kinematics kin =
            build_coplanar(cfg.e0(), cfg.eb(), deg_to_rad(theta_a_deg), deg_to_rad(theta_b_deg), cfg.et());
        McConfig mc = cfg.mc;
        mc.seed = mix_seed(cfg.mc.seed, point_index);
        return observables_from(cfg, kin, amplitude_pair(cfg.model, kin, mc));
    } catch (const Error& e) {
        rethrow_at(e, theta_a_deg, theta_b_deg);
    }
}

ScanResult run_scan(const ScanConfig& cfg) {
    cfg.validate();
    ScanConfig local = cfg;
    local.mc.workers = 1; // parallelism is across grid points

    ScanResult r;
    r.n_a = r.n_b = cfg.grid.count();
    r.has_stderr = cfg.model == Model::c3;
    const std::size_t n = static_cast<std::size_t>(r.n_a) * r.n_b;
    r.records.resize(n);
    parallel_for(n, cfg.workers, [&](std::size_t i) {
        const int ia = static_cast<int>(i / r.n_b), ib = static_cast<int>(i % r.n_b);
        ScanRecord& rec = r.records[i];
        rec.theta_a_deg = cfg.grid.angle_deg(ia);
        rec.theta_b_deg = cfg.grid.angle_deg(ib);
        const PointObservables o = evaluate_point(local, rec.theta_a_deg, rec.theta_b_deg, i);
        rec.tdcs = o.tdcs;
        rec.tdcs_stderr = o.tdcs_stderr;
        rec.concurrence = o.concurrence;
        rec.eof = o.eof;
        rec.bell_lhs = o.bell_lhs;
        rec.asymmetry = o.asymmetry;
    });

    for (const auto& rec : r.records) r.max_tdcs = std::max(r.max_tdcs, rec.tdcs);
    const double cut = cfg.threshold_frac * r.max_tdcs;
    for (auto& rec : r.records) rec.measurable = rec.tdcs >= cut;
    return r;
}

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv(const std::vector<ScanRecord>& records, const std::filesystem::path& path, bool with_stderr) {
    if (records.empty()) throw DomainError("write_csv: no records");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "theta_a_deg,theta_b_deg,tdcs,concurrence,eof,bell_lhs,asymmetry,measurable";
    if (with_stderr) out << ",tdcs_stderr";
    out << '\n';
    for (const auto& r : records) {
        out << format_number(r.theta_a_deg) << ',' << format_number(r.theta_b_deg) << ',' << format_number(r.tdcs)
            << ',' << format_number(r.concurrence) << ',' << format_number(r.eof) << ',' << format_number(r.bell_lhs)
            << ',' << format_number(r.asymmetry) << ',' << (r.measurable ? '1' : '0');
        if (with_stderr) out << ',' << format_number(r.tdcs_stderr);
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
}

std::vector<ScanRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
    const bool with_stderr = line.find(",tdcs_stderr") != std::string::npos;
    const std::size_t ncol = with_stderr ? 9 : 8;
    std::vector<ScanRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<double> v;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            double x = 0.0;
            const auto res = std::from_chars(p, comma, x);
            if (res.ec != std::errc() || res.ptr != comma)
                throw Error(path.string() + ":" + std::to_string(lineno) + ": bad number");
            v.push_back(x);
            p = comma + 1;
        }
        if (v.size() != ncol) throw Error(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
        ScanRecord r;
        r.theta_a_deg = v[0];
        r.theta_b_deg = v[1];
        r.tdcs = v[2];
        r.concurrence = v[3];
        r.eof = v[4];
        r.bell_lhs = v[5];
        r.asymmetry = v[6];
        r.measurable = v[7] != 0.0;
        if (with_stderr) r.tdcs_stderr = v[8];
        out.push_back(r);
    }
    return out;
}

void write_pgm(const std::vector<double>& field, const std::vector<bool>& mask, int rows, int cols,
               const std::filesystem::path& path) {
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    if (rows <= 0 || cols <= 0 || field.size() != n || mask.size() != n)
        throw DomainError("write_pgm: field is not a rows x cols grid");
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (!mask[i]) top = std::max(top, field[i]);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "P2\n" << cols << ' ' << rows << "\n255\n";
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            long px = 0;
            if (!mask[i] && top > 0.0 && field[i] > 0.0) px = std::clamp(std::lround(255.0 * field[i] / top), 0L, 255L);
            if (c) out << ' ';
            out << px;
        }
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
}

const char* to_string(Field f) {
    switch (f) {
    case Field::tdcs: return "tdcs";
    case Field::concurrence: return "concurrence";
    case Field::eof: return "eof";
    case Field::bell_lhs: return "bell_lhs";
    case Field::asymmetry: return "asymmetry";
    }
    return "?";
}

std::vector<double> extract(const ScanResult& r, Field f) {
    std::vector<double> v;
    v.reserve(r.records.size());
    for (const auto& rec : r.records) {
        switch (f) {
        case Field::tdcs: v.push_back(rec.tdcs); break;
        case Field::concurrence: v.push_back(rec.concurrence); break;
        case Field::eof: v.push_back(rec.eof); break;
        case Field::bell_lhs: v.push_back(rec.bell_lhs); break;
        case Field::asymmetry: v.push_back(rec.asymmetry); break;
        }
    }
    return v;
}

std::vector<std::filesystem::path> write_scan_outputs(const ScanConfig& cfg, const ScanResult& r) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error("cannot create " + cfg.output_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    const auto csv = cfg.output_dir / (cfg.prefix + ".csv");
    write_csv(r.records, csv, r.has_stderr);
    written.push_back(csv);

    std::vector<bool> mask(r.records.size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = !r.records[i].measurable;
    for (Field f : {Field::tdcs, Field::concurrence, Field::eof, Field::bell_lhs, Field::asymmetry}) {
        const auto p = cfg.output_dir / (cfg.prefix + "_" + to_string(f) + ".pgm");
        write_pgm(extract(r, f), mask, r.n_a, r.n_b, p);
        written.push_back(p);
    }
    return written;
}

} // namespace e2espin
