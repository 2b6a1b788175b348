#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "e2espin/amplitudes.hpp"

namespace e2espin {

enum class Scenario { perp, antiparallel, one_unpolarized, unpolarized, custom };

struct GridSpec {
    double theta_min_deg = -180.0;
    double theta_max_deg = 180.0;
    double step_deg = 2.0;

    int count() const;
    double angle_deg(int i) const;
};

struct ScanConfig {
    Model model = Model::pwba;
    double e0_ev = 54.4;
    bool equal_sharing = true;
    std::optional<double> eb_ev; // only without equal sharing
    double et_ev = -13.605693;
    Scenario scenario = Scenario::unpolarized;
    PolarizationVector p1;
    PolarizationVector p2;
    GridSpec grid;
    double threshold_frac = 0.05;
    McConfig mc;
    std::filesystem::path output_dir = ".";
    std::string prefix = "scan";
    unsigned workers = 1;

    // Energies in hartree.
    double e0() const { return ev_to_hartree(e0_ev); }
    double et() const { return ev_to_hartree(et_ev); }
    double eb() const;
    // Both polarizations unit vectors: the final spin state is pure.
    bool pure() const { return p1.is_unit() && p2.is_unit(); }

    void validate() const;
};

ScanConfig parse_config(const nlohmann::json& j);
ScanConfig parse_config_text(const std::string& text);
ScanConfig load_config(const std::filesystem::path& path);

const char* to_string(Model m);
const char* to_string(Scenario s);

struct ScanRecord {
    double theta_a_deg = 0.0;
    double theta_b_deg = 0.0;
    double tdcs = 0.0;
    double concurrence = 0.0;
    double eof = 0.0;
    double bell_lhs = 0.0;
    double asymmetry = 0.0;
    bool measurable = false;
    double tdcs_stderr = 0.0; // c3 only
};

struct PointObservables {
    AmplitudeResult amplitudes;
    Kinematics kin;
    bool degenerate = false; // final spin state vanishes; observables left at zero
    double tdcs = 0.0;
    double tdcs_stderr = 0.0;
    double concurrence = 0.0;
    double eof = 0.0;
    double bell_lhs = 0.0;
    double asymmetry = 0.0;
};

// Observables for given amplitudes; the scenario comes from cfg.p1, cfg.p2.
PointObservables observables_from(const ScanConfig& cfg, const Kinematics& kin, const AmplitudeResult& amps);

// Observables at one angle pair. `point_index` selects the derived MC seed.
PointObservables evaluate_point(const ScanConfig& cfg, double theta_a_deg, double theta_b_deg,
                                std::uint64_t point_index = 0);

struct ScanResult {
    int n_a = 0;
    int n_b = 0;
    double max_tdcs = 0.0;
    bool has_stderr = false;
    std::vector<ScanRecord> records; // theta_a-major

    const ScanRecord& at(int ia, int ib) const { return records[static_cast<std::size_t>(ia) * n_b + ib]; }
};

ScanResult run_scan(const ScanConfig& cfg);

void write_csv(const std::vector<ScanRecord>& records, const std::filesystem::path& path, bool with_stderr);
std::vector<ScanRecord> read_csv(const std::filesystem::path& path);

// Plain PGM, row = theta_a index, column = theta_b index. Masked and negative values are 0;
// the rest scale linearly to 255 at the largest unmasked value.
void write_pgm(const std::vector<double>& field, const std::vector<bool>& mask, int rows, int cols,
               const std::filesystem::path& path);

enum class Field { tdcs, concurrence, eof, bell_lhs, asymmetry };
const char* to_string(Field f);
std::vector<double> extract(const ScanResult& r, Field f);

// prefix.csv and prefix_<field>.pgm under cfg.output_dir; returns the written paths.
std::vector<std::filesystem::path> write_scan_outputs(const ScanConfig& cfg, const ScanResult& r);

std::string format_number(double x);

} // namespace e2espin
