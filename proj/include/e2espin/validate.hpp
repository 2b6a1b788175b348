#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "e2espin/amplitudes.hpp"
#include "e2espin/bell.hpp"

namespace e2espin {

// Bell-basis density matrix <B_i|rho|B_j> written out entry by entry from the amplitudes,
// (Phi+, Phi-, Psi+, Psi-) order. Partial polarizations allowed.
Mat4 bell_basis_closed_form(const AmplitudePair& amps, const PolarizationVector& p1, const PolarizationVector& p2);

// Plane-wave value of the three-Coulomb integral (distortions and e-e factor switched off).
Complex free_limit_tmatrix(const Kinematics& kin, Ordering ordering);

struct SuiteResult {
    std::string name;
    double tolerance = 0.0;
    double max_error = 0.0;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

using ChshClosedForm =
    std::function<double(const AmplitudePair&, const PolarizationVector&, const PolarizationVector&)>;

struct ValidateOptions {
    std::uint64_t seed = 20240611;
    int n_random = 10000;
    int n_appendix = 1000;
    bool include_mc = true;
    std::uint64_t mc_samples = 10'000'000;
    unsigned workers = 0;
    ChshClosedForm chsh_closed = chsh_closed_form; // replaceable for mutation tests
};

SuiteResult suite_pure_concurrence(const ValidateOptions& o);
SuiteResult suite_mixed_concurrence(const ValidateOptions& o);
SuiteResult suite_appendix_b(const ValidateOptions& o);
SuiteResult suite_chsh(const ValidateOptions& o);
SuiteResult suite_pwba_symmetry(const ValidateOptions& o);
SuiteResult suite_c3_mirror(const ValidateOptions& o);
SuiteResult suite_free_limit(const ValidateOptions& o);

std::vector<SuiteResult> run_validation(const ValidateOptions& o);

} // namespace e2espin
