#pragma once

#include "e2espin/spin.hpp"

namespace e2espin {

// Mixed-state concurrence, product or Bell basis input.
double concurrence_wootters(const SpinDensityMatrix& rho);

// Pure final state with unit polarizations zeta1, zeta2.
double concurrence_pure_closed(const AmplitudePair& amps, const PolarizationVector& zeta1,
                               const PolarizationVector& zeta2);

// sqrt(2 (1 - Tr rho1^2)) of a normalized pure state.
double concurrence_pure_from_state(const PairSpinState& psi);

// Both electrons unpolarized.
double concurrence_unpolarized(const AmplitudePair& amps);

double singlet_triplet_concurrence(double i_singlet, double i_triplet);

double binary_entropy(double x);
double entanglement_of_formation(double c);
// Entropy of the reduced state of a pure pair with concurrence c.
double entropy_from_concurrence(double c);

double von_neumann_entropy(const Mat2& rho1);
double linear_entropy(const Mat2& rho1);

} // namespace e2espin
