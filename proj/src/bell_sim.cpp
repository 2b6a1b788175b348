#include "e2espin/bell_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "e2espin/errors.hpp"
#include "e2espin/parallel.hpp"
#include "e2espin/philox.hpp"

namespace e2espin {

double CoincidenceCounts::correlator() const {
    const std::uint64_t n = total();
    if (n == 0) throw DomainError("correlator of an empty setting");
    const double same = static_cast<double>(n_pp) + static_cast<double>(n_mm);
    const double diff = static_cast<double>(n_pm) + static_cast<double>(n_mp);
    return (same - diff) / static_cast<double>(n);
}

std::array<double, 4> outcome_probabilities(const SpinDensityMatrix& rho, const Vec3& a, const Vec3& b) {
    const Mat4 m = to_product_basis(rho).matrix();
    const Mat2 id = Mat2::Identity();
    const Mat2 sa = pauli_projection(a), sb = pauli_projection(b);
    std::array<double, 4> p{};
    int k = 0;
    for (double s1 : {1.0, -1.0})
        for (double s2 : {1.0, -1.0}) {
            const Mat4 proj = kron(0.5 * (id + s1 * sa), 0.5 * (id + s2 * sb));
            p[k++] = std::clamp((m * proj).trace().real(), 0.0, 1.0);
        }
    return p;
}

CoincidenceCounts sample_coincidences(const SpinDensityMatrix& rho, const Vec3& a, const Vec3& b, std::uint64_t n,
                                      std::uint64_t seed, std::uint32_t stream) {
    const auto p = outcome_probabilities(rho, a, b);
    const double c0 = p[0], c1 = c0 + p[1], c2 = c1 + p[2];
    CoincidenceCounts out;
    UniformStream rng(seed, 0, stream);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double u = rng.next() * (c2 + p[3]);
        if (u < c0)
            ++out.n_pp;
        else if (u < c1)
            ++out.n_pm;
        else if (u < c2)
            ++out.n_mp;
        else
            ++out.n_mm;
    }
    return out;
}

ChshEstimate chsh_estimate(const std::array<CoincidenceCounts, 4>& counts) {
    static constexpr double sign[4] = {1.0, -1.0, 1.0, 1.0};
    ChshEstimate est;
    double var = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (counts[i].total() == 0) throw DomainError("chsh_estimate: setting pair " + std::to_string(i) + " has no counts");
        const double e = counts[i].correlator();
        est.value += sign[i] * e;
        var += (1.0 - e * e) / static_cast<double>(counts[i].total());
    }
    est.stderr_ = std::sqrt(var);
    return est;
}

ChshExperiment run_chsh_experiment(const SpinDensityMatrix& rho, std::uint64_t n_per_setting, std::uint64_t seed,
                                   const DetectorSettings& s, unsigned workers) {
    s.validate();
    const Vec3* a[4] = {&s.a1, &s.a1, &s.a2, &s.a2};
    const Vec3* b[4] = {&s.b1, &s.b2, &s.b1, &s.b2};
    ChshExperiment ex;
    parallel_for(4, workers, [&](std::size_t i) {
        ex.counts[i] = sample_coincidences(rho, *a[i], *b[i], n_per_setting, seed, static_cast<std::uint32_t>(i));
    });
    ex.estimate = chsh_estimate(ex.counts);
    return ex;
}

} // namespace e2espin
