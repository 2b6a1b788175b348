#include "e2espin/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "e2espin/errors.hpp"
#include "e2espin/parallel.hpp"
#include "e2espin/philox.hpp"

namespace e2espin {

double hydrogen_1s_position(const Vec3& r, double charge) {
    if (!(charge > 0.0)) throw DomainError("nuclear charge must be positive");
    return std::sqrt(charge * charge * charge / kPi) * std::exp(-charge * r.norm());
}

double hydrogen_1s_momentum(double q, double charge) {
    if (!(charge > 0.0)) throw DomainError("nuclear charge must be positive");
    const double d = q * q + charge * charge;
    return 8.0 * std::sqrt(kPi) * std::pow(charge, 2.5) / (d * d);
}

double hydrogen_1s_momentum(const Vec3& q, double charge) { return hydrogen_1s_momentum(q.norm(), charge); }

AmplitudePair pwba_amplitudes(const Kinematics& kin) {
    const double ka2 = (kin.k0 - kin.ka).squaredNorm();
    const double kb2 = (kin.k0 - kin.kb).squaredNorm();
    if (ka2 == 0.0 || kb2 == 0.0) throw KinematicsError("singular kinematics: vanishing momentum transfer");
    const double phi = hydrogen_1s_momentum(kin.q());
    return {Complex(4.0 * kPi * phi / ka2, 0.0), Complex(4.0 * kPi * phi / kb2, 0.0)};
}

CoulombWave::CoulombWave(const Vec3& k, double charge, double rho_max)
    : k_(k), kmag_(k.norm()), xi_(-charge / kmag_), norm_(coulomb_norm(xi_)), hyp_(Complex(0.0, xi_), 1.0) {
    if (!(kmag_ > 0.0)) throw DomainError("coulomb_wave: |k| must be positive");
    if (!(charge >= 0.0)) throw DomainError("coulomb_wave: charge must be nonnegative");
    if (rho_max > 0.0 && xi_ != 0.0) table_.emplace(Complex(0.0, xi_), 1.0, rho_max);
}

Complex CoulombWave::distortion(const Vec3& r) const {
    if (xi_ == 0.0) return 1.0;
    const double rho = std::max(0.0, kmag_ * r.norm() + k_.dot(r));
    return norm_ * (table_ ? (*table_)(rho) : hyp_(Complex(0.0, -rho)));
}

Complex CoulombWave::operator()(const Vec3& r) const { return std::polar(1.0, k_.dot(r)) * distortion(r); }

Complex coulomb_wave(const Vec3& k, const Vec3& r, double charge) { return CoulombWave(k, charge)(r); }

namespace {

Kummer1F1 correlation_hyp(double xi, bool vanishes) {
    return vanishes ? Kummer1F1(0.0, 1.0) : Kummer1F1(Complex(0.0, xi), 1.0);
}

} // namespace

EeCorrelation::EeCorrelation(const Vec3& k_ab, double rho_max)
    : k_(k_ab),
      kmag_(k_ab.norm()),
      xi_(kmag_ > 0.0 ? 0.5 / kmag_ : INFINITY),
      vanishes_(!(xi_ <= kVanishingXi)),
      norm_(vanishes_ ? Complex(0.0) : coulomb_norm(xi_)),
      hyp_(correlation_hyp(xi_, vanishes_)) {
    if (rho_max > 0.0 && !vanishes_) table_.emplace(Complex(0.0, xi_), 1.0, rho_max);
}

Complex EeCorrelation::operator()(const Vec3& r12) const {
    if (vanishes_) return 0.0;
    const double rho = std::max(0.0, kmag_ * r12.norm() + k_.dot(r12));
    return norm_ * (table_ ? (*table_)(rho) : hyp_(Complex(0.0, -rho)));
}

Complex ee_correlation(const Vec3& k_ab, const Vec3& r12) {
    if (!(k_ab.norm() > 0.0)) throw DomainError("ee_correlation: relative momentum must be nonzero");
    return EeCorrelation(k_ab)(r12);
}

void McConfig::validate() const {
    if (samples < kMinSamples)
        throw DomainError("Monte Carlo budget " + std::to_string(samples) + " below minimum " +
                          std::to_string(kMinSamples));
    if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw DomainError("lambda1 must be positive");
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw DomainError("r_max must be positive");
    if (!(taper >= 0.0 && taper < 1.0)) throw DomainError("taper must lie in [0, 1)");
    if (line_points < 0) throw DomainError("line_points must be nonnegative");
}

double AmplitudeEstimate::stderr_abs() const { return std::hypot(stderr_re, stderr_im); }

namespace {

constexpr double kUniformWeight = 0.1;  // share of lines through the uniform disc
constexpr double kPhasePerStratum = 1.5; // |K| * stratum width, radians; aliasing sets in near pi
constexpr std::uint64_t kLinesPerBlock = 32;
constexpr double kBoundReach = 30.0; // r2 beyond this has probability ~1e-11; 1F1 tables stop here

struct Frame {
    Vec3 u, v, w;
};

// Orthonormal frame with w along K. `handed` = -1 flips u and v, which makes the frame
// built for mirrored momenta the exact mirror image of the original.
Frame sampling_frame(const Vec3& K, double handed) {
    Frame f;
    f.w = K / K.norm();
    Vec3 c = Vec3::UnitY().cross(f.w);
    if (c.norm() < 1e-8) c = Vec3::UnitX().cross(f.w);
    f.u = handed * (c / c.norm());
    f.v = handed * f.w.cross(f.u);
    return f;
}

double window(double r, double rmax, double taper) {
    const double r0 = rmax * (1.0 - taper);
    if (r <= r0) return 1.0;
    if (r >= rmax) return 0.0;
    const double c = std::cos(0.5 * kPi * (r - r0) / (rmax - r0));
    return c * c;
}

// Running mean/variance of the complex line estimates.
struct Moments {
    double n = 0.0;
    double mean_re = 0.0, m2_re = 0.0;
    double mean_im = 0.0, m2_im = 0.0;
    std::uint64_t rejected = 0;

    void add(Complex x) {
        n += 1.0;
        const double dr = x.real() - mean_re;
        mean_re += dr / n;
        m2_re += dr * (x.real() - mean_re);
        const double di = x.imag() - mean_im;
        mean_im += di / n;
        m2_im += di * (x.imag() - mean_im);
    }

    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        const double tot = n + o.n;
        const double dr = o.mean_re - mean_re, di = o.mean_im - mean_im;
        mean_re += dr * o.n / tot;
        mean_im += di * o.n / tot;
        m2_re += o.m2_re + dr * dr * n * o.n / tot;
        m2_im += o.m2_im + di * di * n * o.n / tot;
        n = tot;
        rejected += o.rejected;
    }
};

class LineEstimator {
public:
    LineEstimator(const Kinematics& kin, Ordering ordering, const McConfig& cfg)
        : cfg_(cfg),
          k1_(ordering == Ordering::direct ? kin.ka : kin.kb),
          k2_(ordering == Ordering::direct ? kin.kb : kin.ka),
          K_(kin.k0 - k1_),
          frame_(sampling_frame(K_, ordering == Ordering::direct ? 1.0 : -1.0)),
          charge_(cfg.debug_free_limit ? 0.0 : kHydrogenCharge),
          wave1_(k1_, charge_, 2.0 * k1_.norm() * cfg.r_max),
          wave2_(k2_, charge_),
          corr_(0.5 * (k1_ - k2_), cfg.debug_free_limit ? 0.0 : (k1_ - k2_).norm() * (cfg.r_max + kBoundReach)),
          kappa_(cfg.lambda1 * K_.norm()),
          rmax_(cfg.r_max) {
        points_ = cfg.line_points > 0
                      ? cfg.line_points
                      : std::clamp(static_cast<int>(std::ceil(2.0 * rmax_ * K_.norm() / kPhasePerStratum)), 32, 2048);
    }

    int points_per_line() const { return points_; }
    bool identically_zero() const { return !cfg_.debug_free_limit && corr_.vanishes(); }

    // One line estimate of the full integral; bad points are dropped and counted.
    Complex line(std::uint64_t index, std::uint64_t& rejected) const {
        UniformStream rng(cfg_.seed, index);
        const Frame& f = frame_;

        // bound electron: radial Gamma(3, 1/Z), isotropic
        const double z = kHydrogenCharge;
        const double r2 = -(std::log(rng.next()) + std::log(rng.next()) + std::log(rng.next())) / z;
        const double cos_t = 2.0 * rng.next() - 1.0;
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double ph2 = 2.0 * kPi * rng.next();
        const double a2 = r2 * sin_t * std::cos(ph2), b2 = r2 * sin_t * std::sin(ph2), c2 = r2 * cos_t;
        const Vec3 pos2 = a2 * f.u + b2 * f.v + c2 * f.w;
        const double pdf2 = z * z * z * std::exp(-z * r2) / (8.0 * kPi);

        // transverse offset of the line: mixture around the nucleus, around the bound
        // electron, and uniform over the truncation disc
        const double pick = rng.next();
        // 2-D density (kappa^2 / 2pi) K0(kappa b): exponential mixture of Gaussians
        const double mix = -std::log(rng.next());
        const double rt = std::sqrt(2.0 * mix) / kappa_ * std::sqrt(-2.0 * std::log(rng.next()));
        const double at = 2.0 * kPi * rng.next();
        const double rd = rmax_ * std::sqrt(rng.next());
        const double ad = 2.0 * kPi * rng.next();
        const double wo = 0.5 * (1.0 - kUniformWeight);
        double bu, bv;
        if (pick < wo) {
            bu = rt * std::cos(at);
            bv = rt * std::sin(at);
        } else if (pick < 2.0 * wo) {
            bu = a2 + rt * std::cos(at);
            bv = b2 + rt * std::sin(at);
        } else {
            bu = rd * std::cos(ad);
            bv = rd * std::sin(ad);
        }
        const double b = std::hypot(bu, bv);
        const double bs = std::hypot(bu - a2, bv - b2);
        const double g_norm = kappa_ * kappa_ / (2.0 * kPi);
        const double pdf_perp = wo * g_norm * (std::cyl_bessel_k(0.0, kappa_ * b) + std::cyl_bessel_k(0.0, kappa_ * bs)) +
                                (b <= rmax_ ? kUniformWeight / (kPi * rmax_ * rmax_) : 0.0);
        if (b >= rmax_) return 0.0;

        const double half = std::sqrt(rmax_ * rmax_ - b * b);
        const Complex bound = std::conj(wave2_(pos2)) * hydrogen_1s_position(pos2);
        const Vec3 base = bu * f.u + bv * f.v;

        Complex sum = 0.0;
        const double width = 2.0 * half / points_;
        const double shift = rng.next();
        for (int j = 0; j < points_; ++j) {
            const double t = -half + width * (j + shift);
            const Vec3 pos1 = base + t * f.w;
            try {
                const Complex v = integrand(pos1, pos2);
                if (std::isfinite(v.real()) && std::isfinite(v.imag()))
                    sum += v;
                else
                    ++rejected;
            } catch (const NumericError&) {
                ++rejected;
            }
        }
        return sum * width * bound / (pdf_perp * pdf2);
    }

private:
    // Integrand over r1 without the bound-electron factors.
    Complex integrand(const Vec3& pos1, const Vec3& pos2) const {
        const double r1 = pos1.norm();
        const double w = window(r1, rmax_, cfg_.taper);
        if (w == 0.0) return 0.0;
        const Vec3 r12v = pos1 - pos2;
        const double r12 = r12v.norm();
        const double pot = 1.0 / r12 - 1.0 / r1;
        Complex v = std::polar(w * pot, K_.dot(pos1));
        if (!cfg_.debug_free_limit) v *= std::conj(wave1_.distortion(pos1) * corr_(r12v));
        return v;
    }

    const McConfig& cfg_;
    Vec3 k1_, k2_, K_;
    Frame frame_;
    double charge_;
    CoulombWave wave1_, wave2_;
    EeCorrelation corr_;
    double kappa_;
    double rmax_;
    int points_ = 0;
};

} // namespace

AmplitudeEstimate c3_tmatrix(const Kinematics& kin, Ordering ordering, const McConfig& cfg) {
    cfg.validate();
    if (!(kin.ea > 0.0 && kin.eb > 0.0)) throw KinematicsError("closed channel");
    const Vec3 K = kin.k0 - (ordering == Ordering::direct ? kin.ka : kin.kb);
    if (K.norm() == 0.0) throw KinematicsError("singular kinematics: vanishing momentum transfer");

    const LineEstimator est(kin, ordering, cfg);
    if (est.identically_zero()) return AmplitudeEstimate{};

    const std::uint64_t m = static_cast<std::uint64_t>(est.points_per_line());
    const std::uint64_t lines = cfg.samples / m;
    if (lines < 2)
        throw DomainError("Monte Carlo budget " + std::to_string(cfg.samples) + " gives fewer than two lines of " +
                          std::to_string(m) + " points");

    const std::uint64_t nblocks = (lines + kLinesPerBlock - 1) / kLinesPerBlock;
    std::vector<Moments> blocks(nblocks);
    parallel_for(nblocks, cfg.workers, [&](std::size_t blk) {
        Moments& acc = blocks[blk];
        const std::uint64_t first = blk * kLinesPerBlock;
        const std::uint64_t last = std::min(lines, first + kLinesPerBlock);
        for (std::uint64_t i = first; i < last; ++i) acc.add(est.line(i, acc.rejected));
    });

    Moments total;
    for (const auto& b : blocks) total.merge(b);

    AmplitudeEstimate out;
    out.value = Complex(total.mean_re, total.mean_im);
    out.stderr_re = std::sqrt(total.m2_re / (total.n - 1.0) / total.n);
    out.stderr_im = std::sqrt(total.m2_im / (total.n - 1.0) / total.n);
    out.evaluations = lines * m;
    out.rejected = total.rejected;
    if (static_cast<double>(out.rejected) > 1e-3 * static_cast<double>(out.evaluations))
        throw NumericError("3C integrand rejected " + std::to_string(out.rejected) + " of " +
                           std::to_string(out.evaluations) + " points");
    return out;
}

AmplitudeResult amplitude_pair(Model model, const Kinematics& kin, const McConfig& cfg) {
    AmplitudeResult r;
    if (model == Model::pwba) {
        r.amps = pwba_amplitudes(kin);
        r.direct.value = r.amps.direct;
        r.exchange.value = r.amps.exchange;
        return r;
    }
    r.direct = c3_tmatrix(kin, Ordering::direct, cfg);
    r.exchange = c3_tmatrix(kin, Ordering::exchange, cfg);
    r.amps = {r.direct.value, r.exchange.value};
    return r;
}

} // namespace e2espin
