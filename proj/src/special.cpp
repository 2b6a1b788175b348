#include "e2espin/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "e2espin/errors.hpp"

namespace e2espin {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr int kMaxRecurrenceShift = 100000;

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex lanczos_ln_gamma(Complex z) {
    z -= 1.0;
    Complex x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const Complex t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

std::string format_z(Complex z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

// Taylor step of z w'' + (b - z) w' - a w = 0 from z0 by h.
void taylor_step(Complex a, Complex b, Complex z0, Complex h, Complex& w, Complex& dw) {
    Complex d_prev = w;
    Complex d_cur = dw * h;
    Complex sum = d_prev + d_cur;
    Complex dsum = d_cur;
    const Complex h2 = h * h;
    for (int n = 0;; ++n) {
        if (n >= Kummer1F1::kTermCap)
            throw NumericError("1F1 Taylor step exceeded term cap near z = " + format_z(z0), std::abs(z0));
        const double nn = n;
        const Complex d_next =
            ((nn + a) * d_prev * h2 - (nn + 1.0) * (nn + b - z0) * d_cur * h) / (z0 * ((nn + 1.0) * (nn + 2.0)));
        sum += d_next;
        dsum += (nn + 2.0) * d_next;
        if (n >= 2 && std::abs(d_cur) + std::abs(d_next) <= 1e-17 * (std::abs(sum) + std::abs(dsum))) break;
        d_prev = d_cur;
        d_cur = d_next;
    }
    w = sum;
    dw = dsum / h;
}

} // namespace

Complex ln_gamma(Complex z) {
    if (!finite(z)) throw DomainError("ln_gamma: non-finite argument");
    if (is_nonpositive_integer(z))
        throw DomainError("ln_gamma: pole at z = " + format_z(z));
    if (z.real() >= 0.5) return lanczos_ln_gamma(z);

    // Upward recurrence keeps the continuous branch.
    const double shift = std::ceil(0.5 - z.real());
    if (shift > kMaxRecurrenceShift)
        throw DomainError("ln_gamma: Re z too negative (" + format_z(z) + ")");
    const int n = static_cast<int>(shift);
    Complex logs = 0.0;
    for (int k = 0; k < n; ++k) logs += std::log(z + static_cast<double>(k));
    return lanczos_ln_gamma(z + static_cast<double>(n)) - logs;
}

Kummer1F1::Kummer1F1(Complex a, Complex b) {
    if (!finite(a) || !finite(b)) throw DomainError("1F1: non-finite parameter");
    if (is_nonpositive_integer(b)) throw DomainError("1F1: b = " + format_z(b) + " is a nonpositive integer");
    right_ = make_branch(a, b);
    flipped_ = make_branch(b - a, b);
}

Kummer1F1::Branch Kummer1F1::make_branch(Complex a, Complex b) {
    Branch br;
    br.a = a;
    br.b = b;
    const Complex lgb = ln_gamma(b);
    if (is_nonpositive_integer(b - a))
        br.c1_zero = true;
    else
        br.log_c1 = lgb - ln_gamma(b - a);
    if (is_nonpositive_integer(a)) {
        br.c2_zero = true;
        br.terminating = true;
    } else {
        br.log_c2 = lgb - ln_gamma(a);
    }
    return br;
}

Complex Kummer1F1::operator()(Complex z) const {
    if (!finite(z)) throw NumericError("1F1: non-finite argument", std::abs(z));
    Complex value;
    if (z.real() < 0.0)
        value = std::exp(z) * eval_right(flipped_, -z);
    else
        value = eval_right(right_, z);
    if (!finite(value)) throw NumericError("1F1: overflow at z = " + format_z(z), std::abs(z));
    return value;
}

Complex Kummer1F1::eval_right(const Branch& br, Complex z) {
    const double r = std::abs(z);
    if (r == 0.0) return 1.0;
    if (r <= kSeriesRadius || br.terminating) return series(br, z, nullptr);
    Complex out;
    if (r >= kAsymptoticRadius && asymptotic(br, z, out)) return out;
    return integrate(br, z);
}

Complex Kummer1F1::series(const Branch& br, Complex z, Complex* derivative) {
    Complex term = 1.0;
    Complex sum = 1.0;
    Complex dsum = 0.0;
    for (int n = 0;; ++n) {
        if (n >= kTermCap)
            throw NumericError("1F1 series exceeded " + std::to_string(kTermCap) + " terms at |z| = " +
                                   std::to_string(std::abs(z)),
                               std::abs(z));
        const double nn = n;
        const Complex ratio = (br.a + nn) / ((br.b + nn) * (nn + 1.0)) * z;
        term *= ratio;
        if (term == 0.0) break;
        sum += term;
        dsum += (nn + 1.0) * term;
        if (std::abs(ratio) < 1.0 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    if (derivative) *derivative = dsum / z;
    return sum;
}

bool Kummer1F1::asymptotic(const Branch& br, Complex z, Complex& out) {
    const Complex logz = std::log(z);
    const Complex a = br.a;
    const Complex b = br.b;
    const Complex i_pi_a = Complex(0.0, kPi) * a;

    Complex c1 = 0.0;
    if (!br.c1_zero) {
        const Complex base = br.log_c1 - a * logz;
        if (z.imag() > 0.0)
            c1 = std::exp(base + i_pi_a);
        else if (z.imag() < 0.0)
            c1 = std::exp(base - i_pi_a);
        else
            c1 = std::exp(base) * std::cos(kPi * a);
    }
    const Complex c2 = br.c2_zero ? Complex(0.0) : std::exp(br.log_c2 + z + (a - b) * logz);

    const double target = 1e-16 * std::max(std::abs(c1), std::abs(c2));
    if (target == 0.0) {
        out = 0.0;
        return true;
    }

    // Sum one divergent asymptotic series until its scaled term drops below target.
    auto sum_series = [&](Complex scale, Complex p, Complex q, Complex x, Complex& s) {
        s = 1.0;
        if (scale == 0.0) return true;
        const double mag = std::abs(scale);
        Complex term = 1.0;
        double last = 1.0;
        for (int k = 0; k < kTermCap; ++k) {
            const double kk = k;
            term *= (p + kk) * (q + kk) / ((kk + 1.0) * x);
            if (term == 0.0) return true;
            const double t = std::abs(term);
            if (t > last) return false;
            s += term;
            if (mag * t <= target) return true;
            last = t;
        }
        return false;
    };

    Complex s1, s2;
    if (!sum_series(c1, a, a - b + 1.0, -z, s1)) return false;
    if (!sum_series(c2, 1.0 - a, b - a, z, s2)) return false;
    out = c1 * s1 + c2 * s2;
    return true;
}

Complex Kummer1F1::integrate(const Branch& br, Complex z) {
    const double r = std::abs(z);
    const Complex dir = z / r;
    double t = kSeriesRadius;
    Complex p = dir * t;
    Complex dw;
    Complex w = series(br, p, &dw);
    for (int steps = 0;; ++steps) {
        if (steps >= kTermCap)
            throw NumericError("1F1 integration exceeded step cap at |z| = " + std::to_string(r), r);
        const double step = std::min({kMaxStep, 0.5 * t, r - t});
        const bool last = t + step >= r * (1.0 - 1e-15);
        const Complex h = last ? z - p : dir * step;
        taylor_step(br.a, br.b, p, h, w, dw);
        if (last) break;
        t += step;
        p = dir * t;
    }
    return w;
}

KummerRayTable::KummerRayTable(Complex a, Complex b, double rho_max, double rel_tol)
    : f_(a, b), rho_max_(rho_max), tol_(rel_tol) {
    if (!(rho_max >= 0.0) || !std::isfinite(rho_max)) throw DomainError("KummerRayTable: bad range");
    const int n = std::max(1, static_cast<int>(std::ceil(rho_max / 2.0)));
    for (int i = 0; i < n; ++i) build(rho_max * i / n, rho_max * (i + 1) / n, 0);
    upper_.reserve(pieces_.size());
    for (const auto& p : pieces_) upper_.push_back(p.hi);
}

std::size_t KummerRayTable::direct_pieces() const {
    return static_cast<std::size_t>(std::count_if(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.direct; }));
}

void KummerRayTable::build(double lo, double hi, int depth) {
    constexpr int n = kNodes - 1;
    Piece p{lo, hi, false, {}};
    std::array<Complex, kNodes> v;
    double scale = 0.0;
    try {
        for (int j = 0; j <= n; ++j) {
            const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(kPi * j / n);
            v[j] = f_(Complex(0.0, -x));
            scale = std::max(scale, std::abs(v[j]));
        }
        for (int k = 0; k <= n; ++k) {
            Complex s = 0.0;
            for (int j = 0; j <= n; ++j) s += (j == 0 || j == n ? 0.5 : 1.0) * v[j] * std::cos(kPi * j * k / n);
            p.c[k] = (k == 0 || k == n ? 1.0 : 2.0) * s / static_cast<double>(n);
        }
        bool ok = scale > 0.0 && std::isfinite(scale);
        for (int j = 0; ok && j < n; j += 2) {
            const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(kPi * (j + 0.5) / n);
            const Complex ref = f_(Complex(0.0, -x));
            ok = std::abs(clenshaw(p, x) - ref) <= tol_ * std::max(std::abs(ref), 1e-6 * scale);
        }
        if (ok) {
            pieces_.push_back(p);
            return;
        }
    } catch (const NumericError&) {
    }
    if (depth < 16) {
        const double mid = 0.5 * (lo + hi);
        build(lo, mid, depth + 1);
        build(mid, hi, depth + 1);
    } else {
        p.direct = true;
        pieces_.push_back(p);
    }
}

Complex KummerRayTable::operator()(double rho) const {
    if (!(rho >= 0.0 && rho <= rho_max_)) return f_(Complex(0.0, -rho));
    const auto it = std::lower_bound(upper_.begin(), upper_.end(), rho);
    const Piece& p = pieces_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - upper_.begin(), pieces_.size() - 1))];
    return p.direct ? f_(Complex(0.0, -rho)) : clenshaw(p, rho);
}

Complex KummerRayTable::clenshaw(const Piece& p, double rho) {
    const double t = (2.0 * rho - p.lo - p.hi) / (p.hi - p.lo);
    Complex b1 = 0.0, b2 = 0.0;
    for (int k = kNodes - 1; k >= 1; --k) {
        const Complex b0 = p.c[k] + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return p.c[0] + t * b1 - b2;
}

Complex kummer_1f1(Complex a, Complex b, Complex z) { return Kummer1F1(a, b)(z); }

Complex coulomb_norm(double xi) {
    if (!std::isfinite(xi)) throw DomainError("coulomb_norm: non-finite xi");
    if (xi == 0.0) return 1.0;
    return std::exp(-0.5 * kPi * xi + ln_gamma(Complex(1.0, -xi)));
}

} // namespace e2espin
