#pragma once

#include <array>
#include <vector>

#include "e2espin/types.hpp"

namespace e2espin {

// Analytic continuation of log Gamma from the positive real axis
// (imaginary part is not reduced to (-pi, pi]). Throws DomainError at poles.
Complex ln_gamma(Complex z);

// Confluent hypergeometric function 1F1(a; b; z) for fixed (a, b).
//
// Re z < 0 is mapped through Kummer's transformation. On the right half plane:
//   |z| <= kSeriesRadius          Maclaurin series
//   |z| >= kAsymptoticRadius      two-term large-|z| expansion, if it reaches
//                                 double precision before its terms diverge
//   otherwise                     Taylor steps of Kummer's equation along the ray
//                                 from the series disk to z
// Gamma-function prefactors are cached, so reuse one object for many z.
class Kummer1F1 {
public:
    static constexpr double kSeriesRadius = 8.0;
    static constexpr double kAsymptoticRadius = 20.0;
    static constexpr double kMaxStep = 3.0;
    static constexpr int kTermCap = 10000;

    Kummer1F1(Complex a, Complex b);

    Complex operator()(Complex z) const;

    Complex a() const { return right_.a; }
    Complex b() const { return right_.b; }

private:
    struct Branch {
        Complex a;
        Complex b;
        // log Gamma(b) - log Gamma(b - a) and log Gamma(b) - log Gamma(a);
        // flags mark reciprocal-Gamma zeros.
        Complex log_c1;
        Complex log_c2;
        bool c1_zero = false;
        bool c2_zero = false;
        bool terminating = false; // a is a nonpositive integer
    };

    static Branch make_branch(Complex a, Complex b);
    static Complex eval_right(const Branch& br, Complex z);
    static Complex series(const Branch& br, Complex z, Complex* derivative);
    static bool asymptotic(const Branch& br, Complex z, Complex& out);
    static Complex integrate(const Branch& br, Complex z);

    Branch right_;   // (a, b)
    Branch flipped_; // (b - a, b)
};

// 1F1(a; b; -i rho) for real rho in [0, rho_max], as piecewise Chebyshev interpolants.
// Each piece is checked against Kummer1F1 when built and bisected until it meets rel_tol;
// pieces that never do, and rho outside the range, use direct evaluation.
class KummerRayTable {
public:
    static constexpr int kNodes = 17;

    KummerRayTable(Complex a, Complex b, double rho_max, double rel_tol = 1e-12);

    Complex operator()(double rho) const;

    double rho_max() const { return rho_max_; }
    std::size_t pieces() const { return pieces_.size(); }
    std::size_t direct_pieces() const;

private:
    struct Piece {
        double lo;
        double hi;
        bool direct;
        std::array<Complex, kNodes> c;
    };

    void build(double lo, double hi, int depth);
    static Complex clenshaw(const Piece& p, double rho);

    Kummer1F1 f_;
    double rho_max_;
    double tol_;
    std::vector<Piece> pieces_;
    std::vector<double> upper_;
};

Complex kummer_1f1(Complex a, Complex b, Complex z);

// exp(-pi xi / 2) Gamma(1 - i xi)
Complex coulomb_norm(double xi);

} // namespace e2espin
