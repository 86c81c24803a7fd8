#pragma once
/// Floating-point side of the library: numeric evaluation of the odd solution
/// vanishing at the origin of
///
///     u'' = (u')^2/u - u'/tau + (1/tau)(-8 eps u^2 + 2ab) + b^2/u,
///
/// for numeric parameters (a, b), eps = +1 (default) or -1.
///
/// Pieces:
///   * SolutionEvaluator<C>   -- Taylor seeding from the exact coefficient
///     table plus adaptive Runge-Kutta continuation along rays from the
///     origin.  u(tau) = -(b/2a) tau (1 + sum_n u_{2n}(a) (b tau^2/a)^n); the
///     series is trusted for |b tau^2 / a| <= 1/4 and the seed radius backs
///     off further until the tail bound meets the target tolerance.
///   * monodromy_params<C>    -- the connection data of the solution:
///     s00 = 2i cosh(pi a),  g11 g22 (1 - e^{2 pi a}) = 1,
///     omega = g11 g12 = i e^{pi a} g11 g22, the exponent nu+1 =
///     (i/2pi) ln(g11 g22) on the branch minimizing |Re(nu+1)|, and the
///     constant phase shift z of the large-tau connection formula.
///   * AsymptoticEvaluator<C> -- the leading large-tau term u_as(tau) in four
///     algebraically equivalent presentations: `general` (complex form built
///     from nu+1, z, omega), `imaginary_a` (real/imaginary split for
///     a = i alpha, 0 < alpha < 1, alpha != 1/2), `suleimanov` (a = +-i/2),
///     and `negative_a` (real a < 0).  Validity gates: strict
///     |Re(nu+1)| < 1/6, weak |Re(nu+1)| < 1/2, both under |Im a| < 1, b > 0.
///     Note: the `general` form's oscillatory term carries the opposite sign
///     from the three closed forms (a fixed phase difference of pi); the
///     closed forms are the ones that track the integrated solution.  The
///     comparison report exposes this through the fitted phase offset
///     (approximately 0 for the closed forms, approximately pi for
///     `general`) instead of asserting either convention.
///   * compare_asymptotics    -- per-sample (tau, u, u_as, |u - u_as|) table
///     with sup errors over the sub-windows [T1, 2 T1] and [2 T1, 4 T1],
///     least-squares amplitude/phase fits and an extrema-based frequency fit
///     of the oscillatory residual.  CSV export.
///   * positivity_scan        -- grid check of Re u > 0 on (0, tau_max]
///     (and realness when a and b are real).
///
/// Scalar abstraction: everything is templated on the complex type C
/// (std::complex<double> by default; a 50-digit type is wired up in
/// numerics_mp.hpp).  Exact rational coefficients are converted through
/// (mantissa, base-2 exponent) pairs so that numerators and denominators far
/// outside the double exponent range still evaluate correctly.
///
/// Concurrency: evaluators are immutable after construction and evaluation
/// methods are const and pure, so independent evaluations may run in
/// parallel; the scan helpers themselves are single-threaded.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coeff_table.hpp"
#include "rational.hpp"
#include "ratfunc.hpp"

namespace dp3 {

// --------------------------------------------------------------------------
// Scalar abstraction
// --------------------------------------------------------------------------

/// Per-scalar hooks: conversion from big integers and the Spouge term count.
/// Specialized for double here and for the 50-digit type in numerics_mp.hpp.
template <class R> struct RealOps;

template <> struct RealOps<double> {
    /// z = mantissa * 2^exponent with mantissa in [0.5, 1) up to sign.
    static std::pair<double, long> from_int(const Int& z) {
        if (z == 0) return {0.0, 0};
        long e = 0;
        double m = mpz_get_d_2exp(&e, z.get_mpz_t());
        return {m, e};
    }
    static int spouge_terms() { return 15; }
};

/// Real scalar underlying a complex type (std::complex<T> -> T); the
/// multiprecision complex type specializes this in numerics_mp.hpp.
template <class C> struct complex_real {
    using type = typename C::value_type;
};
template <class C> using real_of = typename complex_real<C>::type;

template <class R> R pi_value() {
    using std::atan;
    return 4 * atan(R(1));
}

namespace detail {

template <class C> C scale_pow2(const C& z, long e) {
    using std::ldexp;
    using R = real_of<C>;
    return C(ldexp(z.real(), static_cast<int>(e)), ldexp(z.imag(), static_cast<int>(e)));
}

/// value = mant * 2^exp2 with the mantissa renormalized into a safe band so
/// that intermediate magnitudes never reach the scalar's exponent limits.
template <class C> struct Scaled {
    C mant{};
    long exp2 = 0;

    void renormalize() {
        using std::abs;
        using std::frexp;
        using R = real_of<C>;
        R mag = abs(mant.real()) + abs(mant.imag());
        if (mag == R(0)) { exp2 = 0; return; }
        int k = 0;
        (void)frexp(mag, &k);
        if (k > 256 || k < -256) {
            mant = scale_pow2(mant, -static_cast<long>(k));
            exp2 += k;
        }
    }

    /// Collapse into a plain scalar (safe when the true value is in range).
    C collapse() const { return scale_pow2(mant, exp2); }
};

template <class R> std::pair<R, long> scaled_from_rat(const Rat& q) {
    auto [mn, en] = RealOps<R>::from_int(Int(q.get_num()));
    auto [md, ed] = RealOps<R>::from_int(Int(q.get_den()));
    return {mn / md, en - ed};
}

/// Horner evaluation of a polynomial with big rational coefficients at a
/// complex point, in scaled form.
template <class C> Scaled<C> eval_poly_scaled(const Poly& p, const C& x) {
    using R = real_of<C>;
    Scaled<C> acc;
    if (p.is_zero()) return acc;
    const auto& cs = p.coefficients();
    for (std::size_t i = cs.size(); i-- > 0;) {
        auto [cm, ce] = scaled_from_rat<R>(cs[i]);
        // acc = acc * x + c: align the coefficient to the accumulator scale.
        C cx = scale_pow2(C(cm, R(0)), ce - acc.exp2);
        acc.mant = acc.mant * x + cx;
        acc.renormalize();
    }
    return acc;
}

/// prod_k (x + k^2)^{e_k} in scaled form.
template <class C> Scaled<C> eval_factored_den_scaled(const FactoredDen& d, const C& x) {
    using R = real_of<C>;
    Scaled<C> acc;
    acc.mant = C(R(1), R(0));
    for (const auto& [k, e] : d.exponents()) {
        C f = x + C(R(k * k), R(0));
        for (int i = 0; i < e; ++i) {
            acc.mant = acc.mant * f;
            acc.renormalize();
        }
    }
    return acc;
}

}  // namespace detail

/// Numeric value of a rational function at a complex point.  Numerator and
/// denominator are evaluated in scaled arithmetic (their individual values
/// may be far outside the scalar's range even when the ratio is modest).
template <class C> C eval_ratfunc_at(const RatFunc& f, const C& x) {
    using R = real_of<C>;
    if (f.is_zero()) return C(R(0), R(0));
    auto num = detail::eval_poly_scaled<C>(f.num(), x);
    auto den = detail::eval_factored_den_scaled<C>(f.den(), x);
    detail::Scaled<C> r;
    r.mant = num.mant / den.mant;
    r.exp2 = num.exp2 - den.exp2;
    return r.collapse();
}

// --------------------------------------------------------------------------
// Complex gamma (Spouge's approximation)
// --------------------------------------------------------------------------

/// Gamma(z) on the principal branch via Spouge's series; the term count
/// defaults to the scalar's precision (15 for double: relative error below
/// ~1e-13 away from the poles).  Reflection handles Re z < 1/2.
template <class C> C spouge_gamma(const C& z, int terms = 0) {
    using R = real_of<C>;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sqrt;
    if (terms <= 0) terms = RealOps<R>::spouge_terms();
    const R pi = pi_value<R>();
    if (z.real() < R(1) / 2) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        using std::sin;
        C s = sin(C(pi, R(0)) * z);
        return C(pi, R(0)) / (s * spouge_gamma(C(R(1), R(0)) - z, terms));
    }
    const R a = R(terms);
    const C w = z - C(R(1), R(0));
    C sum = C(sqrt(2 * pi), R(0));
    R fact = R(1);  // (k-1)!
    for (int k = 1; k < terms; ++k) {
        if (k > 1) fact *= R(k - 1);
        R ak = a - R(k);
        R ck = exp((R(k) - R(1) / 2) * log(ak) + ak) / fact;
        if (k % 2 == 0) ck = -ck;
        sum += C(ck, R(0)) / (w + C(R(k), R(0)));
    }
    C t = w + C(a, R(0));
    return exp((w + C(R(1) / 2, R(0))) * log(t) - t) * sum;
}

// --------------------------------------------------------------------------
// Monodromy parameters
// --------------------------------------------------------------------------

/// Connection data of the solution.  omega and g11g12 coincide by definition
/// (both are stored to keep the two common spellings available).
template <class C> struct MonodromyParams {
    C a{};
    C s00{};         ///< 2i cosh(pi a)
    C g11g22{};      ///< 1 / (1 - e^{2 pi a})
    C g11g12{};      ///< i e^{pi a} / (1 - e^{2 pi a})
    C omega{};       ///< == g11g12
    C nu_plus_1{};   ///< (i/2pi) ln(g11g22), branch minimizing |Re|
    C z_shift{};     ///< constant phase of the connection formula
    long branch_k = 0;  ///< chosen 2 pi i k offset of the logarithm
};

/// True when a lies exactly on the imaginary integer lattice i*Z (where the
/// solution does not exist).
template <class C> bool is_imaginary_integer(const C& a) {
    using R = real_of<C>;
    using std::round;
    return a.real() == R(0) && a.imag() == round(a.imag());
}

template <class C> MonodromyParams<C> monodromy_params(const C& a) {
    using R = real_of<C>;
    using std::exp;
    using std::log;
    using std::sqrt;
    using std::abs;
    if (is_imaginary_integer(a)) {
        throw std::domain_error(
            "monodromy_params: solution does not exist for a in i*Z");
    }
    const R pi = pi_value<R>();
    MonodromyParams<C> p;
    p.a = a;
    const C i1 = C(R(0), R(1));
    C epa = exp(C(pi, R(0)) * a);
    p.s00 = i1 * (epa + C(R(1), R(0)) / epa);  // 2i cosh(pi a)
    C one_minus = C(R(1), R(0)) - epa * epa;
    p.g11g22 = C(R(1), R(0)) / one_minus;
    p.g11g12 = i1 * epa / one_minus;
    p.omega = p.g11g12;

    // nu+1 = (i/2pi) (Log(g11g22) + 2 pi i k); the 2 pi i k offset shifts
    // Re(nu+1) by -k, so pick the integer k minimizing |Re|, ties toward 0.
    C lg = log(p.g11g22);
    R base = -lg.imag() / (2 * pi);
    long kbest = 0;
    R best = abs(base);
    for (long k = -3; k <= 3; ++k) {
        R v = abs(base - R(k));
        if (v < best || (v == best && std::abs(k) < std::abs(kbest))) {
            best = v;
            kbest = k;
        }
    }
    p.branch_k = kbest;
    C lnb = lg + C(R(0), 2 * pi * R(kbest));
    p.nu_plus_1 = i1 * lnb / C(2 * pi, R(0));

    // z = ln(2 pi)/2 - i pi/2 - (3 i pi/2)(nu+1) + i a ln(2+sqrt 3)
    //     + (nu+1) ln 12 - ln(omega sqrt(nu+1) Gamma(nu+1)).
    // The formula is invariant under the branch of sqrt(nu+1): flipping the
    // root negates the prefactor of the oscillatory term and shifts the
    // argument of cosh by i pi, which cancel.
    C snu = sqrt(p.nu_plus_1);
    C g = spouge_gamma(p.nu_plus_1);
    p.z_shift = C(log(2 * pi) / 2, R(0)) - i1 * C(pi / 2, R(0)) -
                i1 * C(3 * pi / 2, R(0)) * p.nu_plus_1 +
                i1 * a * C(log(R(2) + sqrt(R(3))), R(0)) +
                p.nu_plus_1 * C(log(R(12)), R(0)) - log(p.omega * snu * g);
    return p;
}

// --------------------------------------------------------------------------
// Pole reporting
// --------------------------------------------------------------------------

/// Thrown when continuation runs into a double pole on the path.  The
/// estimate comes from the local Laurent behavior
/// u ~ -tau_p / (4 (tau - tau_p)^2).
class PoleDetected : public std::runtime_error {
  public:
    PoleDetected(const std::string& msg, std::complex<double> estimate)
        : std::runtime_error(msg), estimate_(estimate) {}
    std::complex<double> estimate() const { return estimate_; }

  private:
    std::complex<double> estimate_;
};

namespace detail {

/// Dormand-Prince 5(4) pair with the quartic dense-output interpolant.
/// State y = (u, du/dtau) along the ray tau = dir * s, s real increasing.
template <class C> class Dopri5 {
  public:
    using R = real_of<C>;
    using State = std::array<C, 2>;

    /// One accepted step and its dense-output coefficients.
    struct Step {
        R s0{};
        R h{};
        std::array<std::array<C, 5>, 2> rcont{};  // per component

        /// Interpolated state at s = s0 + th*h, th in [0,1].
        State value(R th) const {
            State y;
            for (int c = 0; c < 2; ++c) {
                const auto& r = rcont[c];
                R th1 = R(1) - th;
                y[c] = r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
            }
            return y;
        }
        /// d/ds of the interpolant at s = s0 + th*h.
        State derivative(R th) const {
            State d;
            for (int c = 0; c < 2; ++c) {
                const auto& r = rcont[c];
                // P = r0 + th r1 + th(1-th) r2 + th^2(1-th) r3 + th^2(1-th)^2 r4
                C dp = r[1] + (1 - 2 * th) * r[2] + (2 * th - 3 * th * th) * r[3] +
                       (2 * th - 6 * th * th + 4 * th * th * th) * r[4];
                d[c] = dp / h;
            }
            return d;
        }
    };

    struct Options {
        R rel_tol;
        R abs_tol;
        R pole_threshold;  ///< |u| above this reports a pole
        bool keep_steps = false;
        Options() : rel_tol(R(1) / 10000000000ULL), abs_tol(rel_tol / 100),
                    pole_threshold(R(10000000)) {}
    };

    Dopri5(C a, C b, C dir, R eps, Options opt)
        : a_(a), b_(b), dir_(dir), eps_(eps), opt_(opt) {}

    /// RHS along the ray: d/ds (u, u') = dir * (u', u'').
    State rhs(R s, const State& y) const {
        C tau = dir_ * C(s, R(0));
        const C& u = y[0];
        const C& up = y[1];
        C upp = up * up / u - up / tau +
                (C(R(-8) * eps_, R(0)) * u * u + C(R(2), R(0)) * a_ * b_) / tau +
                b_ * b_ / u;
        return {dir_ * up, dir_ * upp};
    }

    /// Integrate from (s0, y0) to s1 > s0.  Sample points (ascending, within
    /// [s0, s1]) are delivered through `sink` using dense output.
    template <class Sink>
    State integrate(R s0, State y0, R s1, const std::vector<R>& samples, Sink&& sink) {
        using std::abs;
        using std::pow;
        using std::isnan;
        R s = s0;
        State y = y0;
        State k1 = rhs(s, y);
        std::size_t next_sample = 0;
        while (next_sample < samples.size() && samples[next_sample] < s0) ++next_sample;
        R h = initial_step(s0, s1, y, k1);
        const R hmin = (s1 - s0) * std::numeric_limits<double>::epsilon() * 16;
        int rejected_in_a_row = 0;
        while (s < s1) {
            if (h > s1 - s) h = s1 - s;
            auto [ynew, k7, err] = attempt(s, y, k1, h);
            if (isnan(err)) err = R(2);  // treat NaN as a rejected step
            if (err <= R(1)) {
                check_pole(s + h, ynew[0]);
                Step st = make_step(s, h, y, ynew, k1, k7);
                while (next_sample < samples.size() &&
                       samples[next_sample] <= s + h + hmin) {
                    R th = (samples[next_sample] - s) / h;
                    if (th < R(0)) th = R(0);
                    if (th > R(1)) th = R(1);
                    sink(samples[next_sample], st.value(th));
                    ++next_sample;
                }
                if (opt_.keep_steps) steps_.push_back(st);
                s += h;
                y = ynew;
                k1 = k7;  // first-same-as-last
                R fac = R(9) / 10 * pow(err > R(0) ? err : R(1) / 10000, R(-1) / 5);
                if (fac > R(5)) fac = R(5);
                if (rejected_in_a_row > 0 && fac > R(1)) fac = R(1);
                h *= fac;
                rejected_in_a_row = 0;
            } else {
                ++rejected_in_a_row;
                R fac = R(9) / 10 * pow(err, R(-1) / 5);
                if (fac < R(1) / 10) fac = R(1) / 10;
                h *= fac;
                check_pole(s, y[0]);
                if (h < hmin) {
                    throw std::runtime_error(
                        "continuation step size underflow near s = " +
                        std::to_string(static_cast<double>(s)));
                }
            }
        }
        return y;
    }

    const std::vector<Step>& steps() const { return steps_; }

  private:
    C a_, b_, dir_;
    R eps_;
    Options opt_;
    std::vector<Step> steps_;

    void check_pole(R s, const C& u) const {
        using std::abs;
        using std::sqrt;
        if (abs(u) < opt_.pole_threshold) return;
        // Laurent: u ~ -tau_p/(4 (tau-tau_p)^2)  =>  |tau - tau_p| ~
        // sqrt(|tau| / (4 |u|)); the pole lies ahead of the travel direction.
        R ds = sqrt(abs(s) / (4 * abs(u)));
        double sp = static_cast<double>(s + ds);
        std::complex<double> dir(static_cast<double>(dir_.real()),
                                 static_cast<double>(dir_.imag()));
        std::complex<double> est = dir * sp;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "pole on the continuation path near tau = %.6g%+.6gi "
                      "(|u| exceeded %.3g)",
                      est.real(), est.imag(),
                      static_cast<double>(opt_.pole_threshold));
        throw PoleDetected(buf, est);
    }

    R initial_step(R s0, R s1, const State& y, const State& f) const {
        using std::abs;
        R span = s1 - s0;
        R scale = abs(y[0]) + abs(y[1]) + R(1);
        R dscale = abs(f[0]) + abs(f[1]) + R(1);
        R h = scale / dscale / 100;
        if (h > span / 10) h = span / 10;
        if (h <= R(0)) h = span / 100;
        return h;
    }

    /// One trial step; returns (y_new, k7, scaled error norm).
    std::tuple<State, State, R> attempt(R s, const State& y, const State& k1, R h) const {
        using std::abs;
        using std::sqrt;
        static const double A[7][6] = {
            {},
            {1.0 / 5},
            {3.0 / 40, 9.0 / 40},
            {44.0 / 45, -56.0 / 15, 32.0 / 9},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
            {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
        static const double CNODE[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
        // b - bhat (5th minus embedded 4th order weights)
        static const double EDIFF[7] = {
            35.0 / 384 - 5179.0 / 57600, 0.0, 500.0 / 1113 - 7571.0 / 16695,
            125.0 / 192 - 393.0 / 640, -2187.0 / 6784 + 92097.0 / 339200,
            11.0 / 84 - 187.0 / 2100, -1.0 / 40};
        std::array<State, 7> k;
        k[0] = k1;
        for (int stage = 1; stage < 7; ++stage) {
            State ys;
            for (int c = 0; c < 2; ++c) {
                C acc = y[c];
                for (int j = 0; j < stage; ++j)
                    if (A[stage][j] != 0.0) acc += h * R(A[stage][j]) * k[j][c];
                ys[c] = acc;
            }
            k[stage] = rhs(s + R(CNODE[stage]) * h, ys);
        }
        // stage 7 evaluated at y_new (A[6] row are the 5th-order weights)
        State ynew;
        for (int c = 0; c < 2; ++c) {
            C acc = y[c];
            for (int j = 0; j < 6; ++j)
                if (A[6][j] != 0.0) acc += h * R(A[6][j]) * k[j][c];
            ynew[c] = acc;
        }
        State k7 = rhs(s + h, ynew);
        k[6] = k7;
        R err2 = R(0);
        for (int c = 0; c < 2; ++c) {
            C e{};
            for (int j = 0; j < 7; ++j) e += R(EDIFF[j]) * k[j][c];
            e = h * e;
            R sc = opt_.abs_tol +
                   opt_.rel_tol * std::max(abs(y[c]), abs(ynew[c]));
            R q = abs(e) / sc;
            err2 += q * q;
        }
        return {ynew, k7, sqrt(err2 / 2)};
    }

    Step make_step(R s, R h, const State& y, const State& ynew, const State& k1,
                   const State& k7) const {
        // Dense-output coefficients of the classic DOPRI5 interpolant.  The
        // quartic correction uses the d-weights applied to the seven stages;
        // re-deriving the stages here keeps attempt() allocation-free.
        static const double D[7] = {
            -12715105075.0 / 11282082432.0, 0.0, 87487479700.0 / 32700410799.0,
            -10690763975.0 / 1880347072.0, 701980252875.0 / 199316789632.0,
            -1453857185.0 / 822651844.0, 69997945.0 / 29380423.0};
        static const double A[7][6] = {
            {},
            {1.0 / 5},
            {3.0 / 40, 9.0 / 40},
            {44.0 / 45, -56.0 / 15, 32.0 / 9},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
            {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
        static const double CNODE[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
        std::array<State, 7> k;
        k[0] = k1;
        for (int stage = 1; stage < 6; ++stage) {
            State ys;
            for (int c = 0; c < 2; ++c) {
                C acc = y[c];
                for (int j = 0; j < stage; ++j)
                    if (A[stage][j] != 0.0) acc += h * R(A[stage][j]) * k[j][c];
                ys[c] = acc;
            }
            k[stage] = rhs(s + R(CNODE[stage]) * h, ys);
        }
        k[6] = k7;
        Step st;
        st.s0 = s;
        st.h = h;
        for (int c = 0; c < 2; ++c) {
            C dy = ynew[c] - y[c];
            C bspl = h * k1[c] - dy;
            C dvals{};
            for (int j = 0; j < 7; ++j) dvals += R(D[j]) * k[j][c];
            st.rcont[c][0] = y[c];
            st.rcont[c][1] = dy;
            st.rcont[c][2] = bspl;
            st.rcont[c][3] = dy - h * k7[c] - bspl;
            st.rcont[c][4] = h * dvals;
        }
        return st;
    }
};

}  // namespace detail

// --------------------------------------------------------------------------
// SolutionEvaluator
// --------------------------------------------------------------------------

/// Numeric evaluator of the odd solution vanishing at the origin.  Immutable
/// after construction; eval methods are const and thread-compatible.
template <class C> class SolutionEvaluator {
  public:
    using R = real_of<C>;

    /// `table` supplies exact u_{2n}; horizon = min(requested, table depth).
    /// eps = -1 selects the mirror equation (coefficients pick up (-1)^n).
    SolutionEvaluator(C a, C b, std::shared_ptr<const CoeffTable> table,
                      R rel_tol = default_tol(), int eps = +1)
        : a_(a), b_(b), eps_(eps), tol_(rel_tol), table_(std::move(table)) {
        if (!table_) throw std::invalid_argument("SolutionEvaluator: null table");
        init(static_cast<int>(table_->n_max()));
    }

    SolutionEvaluator(C a, C b, int horizon = 40, R rel_tol = default_tol(),
                      int eps = +1)
        : a_(a), b_(b), eps_(eps), tol_(rel_tol),
          table_(std::make_shared<const CoeffTable>(horizon)) {
        init(horizon);
    }

    static R default_tol() { return R(1) / 10000000000ULL; }  // 1e-10

    const C& a() const { return a_; }
    const C& b() const { return b_; }
    int eps() const { return eps_; }
    R tolerance() const { return tol_; }
    int horizon() const { return static_cast<int>(u2n_.size()); }
    const std::vector<C>& taylor_values() const { return u2n_; }

    /// Largest |tau| accepted by the series: |b tau^2 / a| <= 1/4.
    R series_margin() const { return margin_; }
    /// Seed radius: largest radius (<= margin) where the truncated series
    /// meets the tail bound 0.1 * tol; found once by geometric back-off.
    R series_seed() const { return seed_; }

    /// Truncated Taylor sum with a geometric tail bound.  Throws
    /// std::domain_error outside the margin and std::runtime_error when the
    /// horizon cannot meet the bound (use ODE continuation instead).
    C eval_series(const C& tau) const {
        using std::abs;
        if (abs(tau) > margin_ * (1 + R(1) / 1000000)) {
            throw std::domain_error(
                "eval_series: |b/a| |tau|^2 > 1/4; use ODE continuation");
        }
        C r = b_ * tau * tau / a_;
        C sum = C(R(1), R(0));
        C rn = C(R(1), R(0));
        R prev = R(0);
        for (std::size_t n = 1; n <= u2n_.size(); ++n) {
            rn = rn * r;
            C term = u2n_[n - 1] * rn;
            sum += term;
            R tn = abs(term);
            if (n >= 3) {
                R q = prev > R(0) ? tn / prev : R(0);
                if (q > R(95) / 100) q = R(95) / 100;
                if (q < R(1) / 4) q = R(1) / 4;  // conservative floor
                R tail = tn * q / (1 - q);
                if (tail < tol_ / 10 * abs(sum)) {
                    return -b_ / (2 * a_) * tau * sum;
                }
            }
            prev = tn;
        }
        if (abs(tau) == R(0)) return C(R(0), R(0));
        throw std::runtime_error(
            "eval_series: tail bound not met within the horizon; "
            "use ODE continuation from a smaller seed");
    }

    /// Continuation along the straight ray through tau_target, seeded by the
    /// series at radius `seed` (defaults to series_seed()).  Reports poles on
    /// the path via PoleDetected.
    C eval_ode(const C& tau_target, R seed = R(0)) const {
        using std::abs;
        R radius = abs(tau_target);
        if (seed <= R(0)) seed = seed_;
        if (radius <= seed) return eval_series(tau_target);
        C dir = tau_target / C(radius, R(0));
        auto y = integrate_ray(dir, seed, radius, {}, [](R, const State&) {});
        return y[0];
    }

    /// Series inside the seed radius, continuation outside.
    C eval(const C& tau) const {
        using std::abs;
        if (abs(tau) <= seed_) return eval_series(tau);
        return eval_ode(tau);
    }

    /// u at each radius (ascending) along the ray `dir` (|dir| = 1), in one
    /// integration pass.
    std::vector<C> trace(const std::vector<R>& radii, C dir = C(1)) const {
        using std::abs;
        std::vector<C> out(radii.size());
        for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
            if (!(radii[i] < radii[i + 1]))
                throw std::invalid_argument("trace: radii must be ascending");
        }
        dir = dir / C(abs(dir), R(0));
        std::size_t first_ode = 0;
        while (first_ode < radii.size() && radii[first_ode] <= seed_) {
            out[first_ode] = eval_series(dir * C(radii[first_ode], R(0)));
            ++first_ode;
        }
        if (first_ode == radii.size()) return out;
        std::vector<R> samples(radii.begin() + first_ode, radii.end());
        std::size_t idx = first_ode;
        integrate_ray(dir, seed_, radii.back(), samples,
                      [&](R, const State& y) { out[idx++] = y[0]; });
        return out;
    }

    /// Low-level access for residual checks: integrate along `dir` keeping
    /// every accepted step's dense-output record.
    std::vector<typename detail::Dopri5<C>::Step> integrate_with_steps(
        C dir, R s_from, R s_to) const {
        using std::abs;
        dir = dir / C(abs(dir), R(0));
        typename detail::Dopri5<C>::Options opt;
        opt.rel_tol = tol_;
        opt.abs_tol = tol_ / 100;
        opt.keep_steps = true;
        detail::Dopri5<C> solver(a_, b_, dir, R(eps_), opt);
        auto y0 = seed_state(dir, s_from);
        solver.integrate(s_from, y0, s_to, {}, [](R, const State&) {});
        return solver.steps();
    }

    /// RHS of the first-order system at a point (for residual checks).
    std::array<C, 2> ray_rhs(C dir, R s, const std::array<C, 2>& y) const {
        using std::abs;
        dir = dir / C(abs(dir), R(0));
        typename detail::Dopri5<C>::Options opt;
        detail::Dopri5<C> solver(a_, b_, dir, R(eps_), opt);
        return solver.rhs(s, y);
    }

  private:
    using State = typename detail::Dopri5<C>::State;

    C a_, b_;
    int eps_;
    R tol_;
    std::shared_ptr<const CoeffTable> table_;
    std::vector<C> u2n_;
    R margin_{};
    R seed_{};

    void init(int horizon) {
        using std::abs;
        using std::sqrt;
        if (abs(b_) == R(0))
            throw std::invalid_argument("SolutionEvaluator: b must be nonzero");
        if (is_imaginary_integer(a_))
            throw std::domain_error(
                "SolutionEvaluator: solution does not exist for a in i*Z");
        if (eps_ != 1 && eps_ != -1)
            throw std::invalid_argument("SolutionEvaluator: eps must be +-1");
        if (horizon > static_cast<int>(table_->n_max()))
            horizon = static_cast<int>(table_->n_max());
        if (horizon < 4)
            throw std::invalid_argument("SolutionEvaluator: horizon too small");
        C s = a_ * a_;
        u2n_.resize(horizon);
        for (int n = 1; n <= horizon; ++n) {
            C v = eval_ratfunc_at<C>(table_->u(n), s);
            if (eps_ == -1 && (n % 2)) v = -v;
            u2n_[n - 1] = v;
        }
        margin_ = sqrt(abs(a_ / b_) / 4);
        // Back off the seed until the series meets its tail bound there.
        seed_ = margin_;
        for (int tries = 0; tries < 60; ++tries) {
            try {
                (void)eval_series(C(seed_, R(0)));
                return;
            } catch (const std::runtime_error&) {
                seed_ = seed_ * R(85) / 100;
            }
        }
        throw std::runtime_error(
            "SolutionEvaluator: no usable series seed radius (increase the "
            "coefficient horizon or loosen the tolerance)");
    }

    State seed_state(const C& dir, R s0) const {
        // (u, u') from the series at tau0 = dir*s0:
        // u  = -(b/2a) tau (1 + sum c_n (b tau^2/a)^n)
        // u' = -(b/2a) (1 + sum (2n+1) c_n (b tau^2/a)^n)
        C tau = dir * C(s0, R(0));
        C r = b_ * tau * tau / a_;
        C su = C(R(1), R(0));
        C sup = C(R(1), R(0));
        C rn = C(R(1), R(0));
        using std::abs;
        R prev = R(0);
        for (std::size_t n = 1; n <= u2n_.size(); ++n) {
            rn = rn * r;
            C term = u2n_[n - 1] * rn;
            su += term;
            sup += R(2 * n + 1) * term;
            R tn = abs(term);
            if (n >= 3 && prev > R(0)) {
                R q = tn / prev;
                if (q > R(95) / 100) q = R(95) / 100;
                R tail = tn * q / (1 - q) * R(2 * n + 3);
                if (tail < tol_ / 10) break;
            }
            prev = tn;
        }
        C pref = -b_ / (2 * a_);
        return {pref * tau * su, pref * sup};
    }

    template <class Sink>
    State integrate_ray(const C& dir, R s_from, R s_to,
                        const std::vector<R>& samples, Sink&& sink) const {
        typename detail::Dopri5<C>::Options opt;
        opt.rel_tol = tol_;
        opt.abs_tol = tol_ / 100;
        detail::Dopri5<C> solver(a_, b_, dir, R(eps_), opt);
        auto y0 = seed_state(dir, s_from);
        return solver.integrate(s_from, y0, s_to, samples, sink);
    }
};

// --------------------------------------------------------------------------
// Asymptotic evaluator
// --------------------------------------------------------------------------

enum class AsymptoticForm { general, imaginary_a, suleimanov, negative_a };

/// Leading large-tau term u_as(tau) for b > 0; validity is gated by
/// |Re(nu+1)| < 1/6 (strict) or < 1/2 (weak), both under |Im a| < 1.
template <class C> class AsymptoticEvaluator {
  public:
    using R = real_of<C>;

    AsymptoticEvaluator(MonodromyParams<C> params, R b)
        : p_(std::move(params)), b_(b) {
        if (!(b_ > R(0)))
            throw std::invalid_argument("AsymptoticEvaluator: b must be > 0");
    }

    const MonodromyParams<C>& params() const { return p_; }
    R b() const { return b_; }

    /// |Re(nu+1)| -- the quantity the gates bound.
    R gate_value() const {
        using std::abs;
        return abs(p_.nu_plus_1.real());
    }
    bool im_a_ok() const {
        using std::abs;
        return abs(p_.a.imag()) < R(1);
    }
    bool gate_strict() const { return im_a_ok() && gate_value() < R(1) / 6; }
    bool gate_weak() const { return im_a_ok() && gate_value() < R(1) / 2; }

    /// theta(tau) = 3^{3/2} b^{1/3} tau^{2/3}.
    R theta(R tau) const {
        using std::cbrt;
        using std::sqrt;
        R ct = cbrt(tau);
        return sqrt(R(27)) * cbrt(b_) * ct * ct;
    }

    /// Non-oscillatory part b^{2/3} tau^{1/3} / 2 (= sqrt(b) 3^{-1/4}
    /// sqrt(theta/12)).
    R secular(R tau) const {
        using std::cbrt;
        R cb = cbrt(b_);
        return cb * cb * cbrt(tau) / 2;
    }

    C u_as(R tau, AsymptoticForm form) const {
        require_gates();
        if (!(tau > R(0)))
            throw std::invalid_argument("u_as: tau must be positive");
        switch (form) {
            case AsymptoticForm::general: return u_as_general(tau);
            case AsymptoticForm::imaginary_a: return u_as_imaginary(tau);
            case AsymptoticForm::suleimanov: return u_as_suleimanov(tau);
            case AsymptoticForm::negative_a: return C(u_as_negative(tau), R(0));
        }
        throw std::logic_error("u_as: unknown form");
    }

    /// Oscillation amplitude scale of the chosen form (for the negative_a
    /// and suleimanov forms this is the exact coefficient of the cosine; for
    /// suleimanov it is the amplitude of Im u_as).
    R amplitude(AsymptoticForm form) const {
        using std::abs;
        using std::log;
        using std::sqrt;
        switch (form) {
            case AsymptoticForm::negative_a: {
                R L = negative_a_log();
                return sqrt(b_) / root3_4() * sqrt(-L / (2 * pi_value<R>()));
            }
            case AsymptoticForm::suleimanov:
                return sqrt(b_ * sqrt(R(3)) * log(R(2)) / (4 * pi_value<R>()));
            case AsymptoticForm::imaginary_a:
                return sqrt(b_) / root3_4() * sqrt(imag_alpha_nu1());
            case AsymptoticForm::general:
                return sqrt(b_) / root3_4() * abs(sqrt(p_.nu_plus_1));
        }
        throw std::logic_error("amplitude: unknown form");
    }

    /// Effective phase Theta(tau): the form's oscillatory component equals
    /// amplitude * cos(Theta) -- for negative_a the full oscillation, for
    /// suleimanov the imaginary part, for general (real a only) its own
    /// convention, which sits exactly pi away from the closed forms.
    R phase(R tau, AsymptoticForm form) const {
        using std::log;
        const R pi = pi_value<R>();
        R th = theta(tau);
        switch (form) {
            case AsymptoticForm::negative_a: {
                R L = negative_a_log();
                return th - L / (2 * pi) * log(th) + negative_a_phi0() + pi;
            }
            case AsymptoticForm::suleimanov: {
                R l2 = log(R(2));
                return th - l2 / (2 * pi) * log(th) + suleimanov_phi0() + pi;
            }
            case AsymptoticForm::general: {
                if (p_.a.imag() != R(0))
                    throw std::domain_error(
                        "phase: general-form phase tracking requires real a");
                R gamma = p_.nu_plus_1.imag();
                return th + gamma * log(th) + p_.z_shift.imag() + pi;
            }
            case AsymptoticForm::imaginary_a:
                throw std::domain_error(
                    "phase: the imaginary_a form mixes two phases; fit "
                    "against suleimanov or negative_a instead");
        }
        throw std::logic_error("phase: unknown form");
    }

    /// d(theta)/d(tau^{2/3}) -- the predicted oscillation frequency in the
    /// variable xi = tau^{2/3}.
    R frequency() const {
        using std::cbrt;
        using std::sqrt;
        return sqrt(R(27)) * cbrt(b_);
    }

  private:
    MonodromyParams<C> p_;
    R b_;

    R root3_4() const {
        using std::sqrt;
        return sqrt(sqrt(R(3)));
    }

    void require_gates() const {
        using std::abs;
        if (!im_a_ok()) {
            throw std::domain_error(
                "asymptotics unavailable: |Im a| >= 1");
        }
        if (!gate_weak()) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "asymptotics unavailable: |Re((i/2pi) ln(g11 g22))| "
                          "= %.6g >= 1/2 (weak gate)",
                          static_cast<double>(gate_value()));
            throw std::domain_error(buf);
        }
    }

    C u_as_general(R tau) const {
        using std::cosh;
        using std::log;
        using std::sqrt;
        R th = theta(tau);
        const R pi = pi_value<R>();
        C i1 = C(R(0), R(1));
        C expo = i1 * C(th, R(0)) + p_.nu_plus_1 * C(log(th), R(0)) + p_.z_shift;
        C e34 = std::is_same<R, double>::value
                    ? C(static_cast<R>(-0.7071067811865475244),
                        static_cast<R>(0.7071067811865475244))
                    : C(-sqrt(R(2)) / 2, sqrt(R(2)) / 2);  // e^{3 pi i/4}
        (void)pi;
        C osc = sqrt(p_.nu_plus_1) * e34 * cosh(expo);
        return sqrt(b_) / root3_4() * (C(sqrt(th / 12), R(0)) + osc);
    }

    // ---- a = i alpha, alpha in (0,1), alpha != 1/2 ----
    R imag_alpha() const {
        if (p_.a.real() != R(0))
            throw std::domain_error("imaginary_a form requires a = i alpha");
        R alpha = p_.a.imag();
        if (alpha < R(0)) alpha = -alpha;  // u_{2n} depend on a^2 only
        if (!(alpha > R(0) && alpha < R(1)))
            throw std::domain_error(
                "imaginary_a form requires 0 < |alpha| < 1");
        return alpha;
    }

    R imag_alpha_nu1() const {
        using std::log;
        using std::sin;
        using std::sqrt;
        R alpha = imag_alpha();
        const R pi = pi_value<R>();
        R L = log(2 * sin(pi * alpha));
        R d = alpha - R(1) / 2;
        return sqrt(d * d + L * L / (pi * pi)) / 2;
    }

    C u_as_imaginary(R tau) const {
        using std::abs;
        using std::atan;
        using std::cos;
        using std::cosh;
        using std::log;
        using std::sin;
        using std::sinh;
        using std::sqrt;
        R alpha = imag_alpha();
        const R pi = pi_value<R>();
        if (alpha == R(1) / 2)
            throw std::domain_error(
                "imaginary_a form excludes alpha = 1/2; use suleimanov");
        R L = log(2 * sin(pi * alpha));
        R d = alpha - R(1) / 2;
        R nu1 = sqrt(d * d + L * L / (pi * pi)) / 2;
        R sgn = d > R(0) ? R(1) : R(-1);
        R psi = -atan(L / (pi * d)) / 2 + pi / 4 * (sgn - 1);
        R th = theta(tau);
        C garg = C(d / 2, -L / (2 * pi));
        C g = spouge_gamma(garg);
        R gabs = abs(g);
        R garg_angle = std::is_same<R, double>::value
                           ? std::atan2(g.imag(), g.real())
                           : atan2_generic(g.imag(), g.real());
        R chi = d / 2 * log(th) + log(2 * pi) / 2 + L / 4 -
                alpha * log(R(2) + sqrt(R(3))) + log(R(12)) / 2 * d -
                log(sqrt(nu1) * gabs);
        R phi = th - L / (2 * pi) * log(th) + pi / 2 - psi - 3 * pi / 4 * d -
                log(R(12)) / (2 * pi) * L - garg_angle;
        R s = sqrt(nu1);
        R pref = sqrt(b_) / root3_4() * s;
        R re = secular(tau) + pref * (sin(pi / 4 + psi) * cosh(chi) * cos(phi) +
                                      cos(pi / 4 + psi) * sinh(chi) * sin(phi));
        R im = pref * (sin(pi / 4 + psi) * sinh(chi) * sin(phi) -
                       cos(pi / 4 + psi) * cosh(chi) * cos(phi));
        // alpha < 0 mirrors the imaginary part (u(tau, conj a) = conj u).
        if (p_.a.imag() < R(0)) im = -im;
        return C(re, im);
    }

    // ---- a = +- i/2 ----
    R suleimanov_phi0() const {
        using std::log;
        const R pi = pi_value<R>();
        R l2 = log(R(2));
        C g = spouge_gamma(C(R(0), -l2 / (2 * pi)));
        R ang = std::is_same<R, double>::value ? std::atan2(g.imag(), g.real())
                                               : atan2_generic(g.imag(), g.real());
        return 3 * pi / 4 - l2 * log(R(12)) / (2 * pi) - ang;
    }

    C u_as_suleimanov(R tau) const {
        using std::cos;
        using std::log;
        using std::sin;
        using std::sqrt;
        R half = R(1) / 2;
        if (p_.a.real() != R(0) ||
            !(p_.a.imag() == half || p_.a.imag() == -half))
            throw std::domain_error("suleimanov form requires a = +-i/2");
        const R pi = pi_value<R>();
        R l2 = log(R(2));
        R th = theta(tau);
        R phi = th - l2 / (2 * pi) * log(th) + suleimanov_phi0();
        R im = -sqrt(b_ * sqrt(R(3)) * l2 / (4 * pi)) * cos(phi);
        R re = secular(tau) - sqrt(b_ * l2 / (4 * pi * sqrt(R(3)))) * sin(phi);
        if (p_.a.imag() < R(0)) im = -im;
        return C(re, im);
    }

    // ---- real a < 0 ----
    R negative_a_log() const {
        using std::exp;
        using std::log;
        if (p_.a.imag() != R(0) || !(p_.a.real() < R(0)))
            throw std::domain_error("negative_a form requires real a < 0");
        const R pi = pi_value<R>();
        return log(1 - exp(2 * pi * p_.a.real()));  // negative real
    }

    R negative_a_phi0() const {
        using std::log;
        using std::sqrt;
        const R pi = pi_value<R>();
        R L = negative_a_log();
        C g = spouge_gamma(C(R(0), -L / (2 * pi)));
        R ang = std::is_same<R, double>::value ? std::atan2(g.imag(), g.real())
                                               : atan2_generic(g.imag(), g.real());
        return p_.a.real() * log(R(2) + sqrt(R(3))) - log(R(12)) * L / (2 * pi) -
               pi / 4 - ang;
    }

    R u_as_negative(R tau) const {
        using std::cos;
        using std::log;
        using std::sqrt;
        const R pi = pi_value<R>();
        R L = negative_a_log();
        R th = theta(tau);
        R phi = th - L / (2 * pi) * log(th) + negative_a_phi0();
        return secular(tau) - sqrt(b_) / root3_4() * sqrt(-L / (2 * pi)) * cos(phi);
    }

    static R atan2_generic(R y, R x) {
        using std::atan2;
        return atan2(y, x);
    }
};

// --------------------------------------------------------------------------
// Fitting helpers
// --------------------------------------------------------------------------

/// Least-squares fit y ~ p cos(phase) + q sin(phase); returns the amplitude
/// hypot(p, q) and the phase offset delta wrapped to (-pi, pi], so that
/// y ~ amplitude * cos(phase + delta).
template <class R>
std::pair<R, R> fit_amplitude_phase(const std::vector<R>& ys,
                                    const std::vector<R>& phases) {
    using std::atan2;
    using std::cos;
    using std::sin;
    using std::sqrt;
    if (ys.size() != phases.size() || ys.size() < 8)
        throw std::invalid_argument("fit_amplitude_phase: need >= 8 samples");
    R scc = R(0), sss = R(0), scs = R(0), syc = R(0), sys_ = R(0);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        R c = cos(phases[i]);
        R s = sin(phases[i]);
        scc += c * c;
        sss += s * s;
        scs += c * s;
        syc += ys[i] * c;
        sys_ += ys[i] * s;
    }
    R det = scc * sss - scs * scs;
    if (det == R(0)) throw std::runtime_error("fit_amplitude_phase: singular fit");
    R p = (syc * sss - sys_ * scs) / det;
    R q = (sys_ * scc - syc * scs) / det;
    R amp = sqrt(p * p + q * q);
    // p cos(th) + q sin(th) = amp cos(th - atan2(q, p)) = amp cos(th + delta)
    R delta = -atan2(q, p);
    return {amp, delta};
}

/// Oscillation frequency from interior extrema of y(x): mean extremum
/// spacing dx gives frequency pi/dx.  Extremum positions are refined with a
/// parabolic fit; a slowly varying additive trend does not bias them.
template <class R>
std::pair<R, std::size_t> fit_frequency(const std::vector<R>& xs,
                                        const std::vector<R>& ys) {
    if (xs.size() != ys.size() || xs.size() < 8)
        throw std::invalid_argument("fit_frequency: need >= 8 samples");
    std::vector<R> ext;
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        R dl = ys[i] - ys[i - 1];
        R dr = ys[i + 1] - ys[i];
        if (dl * dr < R(0)) {
            R den = ys[i - 1] - 2 * ys[i] + ys[i + 1];
            R dx = den != R(0) ? (ys[i - 1] - ys[i + 1]) / (2 * den) : R(0);
            ext.push_back(xs[i] + dx * (xs[i + 1] - xs[i]));
        }
    }
    if (ext.size() < 4)
        throw std::runtime_error("fit_frequency: fewer than 4 extrema in range");
    R span = ext.back() - ext.front();
    R mean_dx = span / R(ext.size() - 1);
    return {pi_value<R>() / mean_dx, ext.size()};
}

// --------------------------------------------------------------------------
// Comparison report
// --------------------------------------------------------------------------

template <class C> struct ComparisonRow {
    real_of<C> tau;
    C u;
    C u_as;
    real_of<C> abs_err;
};

template <class C> struct ComparisonReport {
    using R = real_of<C>;
    AsymptoticForm form{};
    std::vector<ComparisonRow<C>> rows;
    R sup_error{};                ///< sup |u - u_as| over all samples
    R sup_rel_amplitude{};        ///< sup_error / amplitude scale of the form
    /// Sub-window sups: [T1, 2 T1] and [2 T1, min(4 T1, T2)] when T2 >= 4 T1,
    /// otherwise the two halves of [T1, T2].
    R sup_lower{}, sup_upper{};
    bool quartered = false;       ///< true when the [T,2T]/[2T,4T] split applied
    bool decreasing = false;      ///< sup_upper < sup_lower
    /// Oscillation fits of the residual y (Im u for suleimanov, Re u minus
    /// the secular term otherwise), when the form admits a single phase.
    std::optional<R> fitted_amplitude;
    std::optional<R> predicted_amplitude;
    std::optional<R> fitted_phase_offset;  ///< ~0: form tracks; ~pi: sign flip
    std::optional<R> fitted_frequency;     ///< in xi = tau^{2/3}
    R predicted_frequency{};
};

/// Sample u (one continuation pass) against u_as on [t1, t2].
template <class C>
ComparisonReport<C> compare_asymptotics(const SolutionEvaluator<C>& ev,
                                        const AsymptoticEvaluator<C>& ae,
                                        real_of<C> t1, real_of<C> t2,
                                        std::size_t samples,
                                        AsymptoticForm form) {
    using R = real_of<C>;
    using std::abs;
    using std::cbrt;
    if (!(t1 > R(0) && t2 > t1) || samples < 2)
        throw std::invalid_argument("compare_asymptotics: bad window");
    ComparisonReport<C> rep;
    rep.form = form;
    rep.predicted_frequency = ae.frequency();
    std::vector<R> taus(samples);
    for (std::size_t i = 0; i < samples; ++i)
        taus[i] = t1 + (t2 - t1) * R(i) / R(samples - 1);
    std::vector<C> us = ev.trace(taus);
    rep.rows.resize(samples);
    R lo_hi = 2 * t1, up_hi = 4 * t1;
    rep.quartered = t2 >= 4 * t1;
    if (!rep.quartered) {
        lo_hi = (t1 + t2) / 2;
        up_hi = t2;
    }
    for (std::size_t i = 0; i < samples; ++i) {
        C ua = ae.u_as(taus[i], form);
        R err = abs(us[i] - ua);
        rep.rows[i] = {taus[i], us[i], ua, err};
        if (err > rep.sup_error) rep.sup_error = err;
        if (taus[i] <= lo_hi && err > rep.sup_lower) rep.sup_lower = err;
        if (taus[i] >= lo_hi && taus[i] <= up_hi && err > rep.sup_upper)
            rep.sup_upper = err;
    }
    rep.decreasing = rep.sup_upper < rep.sup_lower;
    R amp_scale = ae.amplitude(form);
    rep.sup_rel_amplitude = amp_scale > R(0) ? rep.sup_error / amp_scale
                                             : rep.sup_error;

    // Phase-tracked fit when the form carries a single cosine.
    bool fit_im = form == AsymptoticForm::suleimanov;
    bool has_phase =
        form == AsymptoticForm::negative_a || form == AsymptoticForm::suleimanov ||
        (form == AsymptoticForm::general && ae.params().a.imag() == R(0));
    if (has_phase && samples >= 32) {
        std::vector<R> ys(samples), phases(samples), xis(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            R y = fit_im ? us[i].imag() : us[i].real() - ae.secular(taus[i]);
            ys[i] = y;
            phases[i] = ae.phase(taus[i], form);
            R ct = cbrt(taus[i]);
            xis[i] = ct * ct;
        }
        if (!fit_im) {
            // Remove the slowly decaying non-oscillatory residual
            // (c0 + c1 tau^{-1/3}) before fitting the oscillation.
            R s11 = R(samples), s1t = R(0), stt = R(0), sy1 = R(0), syt = R(0);
            for (std::size_t i = 0; i < samples; ++i) {
                R t13 = 1 / cbrt(taus[i]);
                s1t += t13;
                stt += t13 * t13;
                sy1 += ys[i];
                syt += ys[i] * t13;
            }
            R det = s11 * stt - s1t * s1t;
            if (det != R(0)) {
                R c0 = (sy1 * stt - syt * s1t) / det;
                R c1 = (syt * s11 - sy1 * s1t) / det;
                for (std::size_t i = 0; i < samples; ++i)
                    ys[i] -= c0 + c1 / cbrt(taus[i]);
            }
        }
        try {
            auto [amp, delta] = fit_amplitude_phase(ys, phases);
            rep.fitted_amplitude = amp;
            rep.fitted_phase_offset = delta;
            rep.predicted_amplitude = amp_scale;
        } catch (const std::exception&) {
        }
        try {
            auto [freq, count] = fit_frequency(xis, ys);
            (void)count;
            rep.fitted_frequency = freq;
        } catch (const std::exception&) {
        }
    }
    return rep;
}

/// CSV export: header tau,re_u,im_u,re_u_as,im_u_as,abs_err; fixed %.15e
/// formatting, '.' decimal point, no locale dependence.
template <class C> std::string comparison_csv(const ComparisonReport<C>& rep) {
    std::string out = "tau,re_u,im_u,re_u_as,im_u_as,abs_err\n";
    char buf[192];
    for (const auto& row : rep.rows) {
        std::snprintf(buf, sizeof buf,
                      "%.15e,%.15e,%.15e,%.15e,%.15e,%.15e\n",
                      static_cast<double>(row.tau),
                      static_cast<double>(row.u.real()),
                      static_cast<double>(row.u.imag()),
                      static_cast<double>(row.u_as.real()),
                      static_cast<double>(row.u_as.imag()),
                      static_cast<double>(row.abs_err));
        out += buf;
    }
    return out;
}

// --------------------------------------------------------------------------
// Positivity scan
// --------------------------------------------------------------------------

template <class R> struct PositivityReport {
    bool all_positive = false;     ///< Re u > 0 at every grid point
    bool real_when_real = false;   ///< |Im u| tiny whenever a and b are real
    bool parameters_real = false;
    R min_re{};
    R tau_at_min{};
    R max_abs_im{};
    std::size_t grid = 0;
};

/// Geometric grid scan of Re u on [tau_min, tau_max] (defaults to
/// [1/100, tau_max]).  Intended for Re a <= 0, |Im a| < 1 where the solution
/// is conjectured pole-free with positive real part.
template <class C>
PositivityReport<real_of<C>> positivity_scan(const SolutionEvaluator<C>& ev,
                                             real_of<C> tau_max,
                                             std::size_t grid,
                                             real_of<C> tau_min = real_of<C>(0)) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    using std::log;
    if (tau_min <= R(0)) tau_min = R(1) / 100;
    if (!(tau_max > tau_min) || grid < 2)
        throw std::invalid_argument("positivity_scan: bad grid");
    std::vector<R> taus(grid);
    R lr = log(tau_max / tau_min);
    for (std::size_t i = 0; i < grid; ++i)
        taus[i] = tau_min * exp(lr * R(i) / R(grid - 1));
    std::vector<C> us = ev.trace(taus);
    PositivityReport<R> rep;
    rep.grid = grid;
    rep.parameters_real =
        ev.a().imag() == R(0) && ev.b().imag() == R(0);
    rep.all_positive = true;
    rep.min_re = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid; ++i) {
        R re = us[i].real();
        R im = abs(us[i].imag());
        if (re <= R(0)) rep.all_positive = false;
        if (re < rep.min_re) {
            rep.min_re = re;
            rep.tau_at_min = taus[i];
        }
        if (im > rep.max_abs_im) rep.max_abs_im = im;
    }
    rep.real_when_real =
        !rep.parameters_real || rep.max_abs_im <= R(1) / 1000000000;
    return rep;
}

// Default double-precision aliases.
using Complex = std::complex<double>;
using SolutionEvaluatorD = SolutionEvaluator<Complex>;
using AsymptoticEvaluatorD = AsymptoticEvaluator<Complex>;
using MonodromyParamsD = MonodromyParams<Complex>;

}  // namespace dp3
