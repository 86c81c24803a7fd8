#pragma once

// Large-parameter tower of generating functions.
//
// The scaled table entries t_n(a) = a^{2n} u_{2n}(a) expand in inverse powers
// of the parameter as t_n(a) = sum_{k>=0} (-1)^k A_k[n] / a^{2k}, convergent
// for |a| > n.  The generating functions A_k(z) = (-1)^k sum_{n>=1} A_k[n] z^n
// of the columns satisfy a cubic equation for k = 0,
//     z (1 + A_0)^3 = A_0,
// whose regular root has the Fuss-Catalan coefficients C(3n,n)/(2n+1), and a
// first-order recurrence in k for the higher levels.  Every level is rational
// in w = A_0(z) with the canonical shape
//     A_k(z) = (-1)^k w (1+w)^{2(k+1)} R_{3(k-1)}(w) / (1-2w)^{5k-1},
// R_{3(k-1)} an integer polynomial of degree 3(k-1) with R(0) = 1.
//
// This header builds the tower along two independent routes (a direct series
// recursion, ATower, and a symbolic recursion in w, ak_rational_tower), offers
// terminating-hypergeometric closed forms for A_1[n] and A_2[n], reconstructs
// the numerator coefficients p_k(n) of the exact table from the tower, and
// provides growth monitors plus the exact audit sequences X_n, Y_n, Z_n that
// certify positivity of the subleading numerator coefficient.

#include "dp3/coeff_table.hpp"
#include "dp3/poly.hpp"
#include "dp3/rational.hpp"
#include "dp3/series.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dp3 {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline BigFloat to_bigfloat(const Int& v) { return BigFloat(v.get_str()); }
inline BigFloat to_bigfloat(const Rat& v) { return to_bigfloat(num(v)) / to_bigfloat(den(v)); }
inline BigFloat bigfloat_pi() {
    return BigFloat("3.14159265358979323846264338327950288419716939937510582097494459230781640629");
}

// ---------------------------------------------------------------------------
// Level zero: Fuss-Catalan numbers and the cubic.

/// C(3n,n)/(2n+1); always an integer.
inline Int fuss_catalan(long n) {
    if (n < 0) throw std::domain_error("fuss_catalan: negative index");
    const Rat v = rat(binomial(static_cast<unsigned long>(3 * n), static_cast<unsigned long>(n)),
                      Int(2 * n + 1));
    if (!is_integer(v)) throw std::logic_error("fuss_catalan: unexpected non-integer value");
    return v.get_num();
}

/// Taylor series of the regular root of z(1+A_0)^3 = A_0 through order N.
/// The coefficients come from the closed formula and are re-verified against
/// the cubic before returning.
inline Series a0_series(int N) {
    if (N < 1) throw std::domain_error("a0_series: order must be >= 1");
    Series s(N);
    for (int n = 1; n <= N; ++n) s.mutable_coeff(n) = rat(fuss_catalan(n), Int(1));
    const Series one = Series::constant(rat(1), N);
    const Series cube = (one + s).pow(3);
    if (!(cube.shifted_up(1) - s).is_zero())
        throw std::logic_error("a0_series: coefficients do not satisfy the defining cubic");
    return s;
}

/// Closed-form evaluation of the regular cubic root:
///   A_0(z) = -1 + (2/sqrt(-3z)) sinh( (1/3) arcsinh( (3/2) sqrt(-3z) ) )
/// on principal branches.  Valid (continuous with the Taylor series) for
/// |z| < 4/27; outside that disc the value is still returned but flagged.
struct A0Value {
    std::complex<double> value;
    bool inside_disc = true;
};

inline A0Value a0_eval(std::complex<double> z) {
    A0Value out;
    out.inside_disc = std::abs(z) < 4.0 / 27.0;
    if (z == std::complex<double>(0.0, 0.0)) {
        out.value = 0.0;
        return out;
    }
    const std::complex<double> root = std::sqrt(-3.0 * z);
    const std::complex<double> phi = std::asinh(1.5 * root) / 3.0;
    out.value = -1.0 + (2.0 / root) * std::sinh(phi);
    return out;
}

// ---------------------------------------------------------------------------
// Route one: direct series recursion.
//
// Matching powers of 1/a^2 in the governing equation produces, for k >= 0,
//   A_{k+1} = (1+A_0)/(2A_0-1) * ( d^2 A_k
//             + sum_{i+j=k} (A_i d^2 A_j - dA_i dA_j)
//             - 3 z sum_{i+j=k+1; i,j<=k} A_i A_j
//             - z sum_{j1+j2+j3=k+1; all<=k} A_{j1} A_{j2} A_{j3} ),
// with d = z d/dz and all index sums over ordered tuples of nonnegative
// integers.  Pair convolutions over completed levels are cached so each level
// costs O(k) series multiplications.

class ATower {
  public:
    ATower(int k_max, int N) : order_(N) {
        if (k_max < 0) throw std::domain_error("ATower: negative depth");
        a_.push_back(a0_series(N));
        da_.push_back(a_[0].euler_delta());
        dda_.push_back(da_[0].euler_delta());
        pair_.push_back(a_[0] * a_[0]);
        const Series one = Series::constant(rat(1), N);
        prefactor_ = (one + a_[0]) * (rat(2) * a_[0] - one).inverse();
        while (static_cast<int>(a_.size()) <= k_max) grow();
    }

    int k_max() const { return static_cast<int>(a_.size()) - 1; }
    int order() const { return order_; }

    /// The signed series A_k(z) (coefficients carry the factor (-1)^k).
    const Series& series(int k) const {
        if (k < 0 || k > k_max()) throw std::out_of_range("ATower::series: level out of range");
        return a_[static_cast<std::size_t>(k)];
    }

    /// The positive integer A_k[n].
    Int coeff(int k, int n) const {
        if (n < 1 || n > order_) throw std::out_of_range("ATower::coeff: index out of range");
        Rat c = series(k)[n];
        if (k % 2 != 0) c = -c;
        if (!is_integer(c)) throw std::logic_error("ATower::coeff: non-integer tower coefficient");
        return c.get_num();
    }

    /// Row A_k[1..N] as integers.
    std::vector<Int> row(int k) const {
        std::vector<Int> r;
        r.reserve(static_cast<std::size_t>(order_));
        for (int n = 1; n <= order_; ++n) r.push_back(coeff(k, n));
        return r;
    }

  private:
    int order_;
    Series prefactor_;            // (1+A_0)/(2A_0-1)
    std::vector<Series> a_;       // signed levels
    std::vector<Series> da_;      // d A_k
    std::vector<Series> dda_;     // d^2 A_k
    std::vector<Series> pair_;    // pair_[m] = sum_{i+j=m} A_i A_j over built levels

    void grow() {
        const int k = static_cast<int>(a_.size()) - 1;
        const std::size_t uk = static_cast<std::size_t>(k);
        Series acc = dda_[uk];
        for (int i = 0; i <= k; ++i)
            acc = acc + (a_[static_cast<std::size_t>(i)] * dda_[uk - static_cast<std::size_t>(i)] -
                         da_[static_cast<std::size_t>(i)] * da_[uk - static_cast<std::size_t>(i)]);
        Series pr(order_);  // sum_{i+j=k+1; 1<=i,j<=k} A_i A_j
        for (int i = 1; i <= k; ++i)
            pr = pr + a_[static_cast<std::size_t>(i)] * a_[static_cast<std::size_t>(k + 1 - i)];
        Series tr = a_[0] * pr;  // sum over ordered triples with all indices <= k
        for (int j = 1; j <= k; ++j)
            tr = tr + a_[static_cast<std::size_t>(j)] * pair_[static_cast<std::size_t>(k + 1 - j)];
        const Series rhs = acc - rat(3) * pr.shifted_up(1) - tr.shifted_up(1);
        Series next = prefactor_ * rhs;
        pair_.push_back(pr + rat(2) * (a_[0] * next));
        da_.push_back(next.euler_delta());
        dda_.push_back(da_.back().euler_delta());
        a_.push_back(std::move(next));
    }
};

// ---------------------------------------------------------------------------
// Route two: symbolic recursion in w = A_0.
//
// The derivation acts on rational functions of w through
//   d f = f'(w) * w(1+w)/(1-2w),
// and z itself is eliminated via z = w/(1+w)^3.  Every denominator that can
// arise is a product of the monic factors w, (w+1), (w-1/2), so reduction is
// exact trial division rather than a generic gcd.

namespace detail {

inline int strip_linear_factor(Poly& p, const Rat& root) {
    int count = 0;
    const Poly factor = Poly::linear(Rat(-root));  // monic (t - root)
    while (!p.is_zero() && p.degree() >= 1 && p.eval(root) == 0) {
        p = exact_div(p, factor);
        ++count;
    }
    return count;
}

struct FracW {
    Poly num;
    Poly den = Poly::one();

    static FracW of(Poly n, Poly d) {
        FracW f;
        f.num = std::move(n);
        f.den = std::move(d);
        f.reduce();
        return f;
    }

    void reduce() {
        if (den.is_zero()) throw std::domain_error("FracW: zero denominator");
        if (num.is_zero()) {
            den = Poly::one();
            return;
        }
        static const Rat roots[3] = {rat(0), rat(-1), rat(1, 2)};
        for (const Rat& r : roots) {
            Poly d = den;
            const int in_den = strip_linear_factor(d, r);
            if (in_den == 0) continue;
            Poly n = num;
            const int in_num = strip_linear_factor(n, r);
            const int cancel = std::min(in_den, in_num);
            if (cancel == 0) continue;
            const Poly factor = Poly::linear(Rat(-r));
            num = n;
            for (int i = 0; i < in_num - cancel; ++i) num = num * factor;
            den = d;
            for (int i = 0; i < in_den - cancel; ++i) den = den * factor;
        }
        const Rat lead = den[static_cast<std::size_t>(den.degree())];
        if (lead != 1) {
            const Rat inv = rat(1) / lead;
            num = num * inv;
            den = den * inv;
        }
    }

    bool is_constant_den() const { return den.degree() == 0; }

    friend FracW operator+(const FracW& a, const FracW& b) {
        return of(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend FracW operator-(const FracW& a, const FracW& b) {
        return of(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend FracW operator*(const FracW& a, const FracW& b) { return of(a.num * b.num, a.den * b.den); }
    friend FracW operator*(const Rat& c, const FracW& a) { return of(a.num * c, a.den); }

    /// Formal derivative with respect to w.
    FracW ddw() const { return of(num.derivative() * den - num * den.derivative(), den * den); }
};

}  // namespace detail

/// A level of the tower in its canonical rational shape.
struct AkRational {
    int k = 0;
    Poly R;  // R_{3(k-1)}(w): integer coefficients, degree 3(k-1), R(0) = 1

    /// Signed series A_k(z) through order N, by composition with a0_series.
    Series to_series(int N) const {
        const Series w = a0_series(N);
        const Series one = Series::constant(rat(1), N);
        Series value = w * (one + w).pow(static_cast<unsigned long>(2 * (k + 1))) * poly_on_series(R, w);
        value = value * (one - rat(2) * w).pow(static_cast<unsigned long>(5 * k - 1)).inverse();
        if (k % 2 != 0) value = -value;
        return value;
    }

    /// R_{3(k-1)}(1/2), the constant entering the large-n growth law.
    Rat r_at_half() const { return R.eval(rat(1, 2)); }
};

/// Build levels 1..k_max symbolically; returns them in order (index 0 -> k=1).
inline std::vector<AkRational> ak_rational_tower(int k_max) {
    if (k_max < 1) throw std::domain_error("ak_rational_tower: depth must be >= 1");
    using detail::FracW;
    const Poly w = Poly::monomial(rat(1), 1);
    const Poly one = Poly::one();
    const Poly one_plus_w = one + w;
    const Poly one_minus_2w = Poly(std::vector<Rat>{rat(1), rat(-2)});
    const FracW z = FracW::of(w, one_plus_w * one_plus_w * one_plus_w);
    const FracW prefactor = FracW::of(one_plus_w, Poly(std::vector<Rat>{rat(-1), rat(2)}));
    const FracW deriv_factor = FracW::of(w * one_plus_w, one_minus_2w);
    const auto dz = [&deriv_factor](const FracW& f) { return f.ddw() * deriv_factor; };

    std::vector<FracW> a{FracW::of(w, one)};
    std::vector<FracW> da{dz(a[0])};
    std::vector<FracW> dda{dz(da[0])};

    std::vector<AkRational> levels;
    levels.reserve(static_cast<std::size_t>(k_max));
    for (int k = 0; k < k_max; ++k) {
        const std::size_t uk = static_cast<std::size_t>(k);
        FracW acc = dda[uk];
        for (int i = 0; i <= k; ++i)
            acc = acc + (a[static_cast<std::size_t>(i)] * dda[uk - static_cast<std::size_t>(i)] -
                         da[static_cast<std::size_t>(i)] * da[uk - static_cast<std::size_t>(i)]);
        FracW pr = FracW::of(Poly::zero(), one);
        for (int i = 1; i <= k; ++i)
            pr = pr + a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(k + 1 - i)];
        FracW tr = FracW::of(Poly::zero(), one);
        for (int j1 = 0; j1 <= k; ++j1)
            for (int j2 = 0; j2 <= k; ++j2) {
                const int j3 = k + 1 - j1 - j2;
                if (j3 < 0 || j3 > k) continue;
                tr = tr + a[static_cast<std::size_t>(j1)] * a[static_cast<std::size_t>(j2)] *
                              a[static_cast<std::size_t>(j3)];
            }
        const FracW next = prefactor * (acc - rat(3) * (z * pr) - z * tr);
        a.push_back(next);
        da.push_back(dz(next));
        dda.push_back(dz(da.back()));

        // Canonicalize: R = (-1)^{k+1} (1-2w)^{5(k+1)-1} A_{k+1} / (w (1+w)^{2(k+2)}).
        const int level = k + 1;
        Poly num_scale = one;
        for (int i = 0; i < 5 * level - 1; ++i) num_scale = num_scale * one_minus_2w;
        Poly den_scale = w;
        for (int i = 0; i < 2 * (level + 1); ++i) den_scale = den_scale * one_plus_w;
        FracW cand = next * FracW::of(num_scale, den_scale);
        if (level % 2 != 0) cand = rat(-1) * cand;
        if (!cand.is_constant_den())
            throw std::logic_error("ak_rational_tower: level does not reduce to the canonical shape");
        AkRational entry;
        entry.k = level;
        entry.R = cand.num * (rat(1) / cand.den[0]);
        if (entry.R.degree() != 3 * (level - 1) || !entry.R.all_integer() || entry.R[0] != 1)
            throw std::logic_error("ak_rational_tower: canonical numerator has unexpected form");
        levels.push_back(std::move(entry));
    }
    return levels;
}

// ---------------------------------------------------------------------------
// Terminating hypergeometric closed forms.

/// F(1, -m; c; -2) = sum_{j=0}^{m} 2^j m! / ((m-j)! (c)_j), exact.
inline Rat hyp_one_negm(long m, long c) {
    if (m < 0 || c <= 0) throw std::domain_error("hyp_one_negm: bad parameters");
    Rat sum = rat(0);
    Rat term = rat(1);  // j = 0
    for (long j = 0; j <= m; ++j) {
        sum += term;
        // term_{j+1}/term_j = 2 (m-j) / (c+j)
        term *= rat(2 * (m - j), c + j);
    }
    return sum;
}

/// A_1[n] = (n+1)/18 C(3n+4, n+1) ( F(1,-n-1;2n+4;-2) - (4n+6)/(3n+4) ).
inline Rat a1n_closed(long n) {
    if (n < 1) throw std::domain_error("a1n_closed: n must be >= 1");
    const Rat bracket = hyp_one_negm(n + 1, 2 * n + 4) - rat(4 * n + 6, 3 * n + 4);
    return rat(n + 1, 18) *
           rat(binomial(static_cast<unsigned long>(3 * n + 4), static_cast<unsigned long>(n + 1)), Int(1)) *
           bracket;
}

/// A_2[n] = (n+1)/128 C(3n+1, n) ( (168n^3+846n^2+1211n+510)/5
///                                 - 3(n+1)(25n+34) F(1,-n;2n+2;-2) ).
inline Rat a2n_closed(long n) {
    if (n < 1) throw std::domain_error("a2n_closed: n must be >= 1");
    const Rat poly_part = rat(((168 * n + 846) * n + 1211) * n + 510, 5);
    const Rat bracket = poly_part - rat(3 * (n + 1) * (25 * n + 34)) * hyp_one_negm(n, 2 * n + 2);
    return rat(n + 1, 128) *
           rat(binomial(static_cast<unsigned long>(3 * n + 1), static_cast<unsigned long>(n)), Int(1)) *
           bracket;
}

/// Coefficients of the auxiliary function A_0 ((1+A_0)/(1-2A_0))^2
///   = sum_{n>=0} aux_a_coeff(n) z^{n+1},
/// aux_a_coeff(n) = (1/2) C(3n+4, n+1) (F(1,-n-1;2n+4;-2) - 1).
inline Rat aux_a_coeff(long n) {
    if (n < 0) throw std::domain_error("aux_a_coeff: negative index");
    return rat(1, 2) *
           rat(binomial(static_cast<unsigned long>(3 * n + 4), static_cast<unsigned long>(n + 1)), Int(1)) *
           (hyp_one_negm(n + 1, 2 * n + 4) - rat(1));
}

// ---------------------------------------------------------------------------
// Bridge back to the exact table.

/// Q_n(v) = prod_{k=1..n} (1 + k^2 v)^{n_k} with the conjectured exponents.
inline Poly q_polynomial(long n) {
    const StructurePrediction pred = predicted_structure(n);
    Poly q = Poly::one();
    for (const auto& [k, e] : pred.exponents) {
        const Poly factor = Poly(std::vector<Rat>{rat(1), rat(k * k)});
        for (int i = 0; i < e; ++i) q = q * factor;
    }
    return q;
}

/// Expand t_n(a) = a^{2n} u_{2n}(a) in powers of v = 1/a^2 to depth K and
/// compare with the tower: coefficient of v^k must equal (-1)^k A_k[n].
inline bool laurent_identity_check(const CoeffTable& table, const ATower& tower, int n, int K) {
    if (K > tower.k_max() || n > tower.order() || n > table.n_max())
        throw std::domain_error("laurent_identity_check: requested depth beyond available data");
    const Decomposition d = decompose(table, n);
    long exponent_sum = 0;
    for (const auto& [k, e] : d.exponents) {
        (void)k;
        exponent_sum += e;
    }
    if (exponent_sum != d.m + n) return false;  // degree bookkeeping must balance
    // t_n as a function of v: reversed numerator over prod (1 + k^2 v)^{n_k}.
    Series numerator(K);
    for (long j = 0; j <= d.m && j <= K; ++j)
        numerator.mutable_coeff(static_cast<int>(j)) =
            rat(d.p[static_cast<std::size_t>(d.m - j)], Int(1));
    Series denominator = Series::constant(rat(1), K);
    for (const auto& [k, e] : d.exponents) {
        Series factor(K);
        factor.mutable_coeff(0) = rat(1);
        if (K >= 1) factor.mutable_coeff(1) = rat(k * k);
        for (int i = 0; i < e; ++i) denominator = denominator * factor;
    }
    const Series laurent = numerator * denominator.inverse();
    for (int k = 0; k <= K; ++k) {
        Rat expected = rat(tower.coeff(k, n), Int(1));
        if (k % 2 != 0) expected = -expected;
        if (laurent[k] != expected) return false;
    }
    return true;
}

/// Reconstruction of the numerator coefficients from the tower:
///   p_{m(n)-k}(n) = sum_{i=0}^{k} (-1)^{k-i} q_i(n) A_{k-i}[n], 0 <= k <= m(n),
/// with every later convolution coefficient vanishing.
struct TowerDecomposition {
    long m = 0;
    std::vector<Int> p_descending;  // p_m, p_{m-1}, ..., p_0
    bool zero_identities = true;    // convolution vanishes for k in (m, depth]
    int checked_through = 0;        // largest convolution index inspected
};

inline TowerDecomposition pk_from_ak(const ATower& tower, int n) {
    if (n < 1 || n > tower.order()) throw std::domain_error("pk_from_ak: n out of range");
    const Poly q = q_polynomial(n);
    const long m = predicted_structure(n).m;
    TowerDecomposition out;
    out.m = m;
    out.checked_through = tower.k_max();
    for (int k = 0; k <= tower.k_max(); ++k) {
        Rat c = rat(0);
        for (long i = 0; i <= std::min<long>(k, q.degree()); ++i) {
            Rat term = q[static_cast<std::size_t>(i)] * rat(tower.coeff(k - static_cast<int>(i), n), Int(1));
            if ((k - i) % 2 != 0) term = -term;
            c += term;
        }
        if (k <= m) {
            if (!is_integer(c)) throw std::logic_error("pk_from_ak: non-integer coefficient");
            out.p_descending.push_back(c.get_num());
        } else if (c != 0) {
            out.zero_identities = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Growth monitors.

/// Gamma(half/2) for integer `half`, as factor * sqrt(pi)^{0 or 1}; exact.
struct HalfIntegerGamma {
    Rat factor;
    bool sqrt_pi = false;
};

inline HalfIntegerGamma gamma_at_half_integer(long half) {
    HalfIntegerGamma g;
    if (half % 2 == 0) {
        const long x = half / 2;
        if (x <= 0) throw std::domain_error("gamma_at_half_integer: pole at nonpositive integer");
        g.factor = rat(factorial(static_cast<unsigned long>(x - 1)), Int(1));
        g.sqrt_pi = false;
        return g;
    }
    // Gamma(1/2 + m) with m = (half - 1)/2 (exact: half is odd), possibly negative.
    const long m = (half - 1) / 2;
    g.sqrt_pi = true;
    g.factor = rat(1);
    if (m >= 0)
        for (long j = 0; j < m; ++j) g.factor *= rat(2 * j + 1, 2);
    else
        // Gamma(1/2 - t) = sqrt(pi) (-2)^t / (1*3*...*(2t-1)) for t = -m.
        for (long j = 1; j <= -m; ++j) g.factor *= rat(-2, 2 * j - 1);
    return g;
}

/// The limit constant of the large-n growth law at level k:
///   3^{(5-k)/2} / 2^{2k+3} * R_{3(k-1)}(1/2) / Gamma((5k-1)/2),
/// with R_{-3}(1/2) = -(2/3)^2 at level zero.
inline BigFloat n_growth_limit(int k, const Rat& r_at_half) {
    const BigFloat sqrt_pi = sqrt(bigfloat_pi());
    const HalfIntegerGamma g = gamma_at_half_integer(5L * k - 1);
    BigFloat gamma_value = to_bigfloat(g.factor);
    if (g.sqrt_pi) gamma_value *= sqrt_pi;
    const BigFloat pow3 = pow(BigFloat(3), BigFloat(5 - k) / 2);
    const BigFloat pow2 = pow(BigFloat(2), 2 * k + 3);
    return pow3 / pow2 * to_bigfloat(r_at_half) / gamma_value;
}

struct NGrowthReport {
    int k = 0;
    int n_lo = 0, n_hi = 0;
    bool increasing = true;        // A_k[n] strictly increasing in n (exact)
    bool ratio_increasing = true;  // normalized ratio increasing over the whole window
    int increasing_from = 0;       // smallest n from which the ratio grows monotonically
    bool below_limit = true;       // normalized ratio < limit constant (50-digit float)
    double final_fraction = 0.0;   // ratio(n_hi) / limit
};

/// Check the monotone approach of A_k[n] (4/27)^n n^{-(5k-3)/2} to its limit.
inline NGrowthReport growth_in_n(const ATower& tower, int k, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi > tower.order() || n_lo >= n_hi)
        throw std::domain_error("growth_in_n: bad range");
    NGrowthReport rep;
    rep.k = k;
    rep.n_lo = n_lo;
    rep.n_hi = n_hi;
    Rat prev_square = rat(0);
    rep.increasing_from = n_lo;
    for (int n = n_lo; n <= n_hi; ++n) {
        const Int a = tower.coeff(k, n);
        if (n > n_lo && a <= tower.coeff(k, n - 1)) rep.increasing = false;
        // square of the normalized ratio: A^2 (16/729)^n n^{3-5k}
        Rat sq = rat(a * a, Int(1)) * pow_rat(rat(16, 729), n) * pow_rat(rat(n), 3 - 5L * k);
        if (n > n_lo && sq <= prev_square) rep.increasing_from = n;
        prev_square = sq;
    }
    rep.ratio_increasing = rep.increasing_from == n_lo;
    const Rat r_half = k == 0 ? rat(-4, 9) : ak_rational_tower(k).back().r_at_half();
    const BigFloat limit = n_growth_limit(k, r_half);
    const BigFloat final_ratio = to_bigfloat(tower.coeff(k, n_hi)) *
                                 pow(BigFloat(4) / 27, n_hi) /
                                 pow(BigFloat(n_hi), BigFloat(5 * k - 3) / 2);
    rep.below_limit = final_ratio < limit;  // monotone + below at the top = below throughout
    rep.final_fraction = static_cast<double>(final_ratio / limit);
    return rep;
}

struct KGrowthReport {
    int n = 0;
    int k_hi = 0;
    bool step_inequality = true;  // A_{k+1}[n] > n^2 A_k[n] (exact)
    bool below_limit = true;      // A_k[n]/n^{2k} < n^{3(n-1)}/(2^{n-1}((n-1)!)^3) (exact)
    Rat final_fraction;           // normalized value over the limit at k_hi
    double fitted_exponent = 0.0; // c with error ~ n^{-2k/c}, reported only
};

/// Check the monotone approach of A_k[n]/n^{2k} to its large-k limit.
inline KGrowthReport growth_in_k(const ATower& tower, int n) {
    if (n < 2 || n > tower.order()) throw std::domain_error("growth_in_k: need 2 <= n <= order");
    KGrowthReport rep;
    rep.n = n;
    rep.k_hi = tower.k_max();
    const Int nsq = Int(n) * Int(n);
    const Rat limit = rat(pow_int(Int(n), static_cast<unsigned long>(3 * (n - 1))),
                          pow_int(Int(2), static_cast<unsigned long>(n - 1)) *
                              pow_int(factorial(static_cast<unsigned long>(n - 1)), 3));
    Rat normalized;
    for (int k = 0; k <= tower.k_max(); ++k) {
        const Int a = tower.coeff(k, n);
        if (k < tower.k_max() && tower.coeff(k + 1, n) <= nsq * a) rep.step_inequality = false;
        normalized = rat(a, pow_int(Int(n), static_cast<unsigned long>(2 * k)));
        if (normalized >= limit) rep.below_limit = false;
    }
    rep.final_fraction = normalized / limit;
    const double err = 1.0 - to_double(rep.final_fraction);
    if (err > 0.0)
        rep.fitted_exponent = 2.0 * tower.k_max() * std::log(static_cast<double>(n)) / (-std::log(err));
    return rep;
}

// ---------------------------------------------------------------------------
// Audit sequences for positivity of the subleading numerator coefficient.
// All values are exact rationals; the printed decimals in the tests truncate
// them to fixed precision.

/// X_n = C(3n, n-1) 2^{2n+1} 3^{-(3n+2)} (3n^2+3n+2)/(n+1).
inline Rat audit_x(long n) {
    return rat(binomial(static_cast<unsigned long>(3 * n), static_cast<unsigned long>(n - 1)), Int(1)) *
           rat(pow_int(Int(2), static_cast<unsigned long>(2 * n + 1)),
               pow_int(Int(3), static_cast<unsigned long>(3 * n + 2))) *
           rat((3 * n + 3) * n + 2, n + 1);
}

/// Y_n = (8/9)(4/27)^n C(3n, n-1) ( (3n+1)(3n+2)/(3n) + (3n^2+3n+2)/4 ).
inline Rat audit_y(long n) {
    return rat(8, 9) * pow_rat(rat(4, 27), n) *
           rat(binomial(static_cast<unsigned long>(3 * n), static_cast<unsigned long>(n - 1)), Int(1)) *
           (rat((3 * n + 1) * (3 * n + 2), 3 * n) + rat((3 * n + 3) * n + 2, 4));
}

/// Z_n = (8/81)(4/27)^n (n+1) sum_{l=1}^{5} C(3n+4, n+1+l) / 2^l.
inline Rat audit_z(long n) {
    Rat sum = rat(0);
    for (long l = 1; l <= 5; ++l)
        sum += rat(binomial(static_cast<unsigned long>(3 * n + 4), static_cast<unsigned long>(n + 1 + l)),
                   pow_int(Int(2), static_cast<unsigned long>(l)));
    return rat(8, 81) * pow_rat(rat(4, 27), n) * rat(n + 1) * sum;
}

/// Closed form for Y_{n+1} - Y_n:
///   2(243n^4+1170n^3+1773n^2+1014n+200) / (243(n+1)(2n+1)(2n+3)) C(3n,n) (4/27)^n.
inline Rat audit_dy_closed(long n) {
    const Rat quartic = rat((((243 * n + 1170) * n + 1773) * n + 1014) * n + 200);
    return rat(2) * quartic * rat(1, 243 * (n + 1) * (2 * n + 1) * (2 * n + 3)) *
           rat(binomial(static_cast<unsigned long>(3 * n), static_cast<unsigned long>(n)), Int(1)) *
           pow_rat(rat(4, 27), n);
}

/// The refined lower bound for the subleading coefficient:
///   C(3n,n-1)( (3n+1)(3n+2)/(6n) + (3n^2+3n+2)/8 )
///   - (n+1)/18 ( 3^{3n+4}/2^{2n+3} - sum_{k=n+2}^{n+6} C(3n+4,k) 2^{n+1-k} ).
inline Rat audit_refined_bound(long n) {
    const Rat first =
        rat(binomial(static_cast<unsigned long>(3 * n), static_cast<unsigned long>(n - 1)), Int(1)) *
        (rat((3 * n + 1) * (3 * n + 2), 6 * n) + rat((3 * n + 3) * n + 2, 8));
    Rat tail = rat(0);
    for (long k = n + 2; k <= n + 6; ++k)
        tail += rat(binomial(static_cast<unsigned long>(3 * n + 4), static_cast<unsigned long>(k)), Int(1)) *
                pow_rat(rat(2), n + 1 - k);
    const Rat second = rat(pow_int(Int(3), static_cast<unsigned long>(3 * n + 4)),
                           pow_int(Int(2), static_cast<unsigned long>(2 * n + 3))) -
                       tail;
    return first - rat(n + 1, 18) * second;
}

struct InequalityAudit {
    bool x_crossing = false;        // X_38 < 1 < X_39
    bool x_monotone = false;        // X_n strictly increasing over the range
    bool x_ratio_identity = false;  // the one-step ratio closed form holds
    bool dy_crossing = false;       // dY_13 < 1 < dY_14
    bool dy_closed_identity = false;   // Y_{n+1}-Y_n equals the closed form
    bool dy_ratio_identity = false;    // the dY one-step ratio closed form holds
    bool yz_inequality = false;        // Y_n + Z_n > n + 1 for 3 <= n <= 14
    bool z_monotone = false;           // Z_n strictly increasing
    bool refined_link = false;         // (16/9)(4/27)^n * refined bound = Y+Z-(n+1)
    std::vector<Rat> yz_margin;        // Y_n + Z_n - (n+1) for n = 3..14
};

inline InequalityAudit pmn1_inequality_audit(long n_hi = 60) {
    InequalityAudit audit;
    audit.x_crossing = audit_x(38) < 1 && rat(1) < audit_x(39);
    audit.dy_crossing = audit_dy_closed(13) < 1 && rat(1) < audit_dy_closed(14);

    audit.x_monotone = true;
    audit.x_ratio_identity = true;
    audit.dy_closed_identity = true;
    audit.dy_ratio_identity = true;
    audit.z_monotone = true;
    audit.refined_link = true;
    for (long n = 1; n <= n_hi; ++n) {
        const Rat x = audit_x(n);
        const Rat x_next = audit_x(n + 1);
        if (x_next <= x) audit.x_monotone = false;
        // X_{n+1} = (n+1/3)(n+2/3)(n+1)(n^2+3n+8/3) / (n(n+3/2)(n+2)(n^2+n+2/3)) X_n
        const Rat ratio_num = (rat(n) + rat(1, 3)) * (rat(n) + rat(2, 3)) * rat(n + 1) *
                              (rat(n * n + 3 * n) + rat(8, 3));
        const Rat ratio_den = rat(n) * (rat(n) + rat(3, 2)) * rat(n + 2) * (rat(n * n + n) + rat(2, 3));
        if (x_next * ratio_den != x * ratio_num) audit.x_ratio_identity = false;

        const Rat dy = audit_y(n + 1) - audit_y(n);
        const Rat dy_closed = audit_dy_closed(n);
        if (dy != dy_closed) audit.dy_closed_identity = false;
        // dY_{n+1}/dY_n - 1 closed form
        const Rat lhs = audit_dy_closed(n + 1) / dy_closed - 1;
        const Rat rhs_num = rat(((((2187 * n + 12312) * n + 25497) * n + 23616) * n + 7908) * n - 400);
        const Rat rhs_den = rat(9 * (n + 2) * (2 * n + 5)) *
                            rat((((243 * n + 1170) * n + 1773) * n + 1014) * n + 200);
        if (lhs != rhs_num / rhs_den) audit.dy_ratio_identity = false;

        if (audit_z(n + 1) <= audit_z(n)) audit.z_monotone = false;

        const Rat margin = audit_y(n) + audit_z(n) - rat(n + 1);
        if (margin != rat(16, 9) * pow_rat(rat(4, 27), n) * audit_refined_bound(n))
            audit.refined_link = false;
        if (n >= 3 && n <= 14) audit.yz_margin.push_back(margin);
    }
    audit.yz_inequality = true;
    for (const Rat& m : audit.yz_margin)
        if (m <= 0) audit.yz_inequality = false;
    return audit;
}

// ---------------------------------------------------------------------------
// Sequence export, one value per line: "n A_k[n]".

inline void write_bfile(std::ostream& os, const std::vector<Int>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i + 1) << ' ' << to_string(row[i]) << '\n';
}

}  // namespace dp3
