#pragma once

// Small-parameter tower: Taylor expansion of the exact coefficient table in
// the squared parameter.  Writing s for the squared parameter and grouping
//
//     u_{2n}(s) = sum_k u_{2n}^k s^k,      B_k(x) = sum_n u_{2n}^k x^n,
//
// every level B_k is a rational function of x whose only finite pole sits at
// x = 2.  The base level solves a dilation-invariant identity in closed form,
//     1 + B_0 = 1/(1 - x/2)^2,
// and each higher level solves one and the same second-order linear operator
//     x(1 - x/2) y'' + (1 - 5x/2) y' - 2 y = rhs_k,   y(0) = 0,
// whose right-hand side is assembled from partition sums over the lower
// levels.  The homogeneous solutions of the operator are (x+2)/(x-2)^3 and a
// logarithmic partner; regularity of the tower forces the logarithm out, and
// y(0) = 0 pins the remaining constant.
//
// The tower is computed three independent ways -- from the exact table, from
// the linear operator with a rational ansatz, and from per-level closed
// forms -- so the test suite can cross-assert them.

#include "dp3/coeff_table.hpp"
#include "dp3/poly.hpp"
#include "dp3/ratfunc.hpp"
#include "dp3/rational.hpp"
#include "dp3/series.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dp3 {

// ---------------------------------------------------------------------------
// Laurent polynomials in t = x - 2.  Everything the tower touches lives in
// the ring Q[t, 1/t]: polynomials in x, powers of 1/(x-2), the operator
// coefficients x(1-x/2) = -t(t+2)/2 and 1 - 5x/2 = -4 - 5t/2, and the
// normalizing division by x(1-x/2) (a shift composed with one exact division
// by t + 2).  Keeping the algebra here avoids any generic gcd machinery.
// ---------------------------------------------------------------------------

class LaurentAtTwo {
  public:
    LaurentAtTwo() = default;  // zero

    static LaurentAtTwo monomial(const Rat& c, long e) {
        LaurentAtTwo f;
        if (c != 0) {
            f.lo_ = e;
            f.coeff_.assign(1, c);
        }
        return f;
    }

    /// p(x) rewritten in t = x - 2.
    static LaurentAtTwo from_poly_in_x(const Poly& p) {
        LaurentAtTwo f;
        if (p.is_zero()) return f;
        const Poly q = p.shifted(rat(2));  // q(t) = p(t + 2)
        f.lo_ = 0;
        f.coeff_.resize(static_cast<std::size_t>(q.degree()) + 1);
        for (long i = 0; i <= q.degree(); ++i) f.coeff_[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(i)];
        f.trim();
        return f;
    }

    bool is_zero() const { return coeff_.empty(); }
    long lowest() const { return lo_; }
    long highest() const { return lo_ + static_cast<long>(coeff_.size()) - 1; }

    Rat coeff(long e) const {
        if (is_zero() || e < lo_ || e > highest()) return rat(0);
        return coeff_[static_cast<std::size_t>(e - lo_)];
    }

    friend LaurentAtTwo operator+(const LaurentAtTwo& a, const LaurentAtTwo& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        LaurentAtTwo r;
        r.lo_ = std::min(a.lo_, b.lo_);
        const long hi = std::max(a.highest(), b.highest());
        r.coeff_.assign(static_cast<std::size_t>(hi - r.lo_) + 1, rat(0));
        for (long e = a.lo_; e <= a.highest(); ++e) r.coeff_[static_cast<std::size_t>(e - r.lo_)] += a.coeff(e);
        for (long e = b.lo_; e <= b.highest(); ++e) r.coeff_[static_cast<std::size_t>(e - r.lo_)] += b.coeff(e);
        r.trim();
        return r;
    }

    friend LaurentAtTwo operator-(const LaurentAtTwo& a, const LaurentAtTwo& b) { return a + b * rat(-1); }

    friend LaurentAtTwo operator*(const LaurentAtTwo& a, const LaurentAtTwo& b) {
        if (a.is_zero() || b.is_zero()) return LaurentAtTwo();
        LaurentAtTwo r;
        r.lo_ = a.lo_ + b.lo_;
        r.coeff_.assign(a.coeff_.size() + b.coeff_.size() - 1, rat(0));
        for (std::size_t i = 0; i < a.coeff_.size(); ++i) {
            if (a.coeff_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeff_.size(); ++j) r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
        }
        r.trim();
        return r;
    }

    friend LaurentAtTwo operator*(LaurentAtTwo a, const Rat& c) {
        if (c == 0) return LaurentAtTwo();
        for (auto& x : a.coeff_) x *= c;
        return a;
    }
    friend LaurentAtTwo operator*(const Rat& c, LaurentAtTwo a) { return std::move(a) * c; }

    bool operator==(const LaurentAtTwo& o) const { return lo_ == o.lo_ && coeff_ == o.coeff_; }
    bool operator!=(const LaurentAtTwo& o) const { return !(*this == o); }

    /// Multiply by t^k (k of either sign).
    LaurentAtTwo shifted_pow(long k) const {
        LaurentAtTwo r = *this;
        if (!r.is_zero()) r.lo_ += k;
        return r;
    }

    /// d/dt (equals d/dx).
    LaurentAtTwo derivative() const {
        LaurentAtTwo r;
        if (is_zero()) return r;
        r.lo_ = lo_ - 1;
        r.coeff_.assign(coeff_.size(), rat(0));
        for (std::size_t i = 0; i < coeff_.size(); ++i) {
            const long e = lo_ + static_cast<long>(i);
            r.coeff_[i] = rat(e) * coeff_[i];
        }
        r.trim();
        return r;
    }

    /// The dilation operator x d/dx = (t + 2) d/dt.
    LaurentAtTwo euler() const {
        const LaurentAtTwo d = derivative();
        return d.shifted_pow(1) + rat(2) * d;
    }

    LaurentAtTwo pow(unsigned long e) const {
        LaurentAtTwo acc = monomial(rat(1), 0);
        LaurentAtTwo base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            if (e >>= 1) base = base * base;
        }
        return acc;
    }

    /// Exact division by x = t + 2; throws if the value at x = 0 is nonzero.
    LaurentAtTwo divided_by_x() const {
        if (is_zero()) return LaurentAtTwo();
        Poly p;  // f = t^{lo} p(t)
        {
            std::vector<Rat> v(coeff_.begin(), coeff_.end());
            p = Poly(std::move(v));
        }
        auto [quot, rem] = divrem(p, Poly::linear(rat(2)));
        if (!rem.is_zero()) throw std::domain_error("LaurentAtTwo::divided_by_x: not divisible by x");
        LaurentAtTwo r;
        r.lo_ = lo_;
        r.coeff_.resize(static_cast<std::size_t>(quot.degree()) + 1);
        for (long i = 0; i <= quot.degree(); ++i) r.coeff_[static_cast<std::size_t>(i)] = quot[static_cast<std::size_t>(i)];
        r.trim();
        return r;
    }

    Rat value_in_x(const Rat& x0) const {
        const Rat t0 = x0 - rat(2);
        if (t0 == 0) throw std::domain_error("LaurentAtTwo::value_in_x: evaluation at the pole");
        Rat acc = rat(0);
        for (std::size_t i = 0; i < coeff_.size(); ++i)
            acc += coeff_[i] * pow_rat(t0, lo_ + static_cast<long>(i));
        return acc;
    }

  private:
    long lo_ = 0;
    std::vector<Rat> coeff_;  // coeff_[i] multiplies t^{lo_ + i}; trimmed at both ends

    void trim() {
        std::size_t drop_hi = 0;
        while (drop_hi < coeff_.size() && coeff_[coeff_.size() - 1 - drop_hi] == 0) ++drop_hi;
        coeff_.resize(coeff_.size() - drop_hi);
        std::size_t drop_lo = 0;
        while (drop_lo < coeff_.size() && coeff_[drop_lo] == 0) ++drop_lo;
        if (drop_lo) {
            coeff_.erase(coeff_.begin(), coeff_.begin() + static_cast<long>(drop_lo));
            lo_ += static_cast<long>(drop_lo);
        }
        if (coeff_.empty()) lo_ = 0;
    }
};

// ---------------------------------------------------------------------------
// Rational ansatz: polynomial part in x plus a finite pole at x = 2.
// ---------------------------------------------------------------------------

struct RationalAnsatz {
    Poly poly_part;          // in x
    std::vector<Rat> pole;   // pole[j-1] multiplies (x-2)^{-j}, j = 1, 2, ...

    int pole_order() const {
        int j = static_cast<int>(pole.size());
        while (j > 0 && pole[static_cast<std::size_t>(j) - 1] == 0) --j;
        return j;
    }

    Rat pole_coeff(int j) const {
        if (j < 1 || j > static_cast<int>(pole.size())) return rat(0);
        return pole[static_cast<std::size_t>(j) - 1];
    }

    Rat value(const Rat& x0) const {
        if (x0 == 2) throw std::domain_error("RationalAnsatz::value: evaluation at the pole");
        Rat acc = poly_part.eval(x0);
        for (std::size_t i = 0; i < pole.size(); ++i)
            acc += pole[i] * pow_rat(x0 - rat(2), -static_cast<long>(i) - 1);
        return acc;
    }

    LaurentAtTwo laurent() const {
        LaurentAtTwo f = LaurentAtTwo::from_poly_in_x(poly_part);
        for (std::size_t i = 0; i < pole.size(); ++i)
            f = f + LaurentAtTwo::monomial(pole[i], -static_cast<long>(i) - 1);
        return f;
    }

    static RationalAnsatz from_laurent(const LaurentAtTwo& f) {
        RationalAnsatz r;
        if (f.is_zero()) return r;
        if (f.highest() >= 0) {
            std::vector<Rat> v(static_cast<std::size_t>(f.highest()) + 1, rat(0));
            for (long e = std::max<long>(0, f.lowest()); e <= f.highest(); ++e) v[static_cast<std::size_t>(e)] = f.coeff(e);
            r.poly_part = Poly(std::move(v)).shifted(rat(-2));  // back to the variable x
        }
        if (f.lowest() < 0) {
            r.pole.assign(static_cast<std::size_t>(-f.lowest()), rat(0));
            for (long e = f.lowest(); e < 0; ++e) r.pole[static_cast<std::size_t>(-e) - 1] = f.coeff(e);
        }
        return r;
    }

    /// Taylor expansion at x = 0 through order n_max, using
    /// 1/(x-2)^j = (-1)^j 2^{-j} sum_n binom(n+j-1, j-1) (x/2)^n.
    Series taylor(int n_max) const {
        Series s = Series::from_poly(poly_part, n_max);
        for (std::size_t i = 0; i < pole.size(); ++i) {
            if (pole[i] == 0) continue;
            const long j = static_cast<long>(i) + 1;
            const Rat front = pole[i] * pow_rat(rat(-2), -j);
            for (int n = 0; n <= n_max; ++n) {
                const Rat b = rat(binomial(static_cast<unsigned long>(n + j - 1), static_cast<unsigned long>(j - 1)), Int(1));
                s.mutable_coeff(n) += front * b * pow_rat(rat(2), -n);
            }
        }
        return s;
    }

    bool operator==(const RationalAnsatz& o) const {
        if (!(poly_part == o.poly_part)) return false;
        const int jmax = std::max(pole_order(), o.pole_order());
        for (int j = 1; j <= jmax; ++j)
            if (pole_coeff(j) != o.pole_coeff(j)) return false;
        return true;
    }
};

inline std::string to_string(const RationalAnsatz& f) {
    std::string out = to_string(f.poly_part, "x");
    for (int j = 1; j <= f.pole_order(); ++j) {
        const Rat c = f.pole_coeff(j);
        if (c == 0) continue;
        out += " + (" + to_string(c) + ")/(x-2)^" + std::to_string(j);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Base level and its identities.
// ---------------------------------------------------------------------------

/// B_0 = 1/(1 - x/2)^2 - 1 = 4/(x-2)^2 - 1.
inline RationalAnsatz base_level() {
    RationalAnsatz r;
    r.poly_part = Poly::constant(rat(-1));
    r.pole = {rat(0), rat(4)};
    return r;
}

/// Closed base row: coefficient of x^n is (n+1)/2^n for n >= 1, zero at n=0.
inline Series base_level_series(int n_max) {
    Series s(n_max);
    for (int n = 1; n <= n_max; ++n) s.mutable_coeff(n) = rat(n + 1) * pow_rat(rat(2), -n);
    return s;
}

/// The scaling family of the parameter-free equation, written through
/// 1 + B = 2c/(1 - c x)^2; the unique member with B = O(x) has c = 1/2 and
/// reproduces the base row.
inline Series integrable_family(const Rat& c, int n_max) {
    Series den(n_max);
    den.mutable_coeff(0) = rat(1);
    if (n_max >= 1) den.mutable_coeff(1) = -c;
    Series inv_sq = (den * den).inverse();
    return rat(2) * c * inv_sq - Series::constant(rat(1), n_max);
}

/// The base level solves  delta^2 ln(1+B_0) = x (1+B_0)  with delta = x d/dx
/// (the right-hand side must carry the full 1 + B_0: the master equation is
/// (delta^2 + s) U = x(1+U)^3 + (delta U)^2 - U delta^2 U, and dividing by
/// (1+U)^2 puts x(1+U) on the right at level zero).  Checked through order
/// n_max via delta ln f = (delta f)/f.
inline bool base_identity_check(int n_max) {
    const Series b0 = base_level_series(n_max);
    const Series one_plus = Series::constant(rat(1), n_max) + b0;
    const Series lhs = (b0.euler_delta() / one_plus).euler_delta();
    return lhs == one_plus.shifted_up(1);
}

// ---------------------------------------------------------------------------
// Tower rows from the exact table.
// ---------------------------------------------------------------------------

/// Coefficient of s^k in the Taylor expansion of u_{2n}(s) at s = 0.
inline Rat b_series_from_table(const CoeffTable& table, int k, int n) {
    if (k < 0) throw std::domain_error("b_series_from_table: negative order");
    return table.u(n).taylor_at(rat(0), k)[static_cast<std::size_t>(k)];
}

/// The level-k row as a series in x through the table's range.
inline Series b_table_series(const CoeffTable& table, int k, int n_max) {
    if (n_max > table.n_max()) throw std::domain_error("b_table_series: order beyond the table");
    Series s(n_max);
    for (int n = 1; n <= n_max; ++n) s.mutable_coeff(n) = b_series_from_table(table, k, n);
    return s;
}

// ---------------------------------------------------------------------------
// Partition sums.  A partition is stored in multiplicity form with strictly
// decreasing part sizes: parts = {(i_1, n_1), (i_2, n_2), ...}, i_1 > i_2 > ...
// ---------------------------------------------------------------------------

struct Partition {
    std::vector<std::pair<long, long>> parts;  // (part size, multiplicity)
    long total_multiplicity() const {
        long m = 0;
        for (const auto& [i, n] : parts) m += n;
        return m;
    }
    /// prod n_j! over the multiplicities.
    Int multiplicity_factorial() const {
        Int f = 1;
        for (const auto& [i, n] : parts) f *= factorial(static_cast<unsigned long>(n));
        return f;
    }
};

namespace detail {
inline void gen_partitions(long remaining, long max_part, std::vector<std::pair<long, long>>& cur,
                           std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(Partition{cur});
        return;
    }
    for (long p = std::min(max_part, remaining); p >= 1; --p) {
        for (long c = 1; c * p <= remaining; ++c) {
            cur.emplace_back(p, c);
            gen_partitions(remaining - c * p, p - 1, cur, out);
            cur.pop_back();
        }
    }
}
}  // namespace detail

/// All partitions of `total` with parts bounded by `max_part` (the empty
/// partition when total = 0; none when total >= 1 and max_part = 0).
inline std::vector<Partition> partitions_with_max_part(long total, long max_part) {
    std::vector<Partition> out;
    if (total < 0) return out;
    std::vector<std::pair<long, long>> cur;
    detail::gen_partitions(total, max_part, cur, out);
    return out;
}

// ---------------------------------------------------------------------------
// The recurrence right-hand side.  With g = 1/(1+B_0) = (1-x/2)^2 = t^2/4,
//
//   delta^2(B_k g) - x B_k
//     = sum_{partitions of k, parts <= k-1} (-1)^m ((m-1)!/prod n_j!)
//           delta^2( prod B_{i_j}^{n_j} g^m )
//     + sum_{partitions of k-1} (-1)^m (m!/prod n_j!)
//           (m - B_0) g^{m+2} prod B_{i_j}^{n_j},
//
// m = sum n_j.  Dividing the right-hand side by x(1-x/2) = -t(t+2)/2 yields
// the normalized operator form used by the solver.
// ---------------------------------------------------------------------------

namespace detail {
/// prod over the partition of levels[i]^n (levels[0] is the base; only
/// indices >= 1 appear in the partitions).
inline LaurentAtTwo partition_product(const std::vector<LaurentAtTwo>& levels, const Partition& part) {
    LaurentAtTwo prod = LaurentAtTwo::monomial(rat(1), 0);
    for (const auto& [i, n] : part.parts) {
        if (i >= static_cast<long>(levels.size()))
            throw std::domain_error("partition_product: level not yet computed");
        prod = prod * levels[static_cast<std::size_t>(i)].pow(static_cast<unsigned long>(n));
    }
    return prod;
}

inline Series partition_product(const std::vector<Series>& levels, const Partition& part) {
    if (levels.empty()) throw std::domain_error("partition_product: no levels");
    Series prod = Series::constant(rat(1), levels[0].order());
    for (const auto& [i, n] : part.parts) {
        if (i >= static_cast<long>(levels.size()))
            throw std::domain_error("partition_product: level not yet computed");
        prod = prod * levels[static_cast<std::size_t>(i)].pow(static_cast<unsigned long>(n));
    }
    return prod;
}
}  // namespace detail

/// Unnormalized right-hand side (the two partition sums) in the exact Laurent
/// algebra; levels[0..k-1] must already be computed.
inline LaurentAtTwo recurrence_rhs_laurent(const std::vector<LaurentAtTwo>& levels, int k) {
    if (k < 1) throw std::domain_error("recurrence_rhs_laurent: k must be >= 1");
    LaurentAtTwo acc;
    for (const Partition& part : partitions_with_max_part(k, k - 1)) {
        const long m = part.total_multiplicity();
        const Rat weight = ((m % 2) ? rat(-1) : rat(1)) *
                           rat(factorial(static_cast<unsigned long>(m - 1)), part.multiplicity_factorial());
        const LaurentAtTwo f =
            detail::partition_product(levels, part) * LaurentAtTwo::monomial(pow_rat(rat(4), -m), 2 * m);
        acc = acc + weight * f.euler().euler();
    }
    const LaurentAtTwo b0 = levels.at(0);
    for (const Partition& part : partitions_with_max_part(k - 1, k - 1)) {
        const long m = part.total_multiplicity();
        const Rat weight = ((m % 2) ? rat(-1) : rat(1)) *
                           rat(factorial(static_cast<unsigned long>(m)), part.multiplicity_factorial());
        const LaurentAtTwo g_pow = LaurentAtTwo::monomial(pow_rat(rat(4), -(m + 2)), 2 * (m + 2));
        const LaurentAtTwo f =
            (LaurentAtTwo::monomial(rat(m), 0) - b0) * g_pow * detail::partition_product(levels, part);
        acc = acc + weight * f;
    }
    return acc;
}

/// The same two partition sums evaluated in the truncated-series algebra
/// (for checking levels only known as series).
inline Series recurrence_rhs_series(const std::vector<Series>& levels, int k) {
    if (k < 1 || levels.empty()) throw std::domain_error("recurrence_rhs_series: bad arguments");
    const int order = levels[0].order();
    const Series g = Series::from_poly(Poly(std::vector<Rat>{rat(1), rat(-1, 2)}).pow(2), order);
    Series acc(order);
    for (const Partition& part : partitions_with_max_part(k, k - 1)) {
        const long m = part.total_multiplicity();
        const Rat weight = ((m % 2) ? rat(-1) : rat(1)) *
                           rat(factorial(static_cast<unsigned long>(m - 1)), part.multiplicity_factorial());
        const Series f = detail::partition_product(levels, part) * g.pow(static_cast<unsigned long>(m));
        acc = acc + weight * f.euler_delta().euler_delta();
    }
    for (const Partition& part : partitions_with_max_part(k - 1, k - 1)) {
        const long m = part.total_multiplicity();
        const Rat weight = ((m % 2) ? rat(-1) : rat(1)) *
                           rat(factorial(static_cast<unsigned long>(m)), part.multiplicity_factorial());
        const Series f = (Series::constant(rat(m), order) - levels[0]) *
                         g.pow(static_cast<unsigned long>(m + 2)) * detail::partition_product(levels, part);
        acc = acc + weight * f;
    }
    return acc;
}

/// Does the level-k series satisfy the recurrence?  levels[0..k] as series.
inline bool recurrence_series_check(const std::vector<Series>& levels, int k) {
    if (k < 1 || static_cast<int>(levels.size()) <= k) throw std::domain_error("recurrence_series_check: bad arguments");
    const int order = levels[0].order();
    const Series g = Series::from_poly(Poly(std::vector<Rat>{rat(1), rat(-1, 2)}).pow(2), order);
    const Series lhs =
        (levels[static_cast<std::size_t>(k)] * g).euler_delta().euler_delta() -
        levels[static_cast<std::size_t>(k)].shifted_up(1);
    return lhs == recurrence_rhs_series(levels, k);
}

// ---------------------------------------------------------------------------
// The linear operator solver.  With L[y] = x(1-x/2) y'' + (1-5x/2) y' - 2y:
//
//   L[x^m]        = m^2 x^{m-1} - ((m+2)^2/2) x^m,
//   L[(x-2)^-j]   = -((j-2)^2/2) (x-2)^-j + j(3-j) (x-2)^-(j+1),
//
// so the polynomial sector is triangular with nonzero diagonal, and the pole
// sector couples order j to j-1 with a one-dimensional kernel spanned by
// (x+2)/(x-2)^3 = 1/(x-2)^2 + 4/(x-2)^3.  The free kernel coefficient is
// pinned by y(0) = 0.
// ---------------------------------------------------------------------------

namespace detail {
/// Apply the operator in the exact Laurent algebra (used to re-verify every
/// solution before returning it).
inline LaurentAtTwo apply_pole_operator(const LaurentAtTwo& y) {
    // x(1-x/2) = -(t^2 + 2t)/2,  1 - 5x/2 = -4 - 5t/2.
    const LaurentAtTwo lead = LaurentAtTwo::monomial(rat(-1, 2), 2) + LaurentAtTwo::monomial(rat(-1), 1);
    const LaurentAtTwo mid = LaurentAtTwo::monomial(rat(-4), 0) + LaurentAtTwo::monomial(rat(-5, 2), 1);
    const LaurentAtTwo d1 = y.derivative();
    return lead * d1.derivative() + mid * d1 - rat(2) * y;
}
}  // namespace detail

/// Solve  x(1-x/2) y'' + (1-5x/2) y' - 2y = rhs,  y(0) = 0, for y rational
/// with poles only at x = 2.  Throws std::runtime_error when no such solution
/// exists within the grown ansatz bounds.
inline RationalAnsatz solve_pole_operator(const RationalAnsatz& rhs) {
    const auto no_solution = [] {
        return std::runtime_error("no rational solution at stated ansatz bounds");
    };

    // Polynomial sector: back-substitute from the top degree.
    const Poly& R = rhs.poly_part;
    const long D = R.degree();
    std::vector<Rat> c(static_cast<std::size_t>(std::max<long>(D + 1, 0)), rat(0));
    for (long m = D; m >= 0; --m) {
        const Rat above = (m + 1 <= D) ? rat((m + 1) * (m + 1)) * c[static_cast<std::size_t>(m + 1)] : rat(0);
        c[static_cast<std::size_t>(m)] = (above - R[static_cast<std::size_t>(m)]) * rat(2, (m + 2) * (m + 2));
    }
    const Poly y_poly = Poly(std::move(c));

    // Pole sector: coefficients affine in the free kernel parameter.
    struct Aff {
        Rat a, b;  // a + b * t_free
    };
    const int P = rhs.pole_order();
    auto rho = [&](long j) { return rhs.pole_coeff(static_cast<int>(j)); };

    std::vector<Aff> pole;  // pole[j-1] multiplies (x-2)^{-j}
    pole.push_back({rat(-2) * rho(1), rat(0)});
    if (rat(2) * pole[0].a != rho(2)) throw no_solution();
    pole.push_back({rat(0), rat(1)});
    pole.push_back({rat(-2) * rho(3), rat(4)});
    long J = 3;
    const long J_limit = std::max<long>(3, P - 1) + 8;
    while (true) {
        // Top consistency: J(3-J) pole[J] must equal rho(J+1), and every
        // residual rho beyond J+1 must already be covered.
        const Rat mult = rat(J * (3 - J));
        if (mult * pole[static_cast<std::size_t>(J) - 1].b == 0 &&
            mult * pole[static_cast<std::size_t>(J) - 1].a == rho(J + 1) && J + 1 >= P)
            break;
        if (J >= J_limit) throw no_solution();
        ++J;
        const Rat lower_mult = rat((J - 1) * (4 - J));
        const Rat scale = rat(2, (J - 2) * (J - 2));
        const Aff& prev = pole[static_cast<std::size_t>(J) - 2];
        pole.push_back({(lower_mult * prev.a - rho(J)) * scale, lower_mult * prev.b * scale});
    }

    // Pin the kernel parameter by y(0) = 0.
    Rat aff_a = y_poly.eval(rat(0));
    Rat aff_b = rat(0);
    for (long j = 1; j <= J; ++j) {
        const Rat w = pow_rat(rat(-2), -j);
        aff_a += pole[static_cast<std::size_t>(j) - 1].a * w;
        aff_b += pole[static_cast<std::size_t>(j) - 1].b * w;
    }
    if (aff_b == 0) throw std::logic_error("solve_pole_operator: kernel does not move the value at 0");
    const Rat t_free = -aff_a / aff_b;

    RationalAnsatz y;
    y.poly_part = y_poly;
    y.pole.resize(static_cast<std::size_t>(J));
    for (long j = 1; j <= J; ++j) {
        const Aff& p = pole[static_cast<std::size_t>(j) - 1];
        y.pole[static_cast<std::size_t>(j) - 1] = p.a + p.b * t_free;
    }
    while (!y.pole.empty() && y.pole.back() == 0) y.pole.pop_back();

    if (detail::apply_pole_operator(y.laurent()) != rhs.laurent())
        throw std::logic_error("solve_pole_operator: verification failed");
    return y;
}

/// Normalized right-hand side of the level-k operator equation (the partition
/// sums divided by x(1-x/2)).
inline RationalAnsatz rational_rhs(int k);

/// Levels 0..k_max in closed rational form, each solved from the operator and
/// re-verified exactly.
inline std::vector<RationalAnsatz> b_tower(int k_max) {
    if (k_max < 0) throw std::domain_error("b_tower: k_max must be >= 0");
    std::vector<LaurentAtTwo> levels{base_level().laurent()};
    std::vector<RationalAnsatz> out{base_level()};
    for (int k = 1; k <= k_max; ++k) {
        const LaurentAtTwo raw = recurrence_rhs_laurent(levels, k);
        const LaurentAtTwo normalized = (raw * rat(-2)).shifted_pow(-1).divided_by_x();
        const RationalAnsatz sol = solve_pole_operator(RationalAnsatz::from_laurent(normalized));
        levels.push_back(sol.laurent());
        out.push_back(sol);
    }
    return out;
}

inline RationalAnsatz rational_rhs(int k) {
    if (k < 1) throw std::domain_error("rational_rhs: k must be >= 1");
    std::vector<LaurentAtTwo> levels;
    for (const RationalAnsatz& f : b_tower(k - 1)) levels.push_back(f.laurent());
    const LaurentAtTwo raw = recurrence_rhs_laurent(levels, k);
    return RationalAnsatz::from_laurent((raw * rat(-2)).shifted_pow(-1).divided_by_x());
}

/// The level-k generating function in closed rational form.
inline RationalAnsatz solve_b_ode(int k) {
    if (k < 1) throw std::domain_error("solve_b_ode: k must be >= 1");
    return b_tower(k).back();
}

// ---------------------------------------------------------------------------
// Closed forms for the rows and for the junior numerator coefficients.
// ---------------------------------------------------------------------------

/// u_{2n}^k for k <= 2: the generic closed form with its small-n exceptions.
inline Rat closed_forms_u2nk(int k, long n) {
    if (n < 1) throw std::domain_error("closed_forms_u2nk: n must be >= 1");
    const Rat half_pow = pow_rat(rat(2), -n);
    switch (k) {
        case 0:
            return rat(n + 1) * half_pow;
        case 1: {
            if (n == 1) return rat(-1);
            if (n == 2) return rat(-15, 16);
            return rat(-61, 144) * rat((n + 1) * (n + 1)) * half_pow;
        }
        case 2: {
            switch (n) {
                case 1: return rat(1);
                case 2: return rat(63, 64);
                case 3: return rat(2917, 2592);
                case 4: return rat(335485, 331776);
                case 5: return rat(382273, 460800);
                default:
                    // (61^2/12^4) (n+1)^2/2^{n+1} (n + 2^2 29^2 89 / (5^2 61^2))
                    return rat(3721, 20736) * rat((n + 1) * (n + 1)) * half_pow * rat(1, 2) *
                           (rat(n) + rat(299396, 93025));
            }
        }
        default:
            throw std::domain_error("closed_forms_u2nk: no closed form at this level");
    }
}

/// p_k(n) for k <= 2: junior coefficients of the structure numerator.  The
/// levels below the numerator degree are identically zero (k=1: n <= 2,
/// k=2: n <= 4), and p_2(5) is an isolated special value.
inline Rat closed_forms_pk(int k, long n) {
    if (n < 1) throw std::domain_error("closed_forms_pk: n must be >= 1");
    const StructurePrediction st = predicted_structure(n);
    Rat prod = rat(1);
    Rat sum_k2 = rat(0);
    Rat sum_k4 = rat(0);
    for (const auto& [kk, e] : st.exponents) {
        prod *= pow_rat(rat(kk), 2 * static_cast<long>(e));
        sum_k2 += rat(e) * rat(1, kk * kk);
        sum_k4 += rat(e) * rat(1, kk * kk) * rat(1, kk * kk);
    }
    const Rat half_pow = pow_rat(rat(2), -n);
    switch (k) {
        case 0:
            return rat(n + 1) * half_pow * prod;
        case 1: {
            if (n <= 2) return rat(0);
            const Rat bracket = sum_k2 * rat(1, n + 1) - rat(61, 144);
            return rat((n + 1) * (n + 1)) * half_pow * bracket * prod;
        }
        case 2: {
            if (n <= 4) return rat(0);
            if (n == 5) return rat(3345);
            const Rat bracket = sum_k2 * rat(1, n + 1) - rat(61, 144);
            const Rat inner = bracket * bracket + rat(206371, 518400) * rat(1, n + 1) -
                              sum_k4 * rat(1, (n + 1) * (n + 1));
            return rat(n + 1) * rat((n + 1) * (n + 1)) * half_pow * rat(1, 2) * prod * inner;
        }
        default:
            throw std::domain_error("closed_forms_pk: no closed form at this level");
    }
}

}  // namespace dp3
