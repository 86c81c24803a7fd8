#pragma once
// Partial-fraction residues of the exact Taylor coefficients.
//
// Every coefficient u_{2n} is a rational function of s = a^2 whose poles sit
// at s = -k^2.  This header extracts the residue data gamma_{k,i}(n) (the
// coefficient of 1/(s+k^2)^i), extends it to "junior" indices i <= 0 through
// the Laurent expansion about s = -k^2, and rebuilds the residue columns from
// generating functions: rescaling the master series by z = x / (s+k^2)^{1/(k+1)}
// turns each residue column into the Taylor coefficients of a rational
// function of z, the levels of which are produced here by solving the
// associated second-order linear recurrences exactly.
//
// Also provided: closed forms for the first two pole families (k = 1 and
// k = 2), the leading coefficients C_{1,k} of the base level for every k,
// weighted sum rules connecting the residues to the small-parameter rows,
// a divisor-count audit for the total number of partial fractions, and a
// CSV export of the residue table.

#include <dp3/coeff_table.hpp>
#include <dp3/poly.hpp>
#include <dp3/ratfunc.hpp>
#include <dp3/rational.hpp>
#include <dp3/series.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dp3 {

// ---------------------------------------------------------------------------
// Residue table
// ---------------------------------------------------------------------------

/// Laurent data of the exact coefficients about their poles.
///
/// gamma(k, i, n) is the coefficient of (s + k^2)^{-i} in the expansion of
/// u_{2n} about s = -k^2.  For i >= 1 these are the partial-fraction
/// residues (zero once i exceeds the pole order); for i <= 0 they continue
/// the expansion into its regular part, down to i = -junior_depth.
class ResidueTable {
  public:
    explicit ResidueTable(const CoeffTable& table, int junior_depth = 8)
        : table_(&table), junior_depth_(junior_depth) {
        if (junior_depth < 0)
            throw std::invalid_argument("ResidueTable: junior_depth must be nonnegative");
    }

    const CoeffTable& coeffs() const { return *table_; }
    long n_max() const { return table_->n_max(); }
    int junior_depth() const { return junior_depth_; }

    /// Exponent of (s + k^2) in the exact denominator of u_{2n}.
    long pole_order(long k, long n) const {
        check_args(k, n);
        return table_->u(static_cast<int>(n)).den().exponent(k);
    }

    /// Coefficient of (s + k^2)^{-i} in the expansion of u_{2n} at s = -k^2.
    Rat gamma(long k, long i, long n) const {
        check_args(k, n);
        if (-i > junior_depth_)
            throw std::out_of_range("ResidueTable::gamma: index below stored junior depth");
        const auto& [lo, coeff] = laurent(k, n);
        const long idx = -i - lo;
        if (idx < 0 || idx >= static_cast<long>(coeff.size())) return rat(0);
        return coeff[static_cast<std::size_t>(idx)];
    }

  private:
    void check_args(long k, long n) const {
        if (k < 1) throw std::invalid_argument("ResidueTable: pole family k must be >= 1");
        if (n < 1 || n > table_->n_max())
            throw std::invalid_argument("ResidueTable: coefficient index outside the table");
    }

    const std::pair<int, std::vector<Rat>>& laurent(long k, long n) const {
        std::lock_guard<std::mutex> hold(mu_);
        auto key = std::make_pair(k, n);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, table_->u(static_cast<int>(n)).laurent_at_factor(k, junior_depth_)).first;
        return it->second;
    }

    const CoeffTable* table_;
    int junior_depth_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<long, long>, std::pair<int, std::vector<Rat>>> cache_;
};

// ---------------------------------------------------------------------------
// Closed residue families for the first two pole columns
// ---------------------------------------------------------------------------

/// Closed form for gamma_{1, n_1 - i_offset}(n), the residue at distance
/// i_offset below the deepest pole order n_1 = floor((n+1)/2) of the first
/// pole family.
///
///   offset 0: n = 2k-1 -> k/8^{k-1};              n = 2k -> (2k+1)^2/(9*8^{k-1}).
///   offset 1: four pinned low values, then for n = 2k+1 (k >= 2)
///               (128k-3)(k+1)^2 / (162*8^k)
///             and for n = 2k (k >= 3)
///               (3200k^2-6625k-582)(2k+1)^2 / (109350*8^{k-1}).
///   offset 2: odd n only; four pinned low values, then for n = 2k+1 (k >= 4)
///               (13107200k^3-41164800k^2-22621088k+3402171)(k+1)^2 / (1968300*8^{k+2}).
///
/// The two general odd-row formulas are normalized against the exact table
/// (the index convention pins n = 2k+1, matching the listed low values).
inline Rat closed_residue_k1(int i_offset, long n) {
    if (n < 1) throw std::domain_error("closed_residue_k1: n must be >= 1");
    switch (i_offset) {
        case 0: {
            if (n % 2 == 1) {
                const long k = (n + 1) / 2;
                return rat(k) / pow_rat(rat(8), k - 1);
            }
            const long k = n / 2;
            return rat((2 * k + 1) * (2 * k + 1)) / (rat(9) * pow_rat(rat(8), k - 1));
        }
        case 1: {
            if (n == 1) return rat(0);
            if (n == 2) return rat(-1, 3);
            if (n == 3) return rat(37, 96);
            if (n == 4) return rat(-17, 576);
            if (n % 2 == 1) {
                const long k = (n - 1) / 2;  // n = 2k+1, k >= 2
                return rat(128 * k - 3) * rat((k + 1) * (k + 1)) /
                       (rat(162) * pow_rat(rat(8), k));
            }
            const long k = n / 2;  // n = 2k, k >= 3
            return rat(3200 * k * k - 6625 * k - 582) * rat((2 * k + 1) * (2 * k + 1)) /
                   (rat(109350) * pow_rat(rat(8), k - 1));
        }
        case 2: {
            if (n % 2 == 0)
                throw std::domain_error("closed_residue_k1: offset 2 covers odd n only");
            if (n == 1) return rat(0);
            if (n == 3) return rat(-431, 2304);
            if (n == 5) return rat(-62743, 552960);
            if (n == 7) return rat(-222359, 11059200);
            const long k = (n - 1) / 2;  // n = 2k+1, k >= 4
            const Rat cubic = rat(13107200) * rat(k * k * k) - rat(41164800) * rat(k * k) -
                              rat(22621088) * rat(k) + rat(3402171);
            return cubic * rat((k + 1) * (k + 1)) / (rat(1968300) * pow_rat(rat(8), k + 2));
        }
        default:
            throw std::domain_error("closed_residue_k1: offset must be 0, 1, or 2");
    }
}

/// Closed form for the second pole family, organized by the remainder of n
/// modulo 3: n = 3p + remainder.
///
///   remainder 2: gamma_{2,p+1}(3p+2) = (-1)^{p+1}(p+1)/18^p          (p >= 0)
///   remainder 0: gamma_{2,p}(3p)     = (-1)^p 3(3p+1)^2/(4*18^p)     (p >= 1)
///   remainder 1: gamma_{2,0}(1) = -1/3, gamma_{2,1}(4) = -2/27, then
///                gamma_{2,p}(3p+1) = (-1)^p 9(50p-31)(3p+2)^2/(3200*18^p)  (p >= 2)
inline Rat closed_residue_k2(int remainder, long p) {
    if (p < 0) throw std::domain_error("closed_residue_k2: p must be >= 0");
    switch (remainder) {
        case 2:
            return pow_rat(rat(-1), p + 1) * rat(p + 1) / pow_rat(rat(18), p);
        case 0:
            if (p < 1) throw std::domain_error("closed_residue_k2: remainder 0 needs p >= 1");
            return pow_rat(rat(-1), p) * rat(3 * (3 * p + 1) * (3 * p + 1)) /
                   (rat(4) * pow_rat(rat(18), p));
        case 1:
            if (p == 0) return rat(-1, 3);
            if (p == 1) return rat(-2, 27);
            return pow_rat(rat(-1), p) * rat(9 * (50 * p - 31)) *
                   rat((3 * p + 2) * (3 * p + 2)) / (rat(3200) * pow_rat(rat(18), p));
        default:
            throw std::domain_error("closed_residue_k2: remainder must be 0, 1, or 2");
    }
}

// ---------------------------------------------------------------------------
// Leading base-level coefficients C_{1,k}
// ---------------------------------------------------------------------------

/// Leading coefficient of the base level of the pole-family tower, measured
/// from the table: the deepest residue of u_{2k} divided by 2(k+1)^2.
inline Rat c1k_measured(const ResidueTable& residues, long k) {
    return residues.gamma(k, 1, k) / rat(2 * (k + 1) * (k + 1));
}

/// Conjectured product formula (-k)^{k-1} / (2^k (k+1)^2 ((k-1)!)^3).
inline Rat c1k_conjectured(long k) {
    if (k < 1) throw std::domain_error("c1k_conjectured: k must be >= 1");
    const Rat fact3 = pow_rat(rat(factorial(static_cast<unsigned long>(k - 1)), Int(1)), 3);
    return pow_rat(rat(-k), k - 1) / (pow_rat(rat(2), k) * rat((k + 1) * (k + 1)) * fact3);
}

/// Measured C_{1,k} for k = 1..k_max; every value is checked against the
/// product formula, which has never failed on the exact table.
inline std::vector<Rat> c1k_determination(const ResidueTable& residues, long k_max) {
    std::vector<Rat> out;
    for (long k = 1; k <= k_max; ++k) {
        Rat measured = c1k_measured(residues, k);
        if (measured != c1k_conjectured(k))
            throw std::logic_error("c1k_determination: measured value defies the product formula at k=" +
                                   std::to_string(k));
        out.push_back(std::move(measured));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Index maps between tower levels and residue columns
// ---------------------------------------------------------------------------

/// Which residue appears as the z^exponent Taylor coefficient of tower level
/// `level` in pole family k?  Returns the residue index i of
/// gamma_{k,i}(exponent), or nothing when the exponent lies outside the
/// level's support class modulo k+1.
///
/// Levels with level == -1 (mod k+1) collect the columns of n == k (mod k+1),
/// where the pole order is one higher than in the neighbouring classes; all
/// other levels collect the class congruent to their own remainder.
inline std::optional<long> residue_slot_index(long k, long level, long exponent) {
    if (k < 1) throw std::invalid_argument("residue_slot_index: k must be >= 1");
    if (level < -1) throw std::invalid_argument("residue_slot_index: level must be >= -1");
    if (exponent < 1) return std::nullopt;
    if ((level + 1) % (k + 1) == 0) {
        const long i = (level + 1) / (k + 1);
        if (exponent % (k + 1) != k) return std::nullopt;
        const long p = (exponent - k) / (k + 1);
        return p + 1 - i;
    }
    const long q = level % (k + 1);
    const long i = level / (k + 1);
    if (exponent % (k + 1) != q) return std::nullopt;
    const long p = (exponent - q) / (k + 1);
    return p - i;
}

// ---------------------------------------------------------------------------
// Tower of generating levels about a pole
// ---------------------------------------------------------------------------

/// One level of the tower: a rational function
///   numerator(z) / (1 - c z^{k+1})^{denom_power}.
struct VFunction {
    long k = 1;
    long level = 0;
    Poly numerator;
    Rat c;
    long denom_power = 0;

    /// Denominator expanded as a polynomial.
    Poly denominator() const {
        const Poly base = Poly::constant(rat(1)) - Poly::monomial(c, static_cast<std::size_t>(k + 1));
        return base.pow(static_cast<unsigned long>(denom_power));
    }

    Series taylor(int depth) const {
        const Series num = Series::from_poly(numerator, depth);
        const Series den = Series::from_poly(denominator(), depth);
        return num * den.inverse();
    }

    /// Equality with an arbitrary rational form given as num/den, checked by
    /// cross-multiplication of exact polynomials.
    bool equals(const Poly& num, const Poly& den) const {
        return numerator * den == num * denominator();
    }
};

inline std::string to_string(const VFunction& v) {
    std::ostringstream out;
    out << "(" << to_string(v.numerator, "z") << ") / (1 - (" << to_string(v.c)
        << ") z^" << (v.k + 1) << ")^" << v.denom_power;
    return out.str();
}

/// The base level satisfies the quadratic identity
///   v * delta^2 v - (delta v)^2 - z v^3 = 0,   delta = z d/dz,
/// exactly as rational functions.  Verified here by clearing denominators.
inline bool v_base_identity(long k, const Rat& c) {
    const Poly num = Poly::monomial(rat(2 * (k + 1) * (k + 1)) * c, static_cast<std::size_t>(k));
    const Poly den = Poly::constant(rat(1)) - Poly::monomial(c, static_cast<std::size_t>(k + 1));
    const Poly z = Poly::monomial(rat(1), 1);
    // delta(N / den^e) = (delta N * den + e (k+1) c z^{k+1} N) / den^{e+1}
    auto delta_num = [&](const Poly& n_part, long e) {
        const Poly euler = z * n_part.derivative();
        return euler * den + rat(e) * rat(k + 1) * c * Poly::monomial(rat(1), static_cast<std::size_t>(k + 1)) * n_part;
    };
    const Poly d1 = delta_num(num, 2);   // delta v   over den^3
    const Poly d2 = delta_num(d1, 3);    // delta^2 v over den^4
    // Common denominator den^6:
    const Poly lhs = num * d2 - d1 * d1 - z * num * num * num;
    return lhs.is_zero();
}

/// Tower of levels about the pole family k, built by exact series solves of
/// the level recurrences.  The unknown level enters through the linear
/// operator
///   L[v] = v_b delta^2 v - 2 (delta v_b)(delta v) + (delta^2 v_b - 3 z v_b^2) v,
/// v_b the base level; the inhomogeneity collects every lower level through
/// the cubic master equation.  L is triangular on monomials with diagonal
/// 2(k+1)^2 c (j-k)^2, so each level is solved coefficient-by-coefficient;
/// the double zero at j = k leaves one free constant, pinned by the junior
/// Laurent data of u_{2k} (zero in the support classes that omit z^k), and
/// imposes one consistency condition whose failure would force a logarithm.
/// Each solved level is then condensed back to a rational function with
/// denominator (1 - c z^{k+1})^J, growing J from level+3 until the numerator
/// terminates.
class VTower {
  public:
    VTower(const ResidueTable& residues, long k, long top_level, int depth)
        : k_(k), top_level_(top_level), depth_(depth) {
        if (k < 1) throw std::invalid_argument("VTower: pole family k must be >= 1");
        if (top_level < -1) throw std::invalid_argument("VTower: top level must be >= -1");
        if (depth < k + 1) throw std::invalid_argument("VTower: depth too small");
        if (residues.n_max() < k)
            throw std::invalid_argument("VTower: table too shallow to expose the pole family");

        c_ = residues.gamma(k, 1, k) / rat(2 * (k + 1) * (k + 1));
        if (c_ == 0) throw std::logic_error("VTower: leading residue vanished");

        // Working depth: each solved level loses k orders of validity.
        const int work = depth + static_cast<int>((top_level + 1) * k) + static_cast<int>(k) + 8;

        // Base level as an exact series.
        {
            const Poly num = Poly::monomial(rat(2 * (k + 1) * (k + 1)) * c_,
                                            static_cast<std::size_t>(k));
            const Poly den = Poly::constant(rat(1)) -
                             Poly::monomial(c_, static_cast<std::size_t>(k + 1));
            Series base = Series::from_poly(num, work) *
                          Series::from_poly(den.pow(2), work).inverse();
            push_level(std::move(base));
            functions_.push_back(VFunction{k_, -1,
                                           Poly::monomial(rat(2 * (k + 1) * (k + 1)) * c_,
                                                          static_cast<std::size_t>(k)),
                                           c_, 2});
        }

        const Series& base = series_[0];
        const Rat diag_unit = rat(2 * (k + 1) * (k + 1)) * c_;
        // L[z^j] = z^j (j^2 A - 2j B + C) with the profiles below.
        const Series a_prof = base;
        const Series b_prof = base.euler_delta();
        const Series c_prof = b_prof.euler_delta() - rat(3) * (base * base).shifted_up(1);

        for (long n = 0; n <= top_level; ++n) {
            const Series rhs = -inhomogeneity(n);
            const int solve_depth = rhs.order() - static_cast<int>(k);
            if (solve_depth < depth)
                throw std::logic_error("VTower: working depth exhausted");

            // Pin for the free coefficient at z^k.
            Rat pin = rat(0);
            if ((n + 1) % (k + 1) == 0) {
                const long i = (n + 1) / (k + 1);
                pin = residues.gamma(k, 1 - i, k);
            }

            for (int e = 0; e <= static_cast<int>(k); ++e)
                if (rhs[e] != 0)
                    throw std::logic_error("VTower: forcing term below the operator's range at level " +
                                           std::to_string(n));

            Series v(solve_depth);
            Series image(rhs.order());  // L[v] accumulated so far
            for (int j = 1; j <= solve_depth; ++j) {
                const Rat target = rhs[j + static_cast<int>(k)] - image[j + static_cast<int>(k)];
                Rat coeff;
                if (j == k) {
                    if (target != 0)
                        throw std::runtime_error(
                            "VTower: no single-valued solution at level " + std::to_string(n));
                    coeff = pin;
                } else {
                    coeff = target / (diag_unit * rat((j - k) * (j - k)));
                }
                if (coeff == 0) continue;
                v.mutable_coeff(j) = coeff;
                const Series lj = rat(static_cast<long>(j) * j) * a_prof -
                                  rat(2 * static_cast<long>(j)) * b_prof + c_prof;
                image = image + (coeff * lj).shifted_up(j);
            }
            functions_.push_back(condense(v, n));
            push_level(std::move(v));
        }
    }

    long k() const { return k_; }
    long top_level() const { return top_level_; }
    int depth() const { return depth_; }
    const Rat& c() const { return c_; }

    const VFunction& level(long l) const {
        if (l < -1 || l > top_level_) throw std::out_of_range("VTower::level");
        return functions_[static_cast<std::size_t>(l + 1)];
    }

    /// Exact Taylor series of the level, at the requested tower depth.
    Series level_series(long l) const {
        if (l < -1 || l > top_level_) throw std::out_of_range("VTower::level_series");
        return series_[static_cast<std::size_t>(l + 1)].truncated(depth_);
    }

  private:
    void push_level(Series v) {
        d1_.push_back(v.euler_delta());
        d2_.push_back(d1_.back().euler_delta());
        series_.push_back(std::move(v));
    }

    const Series& vs(long idx) const { return series_[static_cast<std::size_t>(idx + 1)]; }
    const Series& d1(long idx) const { return d1_[static_cast<std::size_t>(idx + 1)]; }
    const Series& d2(long idx) const { return d2_[static_cast<std::size_t>(idx + 1)]; }

    /// Everything in the order-(n-1) master equation except the unknown
    /// level n: expanding (delta^2 + t^{k+1} - k^2) V = t z (1+V)^3 +
    /// (delta V)^2 - V delta^2 V in powers of t and keeping levels <= n-1.
    Series inhomogeneity(long n) const {
        Series f = d2(n - 1) - rat(k_ * k_) * vs(n - 1);
        if (n - k_ - 2 >= -1) f = f + vs(n - k_ - 2);
        Series cubic(f.order());
        if (n == 2) cubic = cubic + Series::constant(rat(1), cubic.order());
        if (n - 2 >= -1) cubic = cubic + rat(3) * vs(n - 2);
        for (long i = -1; i <= n - 1; ++i) {
            const long j = n - 2 - i;
            if (j >= -1 && j <= n - 1) cubic = cubic + rat(3) * (vs(i) * vs(j));
        }
        for (long i = -1; i <= n - 1; ++i)
            for (long j = -1; j <= n - 1; ++j) {
                const long l = n - 2 - i - j;
                if (l >= -1 && l <= n - 1) cubic = cubic + vs(i) * vs(j) * vs(l);
            }
        f = f - cubic.shifted_up(1);
        for (long i = -1; i <= n - 1; ++i) {
            const long j = n - 1 - i;
            if (j >= -1 && j <= n - 1) f = f - d1(i) * d1(j) + vs(i) * d2(j);
        }
        return f;
    }

    /// Recover the rational form of a solved level, growing the denominator
    /// power until the numerator terminates with a convincing zero tail.
    VFunction condense(const Series& v, long level) const {
        const Poly den_base = Poly::constant(rat(1)) -
                              Poly::monomial(c_, static_cast<std::size_t>(k_ + 1));
        const int slack = static_cast<int>(k_) + 7;
        for (long j = level + 3; j <= level + 11; ++j) {
            const Series prod =
                v * Series::from_poly(den_base.pow(static_cast<unsigned long>(j)), v.order());
            int top = -1;
            for (int e = 0; e <= prod.order(); ++e)
                if (prod[e] != 0) top = e;
            if (top <= prod.order() - slack) {
                std::vector<Rat> coeff;
                for (int e = 0; e <= top; ++e) coeff.push_back(prod[e]);
                return VFunction{k_, level, Poly(std::move(coeff)), c_, j};
            }
        }
        throw std::runtime_error("VTower: rational reconstruction failed at level " +
                                 std::to_string(level));
    }

    long k_;
    long top_level_;
    int depth_;
    Rat c_;
    std::vector<Series> series_;
    std::vector<Series> d1_;
    std::vector<Series> d2_;
    std::vector<VFunction> functions_;
};

inline VTower v_tower(const ResidueTable& residues, long k, long top_level, int depth) {
    return VTower(residues, k, top_level, depth);
}

// ---------------------------------------------------------------------------
// Weighted residue sums
// ---------------------------------------------------------------------------

/// The three linear sum rules tying the residues of u_{2n} to its values at
/// s = 0:
///   sum_k gamma_{k,1}(n) = 0                                  (n > 1)
///   sum_{k,i} gamma_{k,i}(n)/k^{2i} = (n+1)/2^n               (n >= 1)
///   sum_{k,i} i gamma_{k,i}(n)/k^{2i+2} = (61/144)(n+1)^2/2^n (n >= 3)
struct ResidueSumReport {
    long n = 0;
    Rat first_column_sum;
    Rat value_sum;
    Rat derivative_sum;
    bool first_column_vanishes = false;
    bool value_sum_matches = false;
    bool derivative_sum_matches = false;
};

inline ResidueSumReport residue_sum_relations(const ResidueTable& residues, long n) {
    ResidueSumReport report;
    report.n = n;
    Rat t1 = rat(0), t2 = rat(0), t3 = rat(0);
    for (long k = 1; k <= n; ++k) {
        const long order = residues.pole_order(k, n);
        for (long i = 1; i <= order; ++i) {
            const Rat g = residues.gamma(k, i, n);
            if (i == 1) t1 = t1 + g;
            t2 = t2 + g / pow_rat(rat(k * k), i);
            t3 = t3 + rat(i) * g / pow_rat(rat(k * k), i + 1);
        }
    }
    report.first_column_sum = t1;
    report.value_sum = t2;
    report.derivative_sum = t3;
    report.first_column_vanishes = (n == 1) || t1 == 0;
    report.value_sum_matches = t2 == rat(n + 1) / pow_rat(rat(2), n);
    report.derivative_sum_matches =
        (n < 3) || t3 == rat(61, 144) * rat((n + 1) * (n + 1)) / pow_rat(rat(2), n);
    return report;
}

// ---------------------------------------------------------------------------
// Divisor-count audit
// ---------------------------------------------------------------------------

/// The number of partial fractions of u_{2n} is sum_{k=1}^n n_k with
/// n_k = floor((n+1)/(k+1)); it equals sum_{k=1}^{n+1} d(k) - (n+1) where
/// d is the divisor-count function.  The audit checks this identity exactly
/// for every n <= identity_max and reports how far the divisor summatory
/// function at report_at strays from n ln n + (2*euler_gamma - 1) n,
/// compared with the empirical bound 2.3 (n ln n)^{1/4}.
struct DivisorAuditReport {
    long identity_max = 0;
    bool identity_ok = false;
    long report_at = 0;
    double summatory = 0.0;
    double dirichlet_error = 0.0;
    double remark_bound = 0.0;
    bool within_remark_bound = false;
};

inline DivisorAuditReport divisor_count_audit(long identity_max, long report_at) {
    if (identity_max < 1 || report_at < 2)
        throw std::invalid_argument("divisor_count_audit: ranges too small");
    DivisorAuditReport report;
    report.identity_max = identity_max;
    report.report_at = report_at;

    auto divisor_count = [](long m) {
        long count = 0;
        for (long d = 1; d * d <= m; ++d)
            if (m % d == 0) count += (d * d == m) ? 1 : 2;
        return count;
    };
    bool ok = true;
    long cumulative = divisor_count(1);  // sum_{k<=1} d(k)
    for (long n = 1; n <= identity_max && ok; ++n) {
        cumulative += divisor_count(n + 1);
        long fractions = 0;
        for (long k = 1; k <= n; ++k) fractions += (n + 1) / (k + 1);
        ok = fractions == cumulative - (n + 1);
    }
    report.identity_ok = ok;

    // Summatory divisor function via the harmonic identity sum_j floor(N/j).
    long total = 0;
    for (long j = 1; j <= report_at; ++j) total += report_at / j;
    const double euler_gamma = 0.57721566490153286;
    const double n_real = static_cast<double>(report_at);
    const double main_term = n_real * std::log(n_real) + (2.0 * euler_gamma - 1.0) * n_real;
    report.summatory = static_cast<double>(total);
    report.dirichlet_error = std::abs(static_cast<double>(total) - main_term);
    report.remark_bound = 2.3 * std::pow(n_real * std::log(n_real), 0.25);
    report.within_remark_bound = report.dirichlet_error <= report.remark_bound;
    return report;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

/// CSV dump of the partial-fraction residues, one row per (n, k, i) with the
/// residue split into numerator and denominator columns.
inline std::string residue_csv(const ResidueTable& residues, long n_from, long n_to) {
    if (n_from < 1 || n_to > residues.n_max() || n_from > n_to)
        throw std::invalid_argument("residue_csv: bad range");
    std::ostringstream out;
    out << "n,k,i,numerator,denominator\n";
    for (long n = n_from; n <= n_to; ++n)
        for (long k = 1; k <= n; ++k) {
            const long order = residues.pole_order(k, n);
            for (long i = 1; i <= order; ++i) {
                const Rat g = residues.gamma(k, i, n);
                out << n << ',' << k << ',' << i << ',' << num(g).get_str() << ','
                    << den(g).get_str() << '\n';
            }
        }
    return out.str();
}

}  // namespace dp3
