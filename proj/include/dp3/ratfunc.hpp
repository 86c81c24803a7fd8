#pragma once

// Rational functions of s with denominators kept in the factored form
//     prod_k (s + k^2)^{e_k},   integer k >= 1.
// Everything in the exact half of the library lives in this shape: the
// factored denominator is the structural object of interest, and keeping it
// factored makes cancellation checks (divide the numerator by s + k^2) and
// partial-fraction expansions cheap and exact.

#include "dp3/poly.hpp"
#include "dp3/rational.hpp"
#include "dp3/series.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dp3 {

/// Exponent map k -> e_k (all e_k >= 1) for prod_k (s + k^2)^{e_k}.
class FactoredDen {
  public:
    FactoredDen() = default;

    int exponent(long k) const {
        auto it = exp_.find(k);
        return it == exp_.end() ? 0 : it->second;
    }

    void set_exponent(long k, int e) {
        if (e < 0) throw std::domain_error("FactoredDen: negative exponent");
        if (e == 0)
            exp_.erase(k);
        else
            exp_[k] = e;
    }

    void bump(long k, int delta) { set_exponent(k, exponent(k) + delta); }

    const std::map<long, int>& exponents() const { return exp_; }

    bool trivial() const { return exp_.empty(); }

    long total_degree() const {
        long d = 0;
        for (const auto& [k, e] : exp_) d += e;
        return d;
    }

    /// Factor-wise maximum (the least common multiple of two factored
    /// denominators).
    static FactoredDen lcm(const FactoredDen& a, const FactoredDen& b) {
        FactoredDen r = a;
        for (const auto& [k, e] : b.exp_) r.set_exponent(k, std::max(r.exponent(k), e));
        return r;
    }

    static FactoredDen product(const FactoredDen& a, const FactoredDen& b) {
        FactoredDen r = a;
        for (const auto& [k, e] : b.exp_) r.bump(k, e);
        return r;
    }

    /// Expand to a dense polynomial in s.
    Poly expanded() const {
        Poly p = Poly::one();
        for (const auto& [k, e] : exp_) p = p * Poly::linear(rat(k * k)).pow(static_cast<unsigned long>(e));
        return p;
    }

    /// The cofactor prod (s+k^2)^{target_e - e} needed to rescale a numerator
    /// from this denominator onto `target` (which must dominate factor-wise).
    Poly cofactor_to(const FactoredDen& target) const {
        Poly p = Poly::one();
        for (const auto& [k, e] : target.exp_) {
            const int diff = e - exponent(k);
            if (diff < 0) throw std::domain_error("FactoredDen::cofactor_to: target does not dominate");
            if (diff > 0) p = p * Poly::linear(rat(k * k)).pow(static_cast<unsigned long>(diff));
        }
        for (const auto& [k, e] : exp_)
            if (target.exponent(k) < e) throw std::domain_error("FactoredDen::cofactor_to: target does not dominate");
        return p;
    }

    Rat eval(const Rat& s0) const {
        Rat v = rat(1);
        for (const auto& [k, e] : exp_) {
            Rat base = s0 + rat(k * k);
            if (base == 0) throw std::domain_error("FactoredDen::eval: evaluation at a pole");
            v *= pow_rat(base, e);
        }
        return v;
    }

    bool operator==(const FactoredDen& o) const { return exp_ == o.exp_; }

  private:
    std::map<long, int> exp_;
};

/// num / prod (s+k^2)^{e_k}.  The numerator is *not* content-normalized:
/// structural integer content is part of the data (content extraction is a
/// separate query on the numerator).  reduce() cancels full factors s + k^2
/// that divide the numerator exactly; nothing else is cancelled.
class RatFunc {
  public:
    RatFunc() = default;
    RatFunc(Poly num, FactoredDen den) : num_(std::move(num)), den_(std::move(den)) {
        if (num_.is_zero()) den_ = FactoredDen();
    }

    static RatFunc from_poly(Poly p) { return RatFunc(std::move(p), FactoredDen()); }

    const Poly& num() const { return num_; }
    const FactoredDen& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    /// Cancel every factor (s + k^2) dividing the numerator exactly, with
    /// multiplicity.  Root test first (numerator vanishes at s = -k^2), then
    /// exact division.
    void reduce() {
        if (num_.is_zero()) { den_ = FactoredDen(); return; }
        std::vector<long> keys;
        for (const auto& [k, e] : den_.exponents()) keys.push_back(k);
        for (long k : keys) {
            const Rat root = rat(-k * k);
            while (den_.exponent(k) > 0 && num_.eval(root) == 0) {
                num_ = exact_div(num_, Poly::linear(rat(k * k)));
                den_.bump(k, -1);
            }
        }
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        FactoredDen common = FactoredDen::lcm(a.den_, b.den_);
        Poly n = a.num_ * a.den_.cofactor_to(common) + b.num_ * b.den_.cofactor_to(common);
        RatFunc r(std::move(n), std::move(common));
        if (r.num_.is_zero()) r.den_ = FactoredDen();
        return r;
    }

    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (b * rat(-1)); }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc();
        return RatFunc(a.num_ * b.num_, FactoredDen::product(a.den_, b.den_));
    }

    friend RatFunc operator*(RatFunc a, const Rat& c) {
        if (c == 0) return RatFunc();
        a.num_ *= c;
        return a;
    }
    friend RatFunc operator*(const Rat& c, RatFunc a) { return std::move(a) * c; }

    /// Divide by the monic linear factor (s + k^2): bump the denominator
    /// exponent (no cancellation attempted here; call reduce() after).
    RatFunc divided_by_factor(long k) const {
        RatFunc r = *this;
        if (!r.is_zero()) r.den_.bump(k, +1);
        return r;
    }

    Rat eval(const Rat& s0) const {
        if (num_.is_zero()) return rat(0);
        return num_.eval(s0) / den_.eval(s0);
    }

    /// Exact equality as rational functions (cross-multiplied).
    bool equals(const RatFunc& o) const {
        FactoredDen common = FactoredDen::lcm(den_, o.den_);
        return num_ * den_.cofactor_to(common) == o.num_ * o.den_.cofactor_to(common);
    }

    /// Taylor coefficients of the expansion around s = s0 (no pole there),
    /// orders 0..depth.
    std::vector<Rat> taylor_at(const Rat& s0, int depth) const;

    /// Coefficients c_i of the expansion around the root s = -k^2,
    ///   f = sum_{i = -e_k}^{depth} c_i (s + k^2)^i,
    /// returned as the pair (lowest index, coefficient list).
    std::pair<int, std::vector<Rat>> laurent_at_factor(long k, int depth) const;

  private:
    Poly num_;
    FactoredDen den_;
};

inline std::vector<Rat> RatFunc::taylor_at(const Rat& s0, int depth) const {
    if (num_.is_zero()) return std::vector<Rat>(static_cast<std::size_t>(depth) + 1, rat(0));
    // Shift the numerator to t = s - s0, expand each denominator factor as a
    // series in t and invert.
    Poly shifted_num = num_.shifted(s0);  // num(t + s0)
    Series numerator = Series::from_poly(shifted_num, depth);
    Series denom = Series::constant(rat(1), depth);
    for (const auto& [k, e] : den_.exponents()) {
        const Rat c = s0 + rat(k * k);
        if (c == 0) throw std::domain_error("RatFunc::taylor_at: expansion point is a pole");
        Series factor(depth);
        factor.mutable_coeff(0) = c;
        if (depth >= 1) factor.mutable_coeff(1) = rat(1);
        denom = denom * factor.pow(static_cast<unsigned long>(e));
    }
    Series result = numerator / denom;
    std::vector<Rat> out(static_cast<std::size_t>(depth) + 1);
    for (int i = 0; i <= depth; ++i) out[static_cast<std::size_t>(i)] = result[i];
    return out;
}

inline std::pair<int, std::vector<Rat>> RatFunc::laurent_at_factor(long k, int depth) const {
    const int e_k = den_.exponent(k);
    const Rat s0 = rat(-k * k);
    if (num_.is_zero()) return {-e_k, std::vector<Rat>(static_cast<std::size_t>(depth + e_k) + 1, rat(0))};
    const int series_depth = depth + e_k;
    // g(t) = f * t^{e_k} expanded at t = s + k^2 -> Taylor series of depth
    // series_depth; f's Laurent coefficients are g's shifted down by e_k.
    Poly shifted_num = num_.shifted(s0);  // num(t - k^2)
    Series numerator = Series::from_poly(shifted_num, series_depth);
    Series denom = Series::constant(rat(1), series_depth);
    for (const auto& [j, e] : den_.exponents()) {
        if (j == k) continue;
        const Rat c = rat(j * j) - rat(k * k);  // (t + j^2 - k^2) at t -> 0
        Series factor(series_depth);
        factor.mutable_coeff(0) = c;
        if (series_depth >= 1) factor.mutable_coeff(1) = rat(1);
        denom = denom * factor.pow(static_cast<unsigned long>(e));
    }
    Series g = numerator / denom;
    std::vector<Rat> out(static_cast<std::size_t>(series_depth) + 1);
    for (int i = 0; i <= series_depth; ++i) out[static_cast<std::size_t>(i)] = g[i];
    return {-e_k, out};
}

/// Partial-fraction data of a rational function with factored denominator:
///   f = poly_part + sum_k sum_{i=1}^{e_k} coeff[k][i-1] / (s+k^2)^i.
struct PartialFractions {
    Poly poly_part;
    std::map<long, std::vector<Rat>> pole_coeffs;  // k -> [c_1, ..., c_{e_k}]

    /// Reassemble into a single rational function (for round-trip checks).
    RatFunc recombined() const {
        RatFunc acc = RatFunc::from_poly(poly_part);
        for (const auto& [k, coeffs] : pole_coeffs) {
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                if (coeffs[i] == 0) continue;
                FactoredDen d;
                d.set_exponent(k, static_cast<int>(i) + 1);
                acc = acc + RatFunc(Poly::constant(coeffs[i]), d);
            }
        }
        return acc;
    }
};

/// Exact partial-fraction expansion over the factored denominator.
inline PartialFractions partial_fractions(const RatFunc& f) {
    PartialFractions out;
    if (f.is_zero()) return out;
    // Polynomial part by dense division against the expanded denominator.
    const Poly expanded = f.den().expanded();
    auto [quot, rem] = divrem(f.num(), expanded);
    out.poly_part = quot;
    const RatFunc proper(rem, f.den());
    for (const auto& [k, e] : f.den().exponents()) {
        auto [lo, coeffs] = proper.laurent_at_factor(k, -1);
        // coeffs[i] is the coefficient of (s+k^2)^{lo+i}; collect the
        // principal part c_{-i} as pole_coeffs[k][i-1].
        std::vector<Rat> principal(static_cast<std::size_t>(e), rat(0));
        for (int i = 0; i < e; ++i) {
            const int idx = -1 - i - lo;  // position of exponent -(i+1)
            if (idx >= 0 && idx < static_cast<int>(coeffs.size()))
                principal[static_cast<std::size_t>(i)] = coeffs[static_cast<std::size_t>(idx)];
        }
        out.pole_coeffs[k] = std::move(principal);
    }
    return out;
}

inline std::string to_string(const FactoredDen& d, const std::string& var = "s") {
    if (d.trivial()) return "1";
    std::string out;
    for (const auto& [k, e] : d.exponents()) {
        if (!out.empty()) out += "*";
        out += "(" + var + "+" + std::to_string(k * k) + ")";
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

}  // namespace dp3
