#pragma once

// Dense univariate polynomials with exact rational coefficients.  The same
// type serves every indeterminate in the library (s = a^2, the generating
// variables z, w, x, ...); the variable name only matters when printing.
//
// Multiplication dispatches to an integer-only path (with Karatsuba above a
// size threshold) whenever both operands have denominator-free coefficients,
// which is the common case in the coefficient engine.

#include "dp3/rational.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace dp3 {

class Poly {
  public:
    Poly() = default;
    explicit Poly(Rat c0) { coeff_ = {std::move(c0)}; trim(); }
    explicit Poly(std::vector<Rat> coeffs) : coeff_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return constant(rat(1)); }
    static Poly constant(const Rat& c) { return Poly(c); }

    /// c * t^k  (t is whatever the ambient variable is).
    static Poly monomial(const Rat& c, std::size_t k) {
        if (c == 0) return Poly();
        std::vector<Rat> v(k + 1, rat(0));
        v[k] = c;
        return Poly(std::move(v));
    }

    /// t + c, the ubiquitous monic linear factor.
    static Poly linear(const Rat& c) { return Poly(std::vector<Rat>{c, rat(1)}); }

    bool is_zero() const { return coeff_.empty(); }

    /// Degree, with deg 0 = -1 by convention.
    long degree() const { return static_cast<long>(coeff_.size()) - 1; }

    const std::vector<Rat>& coefficients() const { return coeff_; }

    /// Coefficient of t^k (zero outside the stored range).
    const Rat& operator[](std::size_t k) const {
        static const Rat zero_rat = rat(0);
        return k < coeff_.size() ? coeff_[k] : zero_rat;
    }

    Rat& mutable_coeff(std::size_t k) {
        if (k >= coeff_.size()) coeff_.resize(k + 1, rat(0));
        return coeff_[k];
    }
    void renormalize() { trim(); }

    bool operator==(const Poly& o) const { return coeff_ == o.coeff_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator-() const {
        Poly r = *this;
        for (auto& c : r.coeff_) c = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        if (coeff_.size() < o.coeff_.size()) coeff_.resize(o.coeff_.size(), rat(0));
        for (std::size_t i = 0; i < o.coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (coeff_.size() < o.coeff_.size()) coeff_.resize(o.coeff_.size(), rat(0));
        for (std::size_t i = 0; i < o.coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
        trim();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    Poly& operator*=(const Rat& c) {
        if (c == 0) { coeff_.clear(); return *this; }
        for (auto& x : coeff_) x *= c;
        return *this;
    }
    friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
    friend Poly operator*(const Rat& c, Poly a) { return a *= c; }

    friend Poly operator*(const Poly& a, const Poly& b) { return mul(a, b); }

    bool all_integer() const {
        for (const auto& c : coeff_)
            if (!is_integer(c)) return false;
        return true;
    }

    Rat eval(const Rat& t) const {
        Rat acc = rat(0);
        for (std::size_t i = coeff_.size(); i-- > 0;) acc = acc * t + coeff_[i];
        return acc;
    }

    Poly derivative() const {
        if (coeff_.size() <= 1) return Poly();
        std::vector<Rat> d(coeff_.size() - 1);
        for (std::size_t i = 1; i < coeff_.size(); ++i) d[i - 1] = coeff_[i] * rat(static_cast<long>(i));
        return Poly(std::move(d));
    }

    /// p(t + c): exact Taylor shift (Horner in the shifted variable).
    Poly shifted(const Rat& c) const {
        Poly result;
        const Poly lin = Poly::linear(c);
        for (std::size_t i = coeff_.size(); i-- > 0;) {
            result = result * lin;
            result += Poly::constant(coeff_[i]);
        }
        return result;
    }

    Poly pow(unsigned long e) const {
        Poly base = *this, acc = Poly::one();
        while (e) {
            if (e & 1) acc = acc * base;
            base = (e >>= 1) ? base * base : base;
        }
        return acc;
    }

  private:
    std::vector<Rat> coeff_;  // coeff_[k] multiplies t^k; no trailing zeros

    void trim() {
        while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
    }

    static Poly mul(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        if (a.all_integer() && b.all_integer()) return mul_integer(a, b);
        std::vector<Rat> out(a.coeff_.size() + b.coeff_.size() - 1, rat(0));
        for (std::size_t i = 0; i < a.coeff_.size(); ++i) {
            if (a.coeff_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeff_.size(); ++j) out[i + j] += a.coeff_[i] * b.coeff_[j];
        }
        return Poly(std::move(out));
    }

    static Poly mul_integer(const Poly& a, const Poly& b) {
        std::vector<Int> ia(a.coeff_.size()), ib(b.coeff_.size());
        for (std::size_t i = 0; i < ia.size(); ++i) ia[i] = a.coeff_[i].get_num();
        for (std::size_t i = 0; i < ib.size(); ++i) ib[i] = b.coeff_[i].get_num();
        std::vector<Int> prod = mul_int_vec(ia, ib);
        std::vector<Rat> out(prod.size());
        for (std::size_t i = 0; i < prod.size(); ++i) out[i] = Rat(prod[i]);
        return Poly(std::move(out));
    }

    static std::vector<Int> mul_int_vec(const std::vector<Int>& a, const std::vector<Int>& b) {
        static constexpr std::size_t kKaratsubaThreshold = 48;
        if (std::min(a.size(), b.size()) < kKaratsubaThreshold) {
            std::vector<Int> out(a.size() + b.size() - 1, Int(0));
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] == 0) continue;
                for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
            }
            return out;
        }
        // Karatsuba split at half the longer operand.
        const std::size_t h = std::max(a.size(), b.size()) / 2;
        auto lo = [&](const std::vector<Int>& v) {
            return std::vector<Int>(v.begin(), v.begin() + std::min(h, v.size()));
        };
        auto hi = [&](const std::vector<Int>& v) {
            return v.size() > h ? std::vector<Int>(v.begin() + h, v.end()) : std::vector<Int>{};
        };
        auto add_vec = [](std::vector<Int> x, const std::vector<Int>& y) {
            if (x.size() < y.size()) x.resize(y.size(), Int(0));
            for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
            return x;
        };
        std::vector<Int> a0 = lo(a), a1 = hi(a), b0 = lo(b), b1 = hi(b);
        std::vector<Int> z0 = (a0.empty() || b0.empty()) ? std::vector<Int>{} : mul_int_vec(a0, b0);
        std::vector<Int> z2 = (a1.empty() || b1.empty()) ? std::vector<Int>{} : mul_int_vec(a1, b1);
        std::vector<Int> sa = add_vec(a0, a1), sb = add_vec(b0, b1);
        std::vector<Int> z1 = (sa.empty() || sb.empty()) ? std::vector<Int>{} : mul_int_vec(sa, sb);
        // z1 -= z0 + z2
        for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
        for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];
        std::vector<Int> out(a.size() + b.size() - 1, Int(0));
        for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
        for (std::size_t i = 0; i < z1.size(); ++i) out[i + h] += z1[i];
        for (std::size_t i = 0; i < z2.size(); ++i) out[i + 2 * h] += z2[i];
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    }
};

/// Quotient and remainder of dense division (divisor must be nonzero).
inline std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("divrem: division by zero polynomial");
    Poly rem = a;
    Poly quot;
    const long db = b.degree();
    const Rat lead_inv = rat(1) / b[static_cast<std::size_t>(db)];
    while (!rem.is_zero() && rem.degree() >= db) {
        const long shift = rem.degree() - db;
        const Rat c = rem[static_cast<std::size_t>(rem.degree())] * lead_inv;
        quot += Poly::monomial(c, static_cast<std::size_t>(shift));
        // rem -= c * t^shift * b
        for (long i = 0; i <= db; ++i)
            rem.mutable_coeff(static_cast<std::size_t>(i + shift)) -= c * b[static_cast<std::size_t>(i)];
        rem.renormalize();
    }
    return {quot, rem};
}

/// Exact quotient; throws if the division leaves a remainder.
inline Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw std::domain_error("exact_div: division is not exact");
    return q;
}

/// Monic gcd over the rationals (Euclid).  Returns the zero polynomial for
/// gcd(0, 0).
inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divrem(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    const Rat lead = a[static_cast<std::size_t>(a.degree())];
    return a * (rat(1) / lead);
}

/// Integer content (gcd of coefficients, positive) of an integer-coefficient
/// polynomial, together with the 3-adic valuation of that content.
/// Throws if any coefficient is non-integral or the polynomial is zero.
struct ContentInfo {
    Int content;
    unsigned long val3 = 0;  // exponent of 3 in `content`
};

inline ContentInfo content_and_val3(const Poly& p) {
    if (p.is_zero()) throw std::domain_error("content_and_val3: zero polynomial");
    Int g = 0;
    for (const auto& c : p.coefficients()) {
        if (!is_integer(c)) throw std::domain_error("content_and_val3: non-integer coefficient");
        g = gcd_int(g, c.get_num());
    }
    ContentInfo info;
    info.content = abs(g);
    info.val3 = split_pow3(info.content).first;
    return info;
}

/// Render with an explicit variable name, highest degree first, e.g.
/// "91*s^3 + 1115*s^2 + 4219*s + 3600".
inline std::string to_string(const Poly& p, const std::string& var = "s") {
    if (p.is_zero()) return "0";
    std::string out;
    for (long k = p.degree(); k >= 0; --k) {
        const Rat& c = p[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        const bool first = out.empty();
        const bool negative = c < 0;
        const Rat mag = negative ? Rat(-c) : c;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        const bool unit = (mag == 1) && k != 0;
        if (!unit) out += to_string(mag);
        if (k != 0) {
            if (!unit) out += "*";
            out += var;
            if (k != 1) out += "^" + std::to_string(k);
        }
    }
    return out;
}

}  // namespace dp3
