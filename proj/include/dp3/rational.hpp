#pragma once

// Exact integer / rational scalars backed by GMP, plus the handful of
// number-theoretic helpers (binomials, 3-adic valuations, decimal
// truncation) used throughout the library.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace dp3 {

using Int = mpz_class;
using Rat = mpq_class;

/// Canonical rational p/q (q > 0, gcd(p,q) = 1).  mpq_class construction does
/// not canonicalize on its own, so every ad-hoc num/den pair goes through here.
inline Rat rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat(long num, long den = 1) { return rat(Int(num), Int(den)); }

inline const Int& num(const Rat& r) { return r.get_num(); }
inline const Int& den(const Rat& r) { return r.get_den(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, long e) {
    if (e >= 0) {
        Rat r;
        mpz_pow_ui(r.get_num().get_mpz_t(), base.get_num().get_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(r.get_den().get_mpz_t(), base.get_den().get_mpz_t(), static_cast<unsigned long>(e));
        return r;  // powers of a canonical rational stay canonical
    }
    if (base == 0) throw std::domain_error("pow_rat: negative power of zero");
    Rat inv = rat(base.get_den(), base.get_num());
    return pow_rat(inv, -e);
}

inline Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Int gcd_int(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Largest e with 3^e | n (n != 0), together with n / 3^e.
inline std::pair<unsigned long, Int> split_pow3(const Int& n) {
    if (n == 0) throw std::domain_error("split_pow3: zero");
    Int rest;
    unsigned long e = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Int(3).get_mpz_t());
    return {e, rest};
}

/// floor(r * 10^places) as an exact integer; lets tests pin decimal
/// expansions of exact rationals without any floating-point round-off.
inline Int truncate_decimals(const Rat& r, unsigned places) {
    Int scaled_num = r.get_num() * pow_int(10, places);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline std::string to_string(const Int& v) { return v.get_str(); }

/// "p/q" for non-integers, plain "p" otherwise.
inline std::string to_string(const Rat& v) {
    if (is_integer(v)) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

/// Parse "p", "-p", or "p/q".  Returns nullopt on malformed input.
inline std::optional<Rat> parse_rat(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            Int n(text);
            return Rat(n);
        }
        const std::string ns = text.substr(0, slash);
        const std::string ds = text.substr(slash + 1);
        if (ns.empty() || ds.empty()) return std::nullopt;
        Int n(ns), d(ds);
        if (d == 0) return std::nullopt;
        return rat(n, d);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

inline double to_double(const Rat& r) { return r.get_d(); }

}  // namespace dp3
