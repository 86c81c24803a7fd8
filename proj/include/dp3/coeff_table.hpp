#pragma once

// The exact Taylor-coefficient engine.
//
// The degenerate Painlevé III transcendent studied here, written through
// u = -(tau/2)(1 + U(x)) with x = tau^2 (parameters normalized to b = a),
// has a unique odd solution vanishing at the origin whose Garnier-form
// series U(x) = sum_{n>=1} u_{2n}(a) x^n obeys
//
//   (a^2+1)   u_2    = 1,
//   (a^2+n^2) u_{2n} = 3 u_{2(n-1)} + 3 sum_{j1+j2=n-1} u_{2j1} u_{2j2}
//                      + sum_{j1+j2+j3=n-1} u_{2j1} u_{2j2} u_{2j3}
//                      - sum_{2j1<n} (n-2j1)^2 u_{2j1} u_{2(n-j1)},
//
// all indices >= 1.  Each u_{2n} is a rational function of s = a^2 whose
// denominator, observed empirically and conjectured in general, is exactly
// prod_{k=1}^{n} (s+k^2)^{n_k} with n_k = floor((n+1)/(k+1)), the numerator
// being a degree m(n) = sum n_k - n polynomial with positive integer
// coefficients.  The engine computes the table exactly, keeping denominators
// factored; the only cancellations performed are whole factors (s+k^2)
// dividing the numerator (these cancellations are where the conjectured
// divisibility magic lives).

#include "dp3/poly.hpp"
#include "dp3/ratfunc.hpp"
#include "dp3/rational.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dp3 {

/// Conjectured denominator exponents and numerator degree for index n.
struct StructurePrediction {
    std::map<long, int> exponents;  // k -> n_k, k = 1..n
    long m = 0;                     // predicted numerator degree
};

inline StructurePrediction predicted_structure(long n) {
    if (n < 1) throw std::domain_error("predicted_structure: n must be >= 1");
    StructurePrediction p;
    long total = 0;
    for (long k = 1; k <= n; ++k) {
        const long nk = (n + 1) / (k + 1);
        if (nk > 0) p.exponents[k] = static_cast<int>(nk);
        total += nk;
    }
    p.m = total - n;
    return p;
}

/// Exact table of the series coefficients u_{2n}(a), n = 1..N, as rational
/// functions of s = a^2.  Pair convolutions are cached across the build
/// because both the triple sum and the next pair sum reuse them.
class CoeffTable {
  public:
    explicit CoeffTable(int n_max) { build(n_max); }

    int n_max() const { return static_cast<int>(u_.size()) - 1; }

    /// u_{2n} as a rational function of s (1-based n).
    const RatFunc& u(int n) const {
        if (n < 1 || n > n_max()) throw std::out_of_range("CoeffTable::u: index out of range");
        return u_[static_cast<std::size_t>(n)];
    }

    /// Numeric value u_{2n}(a) for s0 = a^2 (exact rational evaluation).
    Rat eval(int n, const Rat& s0) const { return u(n).eval(s0); }

  private:
    std::vector<RatFunc> u_;     // u_[n], entry 0 unused
    std::vector<RatFunc> pair_;  // pair_[m] = sum_{j1+j2=m} u_{j1} u_{j2}, entry <2 unused

    void build(int n_max) {
        if (n_max < 1) throw std::domain_error("CoeffTable: n_max must be >= 1");
        u_.assign(static_cast<std::size_t>(n_max) + 1, RatFunc());
        pair_.assign(static_cast<std::size_t>(n_max) + 1, RatFunc());
        {
            FactoredDen d;
            d.set_exponent(1, 1);
            u_[1] = RatFunc(Poly::one(), d);  // u_2 = 1/(s+1)
        }
        for (int n = 2; n <= n_max; ++n) {
            // Pair convolution at order n-1 (needed now and cached for later).
            if (n - 1 >= 2 && pair_[static_cast<std::size_t>(n - 1)].is_zero()) {
                RatFunc p;
                for (int j = 1; j <= n - 2; ++j) p = p + u_[static_cast<std::size_t>(j)] * u_[static_cast<std::size_t>(n - 1 - j)];
                p.reduce();
                pair_[static_cast<std::size_t>(n - 1)] = p;
            }
            RatFunc rhs = rat(3) * u_[static_cast<std::size_t>(n - 1)];
            if (n - 1 >= 2) rhs = rhs + rat(3) * pair_[static_cast<std::size_t>(n - 1)];
            // Triple convolution: sum_j u_j * pair_{n-1-j}.
            for (int j = 1; n - 1 - j >= 2; ++j)
                rhs = rhs + u_[static_cast<std::size_t>(j)] * pair_[static_cast<std::size_t>(n - 1 - j)];
            // Frequency-weighted counter-sum.
            for (int j = 1; 2 * j < n; ++j) {
                const long w = static_cast<long>(n - 2 * j) * (n - 2 * j);
                rhs = rhs - rat(w) * (u_[static_cast<std::size_t>(j)] * u_[static_cast<std::size_t>(n - j)]);
            }
            RatFunc next = rhs.divided_by_factor(n);
            next.reduce();
            u_[static_cast<std::size_t>(n)] = std::move(next);
        }
    }
};

/// Observed structural decomposition of a table entry.
struct Decomposition {
    std::map<long, int> exponents;  // observed denominator exponents
    long m = 0;                     // observed numerator degree
    std::vector<Int> p;             // p[k] = numerator coefficient of s^k, k = 0..m
};

/// Read off the observed structure of u_{2n}.  Throws if a numerator
/// coefficient is not an integer (it always is: the recurrence only ever
/// divides by monic factors).
inline Decomposition decompose(const CoeffTable& table, int n) {
    const RatFunc& f = table.u(n);
    Decomposition d;
    d.exponents = f.den().exponents();
    d.m = f.num().degree();
    d.p.reserve(static_cast<std::size_t>(d.m) + 1);
    for (long k = 0; k <= d.m; ++k) {
        const Rat& c = f.num()[static_cast<std::size_t>(k)];
        if (!is_integer(c)) throw std::domain_error("decompose: non-integer numerator coefficient");
        d.p.push_back(c.get_num());
    }
    return d;
}

/// Do the observed exponents and degree match the conjectured structure?
inline bool structure_matches(const CoeffTable& table, int n) {
    const Decomposition d = decompose(table, n);
    const StructurePrediction pred = predicted_structure(n);
    return d.exponents == pred.exponents && d.m == pred.m;
}

/// Are all numerator coefficients strictly positive?
inline bool numerator_positive(const CoeffTable& table, int n) {
    for (const auto& c : decompose(table, n).p)
        if (c <= 0) return false;
    return true;
}

/// The conjectured-divisible combination: for k >= 4, l >= 2, l | (k+2),
/// k+2 >= 3l, with M = (k+2)/l,
///   sum_{m1+m2+m3=M} u_{2(l m1-1)} u_{2(l m2-1)} u_{2(l m3-1)}
///   - sum_{m4+m5=M, m4<M/2} (l(m5-m4))^2 u_{2(l m4-1)} u_{2(l m5-1)},
/// assembled over the least common factored denominator of its terms
/// WITHOUT any cancellation.  The conjecture says that numerator is
/// divisible by (s + (l-1)^2).
struct DivisibilityWitness {
    Poly numerator;       // over the least common factored denominator
    FactoredDen denominator;
    bool divisible = false;
    Poly quotient;        // numerator / (s + (l-1)^2) when divisible
};

inline DivisibilityWitness strange_divisibility(const CoeffTable& table, long k, long l) {
    if (k < 4 || l < 2 || (k + 2) % l != 0 || k + 2 < 3 * l)
        throw std::domain_error("strange_divisibility: parameters outside the conjecture's range");
    const long big_m = (k + 2) / l;
    auto idx = [&](long m) { return static_cast<int>(l * m - 1); };
    // Collect terms as (coefficient, rational function) without summing yet;
    // we need the least common denominator over *unreduced* products.
    std::vector<std::pair<Rat, RatFunc>> terms;
    for (long m1 = 1; m1 <= big_m - 2; ++m1)
        for (long m2 = 1; m1 + m2 <= big_m - 1; ++m2) {
            const long m3 = big_m - m1 - m2;
            terms.emplace_back(rat(1), table.u(idx(m1)) * table.u(idx(m2)) * table.u(idx(m3)));
        }
    for (long m4 = 1; 2 * m4 < big_m; ++m4) {
        const long m5 = big_m - m4;
        const long w = l * (m5 - m4);
        terms.emplace_back(rat(-w * w), table.u(idx(m4)) * table.u(idx(m5)));
    }
    FactoredDen common;
    for (const auto& [c, f] : terms) common = FactoredDen::lcm(common, f.den());
    Poly numerator;
    for (const auto& [c, f] : terms) numerator += c * (f.num() * f.den().cofactor_to(common));
    DivisibilityWitness w;
    w.numerator = numerator;
    w.denominator = common;
    const Rat root = rat(-(l - 1) * (l - 1));
    if (!numerator.is_zero() && numerator.eval(root) == 0) {
        w.divisible = true;
        w.quotient = exact_div(numerator, Poly::linear(rat((l - 1) * (l - 1))));
    }
    return w;
}

// ---------------------------------------------------------------------------
// Line-oriented serialization.  One record per n:
//   n ; c0 c1 ... cm ; k^e k^e ...
// where c_i are the numerator coefficients (decimal integers, ascending
// degree) and k^e the denominator factors (s+k^2)^e in increasing k.
// Round trips are bit-exact.
// ---------------------------------------------------------------------------

inline void write_table(const CoeffTable& table, std::ostream& os) {
    os << "utable " << table.n_max() << "\n";
    for (int n = 1; n <= table.n_max(); ++n) {
        const Decomposition d = decompose(table, n);
        os << n << " ;";
        for (const auto& c : d.p) os << " " << to_string(c);
        os << " ;";
        for (const auto& [k, e] : d.exponents) os << " " << k << "^" << e;
        os << "\n";
    }
}

inline std::string table_to_string(const CoeffTable& table) {
    std::ostringstream oss;
    write_table(table, oss);
    return oss.str();
}

/// Parsed form of a serialized table (cheap structural container; the exact
/// rational functions can be reassembled on demand).
struct ParsedTable {
    struct Entry {
        int n = 0;
        std::vector<Int> p;
        std::map<long, int> exponents;
    };
    int n_max = 0;
    std::vector<Entry> entries;

    RatFunc entry_ratfunc(std::size_t i) const {
        const Entry& e = entries.at(i);
        std::vector<Rat> coeffs;
        coeffs.reserve(e.p.size());
        for (const auto& c : e.p) coeffs.emplace_back(c);
        FactoredDen den;
        for (const auto& [k, ex] : e.exponents) den.set_exponent(k, ex);
        return RatFunc(Poly(std::move(coeffs)), den);
    }
};

inline std::optional<ParsedTable> read_table(std::istream& is) {
    ParsedTable t;
    std::string tag;
    if (!(is >> tag) || tag != "utable") return std::nullopt;
    if (!(is >> t.n_max)) return std::nullopt;
    std::string line;
    std::getline(is, line);  // eat rest of header line
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ParsedTable::Entry e;
        std::string tok;
        if (!(ls >> e.n)) return std::nullopt;
        if (!(ls >> tok) || tok != ";") return std::nullopt;
        while (ls >> tok && tok != ";") e.p.emplace_back(tok);
        if (tok != ";") return std::nullopt;
        while (ls >> tok) {
            const auto caret = tok.find('^');
            if (caret == std::string::npos) return std::nullopt;
            e.exponents[std::stol(tok.substr(0, caret))] = std::stoi(tok.substr(caret + 1));
        }
        t.entries.push_back(std::move(e));
    }
    if (static_cast<int>(t.entries.size()) != t.n_max) return std::nullopt;
    return t;
}

}  // namespace dp3
