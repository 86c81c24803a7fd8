#pragma once

// Frozen reference values used by both the unit tests and the acceptance
// runner: small table entries in closed form, worked divisibility examples,
// printed sequence rows.  Each datum is written exactly as published for the
// solution family under study; tests compare against these symbol-for-symbol
// after normalization.

#include "dp3/coeff_table.hpp"
#include "dp3/poly.hpp"
#include "dp3/ratfunc.hpp"
#include "dp3/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace refdata {

/// Exact coefficient table shared across suites; built once per process.
inline const dp3::CoeffTable& shared_table40() {
    static const dp3::CoeffTable t(40);
    return t;
}

using dp3::Int;
using dp3::Poly;
using dp3::Rat;
using dp3::rat;

inline Poly poly_from_longs(const std::vector<long>& ascending) {
    std::vector<Rat> cs;
    cs.reserve(ascending.size());
    for (long v : ascending) cs.push_back(rat(v));
    return Poly(cs);
}

inline Poly poly_from_strings(const std::vector<std::string>& ascending) {
    std::vector<Rat> cs;
    cs.reserve(ascending.size());
    for (const auto& v : ascending) cs.emplace_back(Int(v));
    return Poly(cs);
}

/// The five displayed low-order table entries: numerator coefficients
/// (ascending powers of s = a^2) and denominator exponents {k: e}.
struct TableEntry {
    int n;
    std::vector<long> numerator;
    std::map<long, int> exponents;
};

inline const std::vector<TableEntry>& displayed_entries() {
    static const std::vector<TableEntry> entries = {
        {1, {1}, {{1, 1}}},
        {2, {3}, {{1, 1}, {2, 1}}},
        {3, {18, 12}, {{1, 2}, {2, 1}, {3, 1}}},
        {4, {180, 55}, {{1, 2}, {2, 1}, {3, 1}, {4, 1}}},
        {5, {10800, 12657, 3345, 273}, {{1, 3}, {2, 2}, {3, 1}, {4, 1}, {5, 1}}},
    };
    return entries;
}

/// First members of the numerator-degree sequence m(n), n = 1..14.
inline const std::vector<long>& m_sequence_14() {
    static const std::vector<long> m = {0, 0, 1, 1, 3, 3, 5, 6, 8, 8, 12, 12, 14, 16};
    return m;
}

/// Worked examples of the divisibility conjecture: parameters (k, l), the
/// overall integer factor, and the cofactor polynomial (ascending powers of
/// s) so that numerator = factor * (s + (l-1)^2) * extra * cofactor, where
/// `extra` multiplies in an additional fixed polynomial for the l = 4 items.
struct DivisibilityExample {
    long k, l;
    long factor;
    std::vector<std::string> cofactor;  // ascending coefficients of s
    std::vector<long> extra;            // ascending; empty means 1
};

inline const std::vector<DivisibilityExample>& divisibility_examples() {
    static const std::vector<DivisibilityExample> ex = {
        {4, 2, 1, {"-36", "1"}, {}},
        {6, 2, 6, {"-14400", "-4676", "-455", "6"}, {}},
        {8, 2, 9,
         {"-533433600", "-449762544", "-128899248", "-15895545", "-833966", "-16186", "139"},
         {}},
        {7, 3, 27, {"-1800", "-1622", "-226", "1"}, {}},
        {10, 3, 81,
         {"-1828915200", "-1948922208", "-573508161", "-55847687", "-2464380", "-42555", "91"},
         {}},
        {13, 3, 81,
         {"-11292874661376000000", "-25866244844475840000", "-21696167625164762400",
          "-8649917000534607066", "-1844596326528992619", "-229588162659563852",
          "-17400650459323535", "-816781188263163", "-23690569569496", "-413489537329",
          "-4061032152", "-16646090", "22702"},
         {}},
        {10, 4, 72, {"-6350400", "-8718516", "-2858377", "-272369", "-8896", "12"}, {3, 2}},
        {14, 4, 432,
         {"-1434015830016000000", "-3496575097981440000", "-3170843975740838400",
          "-1396061649915602256", "-336583346858652920", "-47045222366439497",
          "-3930475972840326", "-197871121155883", "-6103132228087", "-114944445444",
          "-1235083643", "-5756420", "3876"},
         {3, 2}},
    };
    return ex;
}

}  // namespace refdata
