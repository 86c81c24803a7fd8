// Coefficient engine: the recurrence, the structural conjecture, and the
// divisibility combinations, checked against displayed closed forms and
// independent substitution oracles.

#include "dp3/coeff_table.hpp"

#include "reference_data.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace dp3;

namespace {

/// Independent check of the recurrence at a numeric point: evaluate every
/// u_{2j} at s0 exactly and verify the defining identity of u_{2n}.
bool recurrence_holds_at(const CoeffTable& t, int n, const Rat& s0) {
    Rat rhs = rat(3) * t.eval(n - 1, s0);
    for (int j1 = 1; j1 <= n - 2; ++j1) rhs += rat(3) * t.eval(j1, s0) * t.eval(n - 1 - j1, s0);
    for (int j1 = 1; j1 <= n - 3; ++j1)
        for (int j2 = 1; j1 + j2 <= n - 2; ++j2)
            rhs += t.eval(j1, s0) * t.eval(j2, s0) * t.eval(n - 1 - j1 - j2, s0);
    for (int j1 = 1; 2 * j1 < n; ++j1) {
        const long w = static_cast<long>(n - 2 * j1) * (n - 2 * j1);
        rhs -= rat(w) * t.eval(j1, s0) * t.eval(n - j1, s0);
    }
    return (s0 + rat(static_cast<long>(n) * n)) * t.eval(n, s0) == rhs;
}

}  // namespace

TEST_CASE("displayed low-order coefficients, symbol for symbol", "[coeff]") {
    const CoeffTable t(5);
    for (const auto& e : refdata::displayed_entries()) {
        const Decomposition d = decompose(t, e.n);
        INFO("n = " << e.n);
        CHECK(d.exponents == e.exponents);
        REQUIRE(d.p.size() == e.numerator.size());
        for (std::size_t i = 0; i < e.numerator.size(); ++i) CHECK(d.p[i] == e.numerator[i]);
    }
}

TEST_CASE("predicted structure and degree sequence", "[coeff]") {
    const auto& m14 = refdata::m_sequence_14();
    for (int n = 1; n <= 14; ++n)
        CHECK(predicted_structure(n).m == m14[static_cast<std::size_t>(n - 1)]);

    const CoeffTable t(40);
    for (int n = 1; n <= 40; ++n) {
        INFO("n = " << n);
        CHECK(structure_matches(t, n));
        CHECK(numerator_positive(t, n));
    }
}

TEST_CASE("recurrence identity at random rational points", "[coeff]") {
    const CoeffTable t(24);
    std::mt19937 rng(13371337);
    std::uniform_int_distribution<long> num(-30, 30);
    std::uniform_int_distribution<long> den(1, 12);
    std::uniform_int_distribution<int> pick_n(2, 24);
    int done = 0;
    while (done < 20) {
        const Rat s0 = rat(num(rng), den(rng));
        bool pole = false;
        for (long k = 1; k <= 24; ++k)
            if (s0 == rat(-k * k)) pole = true;
        if (pole) continue;
        const int n = pick_n(rng);
        INFO("n = " << n << ", s0 = " << to_string(s0));
        CHECK(recurrence_holds_at(t, n, s0));
        ++done;
    }
}

TEST_CASE("divisibility combinations match the worked examples", "[coeff]") {
    const CoeffTable t(11);
    for (const auto& ex : refdata::divisibility_examples()) {
        INFO("k = " << ex.k << ", l = " << ex.l);
        const DivisibilityWitness w = strange_divisibility(t, ex.k, ex.l);
        CHECK(w.divisible);
        Poly expected = refdata::poly_from_strings(ex.cofactor) * rat(ex.factor);
        expected = expected * Poly::linear(rat((ex.l - 1) * (ex.l - 1)));
        if (!ex.extra.empty()) expected = expected * refdata::poly_from_longs(ex.extra);
        CHECK(w.numerator == expected);
    }
}

TEST_CASE("divisibility holds across the conjecture's range", "[coeff]") {
    const CoeffTable t(18);
    for (long l = 2; l <= 6; ++l)
        for (long k = 4; k <= 28; ++k) {
            if ((k + 2) % l != 0 || k + 2 < 3 * l) continue;
            if (l * ((k + 2) / l - 1) - 1 > 18) continue;  // largest index within table
            INFO("k = " << k << ", l = " << l);
            CHECK(strange_divisibility(t, k, l).divisible);
        }
}

TEST_CASE("table serialization round trip is bit exact", "[coeff][io]") {
    const CoeffTable t(12);
    const std::string text = table_to_string(t);
    std::istringstream is(text);
    const auto parsed = read_table(is);
    REQUIRE(parsed.has_value());
    CHECK(parsed->n_max == 12);
    REQUIRE(parsed->entries.size() == 12);
    for (std::size_t i = 0; i < parsed->entries.size(); ++i)
        CHECK(parsed->entry_ratfunc(i).equals(t.u(static_cast<int>(i) + 1)));
    // Byte-identical re-serialization.
    std::ostringstream os;
    os << "utable " << parsed->n_max << "\n";
    for (const auto& e : parsed->entries) {
        os << e.n << " ;";
        for (const auto& c : e.p) os << " " << to_string(c);
        os << " ;";
        for (const auto& [k, ex] : e.exponents) os << " " << k << "^" << ex;
        os << "\n";
    }
    CHECK(os.str() == text);
}
