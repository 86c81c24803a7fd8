// Tests for the pole-residue machinery: Laurent data of the table entries,
// closed residue families at the first two poles, the leading base-level
// coefficients, the tower of rational levels about each pole, weighted sum
// rules, the divisor-count audit, and the CSV export.

#include <catch2/catch_amalgamated.hpp>

#include "dp3/coeff_table.hpp"
#include "dp3/residues.hpp"
#include "reference_data.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

using namespace dp3;

namespace {

const CoeffTable& table40() { return refdata::shared_table40(); }

const ResidueTable& residues40() {
    static const ResidueTable rt(table40(), 8);
    return rt;
}

long nk(long n, long k) { return (n + 1) / (k + 1); }

/// Polynomial with the given coefficients at exponents start, start+step, ...
Poly sparse_poly(std::size_t start, std::size_t step, const std::vector<std::string>& coeffs) {
    Poly p = Poly::zero();
    std::size_t e = start;
    for (const auto& c : coeffs) {
        p = p + Poly::monomial(Rat(Int(c)), e);
        e += step;
    }
    return p;
}

}  // namespace

TEST_CASE("residue table agrees with the partial-fraction decomposition", "[residues]") {
    const ResidueTable& rt = residues40();
    for (int n = 1; n <= 14; ++n) {
        const PartialFractions pf = partial_fractions(table40().u(n));
        CHECK(pf.poly_part.is_zero());
        for (const auto& [k, cols] : pf.pole_coeffs) {
            REQUIRE(rt.pole_order(k, n) == static_cast<long>(cols.size()));
            for (std::size_t i = 0; i < cols.size(); ++i)
                CHECK(rt.gamma(k, static_cast<long>(i) + 1, n) == cols[i]);
        }
        // Residue indices beyond the pole order vanish identically.
        for (long k = 1; k <= n; ++k)
            CHECK(rt.gamma(k, rt.pole_order(k, n) + 1, n) == 0);
    }
}

TEST_CASE("printed residues and junior expansion values", "[residues]") {
    const ResidueTable& rt = residues40();
    CHECK(rt.gamma(1, 1, 1) == 1);
    CHECK(rt.gamma(1, 1, 3) == rat(37, 96));
    CHECK(rt.gamma(1, 2, 3) == rat(1, 4));
    CHECK(rt.gamma(2, 1, 2) == -1);

    // Junior continuation of u_2 across the second pole: the single exact
    // fraction 1/(s+1) rewritten as a geometric expansion in s+4.
    CHECK(rt.gamma(2, 0, 1) == rat(-1, 3));
    CHECK(rt.gamma(2, -1, 1) == rat(-1, 9));
    CHECK(rt.gamma(2, -2, 1) == rat(-1, 27));
    // ... and of u_4 there.
    CHECK(rt.gamma(2, 0, 2) == rat(-1, 3));
    CHECK(rt.gamma(2, -1, 2) == rat(-1, 9));
    // The first pole of u_2 is simple and exact: no junior tail at all.
    CHECK(rt.gamma(1, 0, 1) == 0);
    CHECK(rt.gamma(1, -1, 1) == 0);
}

TEST_CASE("closed families at the first pole match the table", "[residues]") {
    const ResidueTable& rt = residues40();

    for (long n = 1; n <= 40; ++n) {
        CHECK(closed_residue_k1(0, n) == rt.gamma(1, nk(n, 1), n));
        CHECK(closed_residue_k1(1, n) == rt.gamma(1, nk(n, 1) - 1, n));
        if (n % 2 == 1) CHECK(closed_residue_k1(2, n) == rt.gamma(1, nk(n, 1) - 2, n));
    }

    // Spot values of the general branches.
    CHECK(closed_residue_k1(0, 3) == rat(1, 4));
    CHECK(closed_residue_k1(1, 5) == rat(253, 1152));
    CHECK(closed_residue_k1(1, 7) == rat(127, 1728));
    CHECK(closed_residue_k1(2, 9) == Rat("1149899/254803968"));

    CHECK_THROWS_AS(closed_residue_k1(2, 4), std::domain_error);
    CHECK_THROWS_AS(closed_residue_k1(3, 5), std::domain_error);
    CHECK_THROWS_AS(closed_residue_k1(0, 0), std::domain_error);
}

TEST_CASE("closed families at the second pole match the table", "[residues]") {
    const ResidueTable& rt = residues40();

    for (long p = 0; 3 * p + 2 <= 38; ++p)
        CHECK(closed_residue_k2(2, p) == rt.gamma(2, p + 1, 3 * p + 2));
    for (long p = 1; 3 * p <= 39; ++p)
        CHECK(closed_residue_k2(0, p) == rt.gamma(2, p, 3 * p));
    for (long p = 0; 3 * p + 1 <= 40; ++p)
        CHECK(closed_residue_k2(1, p) == rt.gamma(2, p, 3 * p + 1));

    CHECK(closed_residue_k2(2, 0) == -1);
    CHECK(closed_residue_k2(1, 0) == rat(-1, 3));
    CHECK(closed_residue_k2(1, 1) == rat(-2, 27));

    CHECK_THROWS_AS(closed_residue_k2(0, 0), std::domain_error);
    CHECK_THROWS_AS(closed_residue_k2(3, 1), std::domain_error);
    CHECK_THROWS_AS(closed_residue_k2(1, -1), std::domain_error);
}

TEST_CASE("leading coefficients of the base levels", "[residues]") {
    const std::vector<Rat> printed = {
        rat(1, 8),
        rat(-1, 18),
        rat(9, 1024),
        rat(-1, 1350),
        rat(625, 15925248),
        rat(-9, 6272000),
        Rat("117649/3057647616000"),
        Rat("-2/2531725875"),
        Rat("59049/4603668070400000"),
    };
    const std::vector<Rat> measured = c1k_determination(residues40(), 9);
    REQUIRE(measured.size() == printed.size());
    for (std::size_t i = 0; i < printed.size(); ++i) {
        CHECK(measured[i] == printed[i]);
        CHECK(c1k_conjectured(static_cast<long>(i) + 1) == printed[i]);
    }
}

TEST_CASE("index maps from tower levels to residue columns", "[residues]") {
    // Base level of the first family collects the deepest residues.
    CHECK(residue_slot_index(1, -1, 1) == 1);
    CHECK(residue_slot_index(1, -1, 3) == 2);
    CHECK(!residue_slot_index(1, -1, 2).has_value());
    // Even levels collect even columns, odd levels odd ones.
    CHECK(residue_slot_index(1, 0, 2) == 1);
    CHECK(residue_slot_index(1, 0, 4) == 2);
    CHECK(residue_slot_index(1, 1, 3) == 1);
    CHECK(residue_slot_index(1, 2, 2) == 0);
    CHECK(residue_slot_index(1, 3, 3) == 0);
    CHECK(residue_slot_index(1, 3, 1) == -1);
    // Second family: classes modulo 3.
    CHECK(residue_slot_index(2, -1, 2) == 1);
    CHECK(residue_slot_index(2, -1, 5) == 2);
    CHECK(!residue_slot_index(2, -1, 3).has_value());
    CHECK(residue_slot_index(2, 0, 3) == 1);
    CHECK(residue_slot_index(2, 1, 4) == 1);
    CHECK(residue_slot_index(2, 1, 1) == 0);
    CHECK(!residue_slot_index(2, 0, 1).has_value());
    // Exponents below the table never map.
    CHECK(!residue_slot_index(1, 0, 0).has_value());
    CHECK_THROWS_AS(residue_slot_index(0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(residue_slot_index(1, -2, 1), std::invalid_argument);
}

TEST_CASE("first-pole tower levels in closed rational form", "[residues]") {
    const ResidueTable& rt = residues40();
    const VTower tower = v_tower(rt, 1, 3, 40);
    CHECK(tower.c() == rat(1, 8));

    const Poly q = Poly::constant(rat(-8)) + Poly::monomial(rat(1), 2);  // z^2 - 8

    CHECK(tower.level(-1).equals(Poly::monomial(rat(1), 1),
                                 (Poly::constant(rat(1)) - Poly::monomial(rat(1, 8), 2)).pow(2)));
    CHECK(tower.level(0).equals(sparse_poly(2, 2, {"576", "-16", "1"}),
                                rat(576) * (Poly::constant(rat(1)) - Poly::monomial(rat(1, 8), 2)).pow(3)));
    CHECK(tower.level(1).equals(sparse_poly(3, 2, {"4091904", "285696", "-1920", "80", "-1"}),
                                rat(2592) * q.pow(4)));
    CHECK(tower.level(2).equals(
        sparse_poly(2, 2,
                    {"12740198400", "-6834585600", "-946999296", "-10810368", "198784", "-3128",
                     "-25"}),
        rat(1166400) * q.pow(5)));
    CHECK(tower.level(3).equals(
        sparse_poly(3, 2,
                    {"-131784612249600", "18902632366080", "14900362739712", "215484420096",
                     "5050358784", "-153847552", "1884368", "-7365", "25"}),
        Rat("2687385600") * q.pow(6)));

    // Every Taylor coefficient of every level is a residue-table entry under
    // the index maps; exponents outside the level's support class vanish.
    for (long l = -1; l <= 3; ++l) {
        const Series s = tower.level_series(l);
        for (int e = 0; e <= 40; ++e) {
            const auto idx = residue_slot_index(1, l, e);
            const Rat expected = idx ? rt.gamma(1, *idx, e) : rat(0);
            CHECK(s[e] == expected);
        }
    }
}

TEST_CASE("second-pole tower levels in closed rational form", "[residues]") {
    const ResidueTable& rt = residues40();
    const VTower tower = v_tower(rt, 2, 1, 40);
    CHECK(tower.c() == rat(-1, 18));

    const Poly q = Poly::constant(rat(18)) + Poly::monomial(rat(1), 3);  // z^3 + 18

    CHECK(tower.level(-1).equals(Poly::monomial(rat(-1), 2),
                                 (Poly::constant(rat(1)) + Poly::monomial(rat(1, 18), 3)).pow(2)));
    CHECK(tower.level(0).equals(sparse_poly(3, 3, {"-15552", "54", "-3"}), rat(4) * q.pow(3)));
    CHECK(tower.level(1).equals(
        sparse_poly(1, 3,
                    {"-6046617600", "-2687385600", "284788224", "-468180", "4464", "25"}),
        rat(172800) * q.pow(4)));

    for (long l = -1; l <= 1; ++l) {
        const Series s = tower.level_series(l);
        for (int e = 0; e <= 40; ++e) {
            const auto idx = residue_slot_index(2, l, e);
            const Rat expected = idx ? rt.gamma(2, *idx, e) : rat(0);
            CHECK(s[e] == expected);
        }
    }
}

TEST_CASE("level-zero shape across pole families", "[residues]") {
    const ResidueTable& rt = residues40();

    // Product-formula constants for the level-zero numerator.  Explicit Rat
    // returns force evaluation while the operand temporaries are still alive.
    auto fact_cubed = [](long k, long e) -> Rat {
        return pow_rat(rat(factorial(static_cast<unsigned long>(k - 1)), Int(1)), 3 * e);
    };
    auto coeff_c = [&](long k) -> Rat {
        return pow_rat(rat(2), 2 - k) * pow_rat(rat(-k), k - 1) / (rat(k + 1) * fact_cubed(k, 1));
    };
    auto coeff_b = [&](long k) -> Rat {
        return pow_rat(rat(2), 2 - 2 * k) * pow_rat(rat(-k), 2 * k - 2) * rat(k * k - 3) /
               (rat((k + 2) * (k + 2)) * pow_rat(rat(k + 1), 3) * fact_cubed(k, 2));
    };
    auto coeff_a = [&](long k) -> Rat {
        return pow_rat(rat(2), 2 - 3 * k) * pow_rat(rat(-k), 3 * k - 3) /
               (rat((k + 2) * (k + 2)) * pow_rat(rat(k + 1), 5) * fact_cubed(k, 3));
    };

    // The printed third- and fourth-family constants.
    CHECK(coeff_c(3) == rat(9, 64));
    CHECK(coeff_b(3) == rat(243, 819200));
    CHECK(coeff_a(3) == Rat("729/1677721600"));
    CHECK(coeff_c(4) == rat(-2, 135));
    CHECK(coeff_b(4) == rat(13, 3280500));
    CHECK(coeff_a(4) == Rat("-1/4428675000"));

    for (long k = 1; k <= 5; ++k) {
        const VTower tower = v_tower(rt, k, 0, 30);
        const Poly num = Poly::monomial(coeff_c(k), static_cast<std::size_t>(k + 1)) +
                         Poly::monomial(coeff_b(k), static_cast<std::size_t>(2 * k + 2)) +
                         Poly::monomial(coeff_a(k), static_cast<std::size_t>(3 * k + 3));
        const Poly den = (Poly::constant(rat(1)) -
                          Poly::monomial(c1k_conjectured(k), static_cast<std::size_t>(k + 1)))
                             .pow(3);
        CHECK(tower.level(0).equals(num, den));
    }

    // The base level satisfies its quadratic identity exactly.
    for (long k = 1; k <= 6; ++k) CHECK(v_base_identity(k, c1k_conjectured(k)));
}

TEST_CASE("two-parameter product formula for senior residues", "[residues]") {
    static const CoeffTable deep(62);
    const ResidueTable rt(deep, 2);

    auto fact_cubed = [](long k, long e) -> Rat {
        return pow_rat(rat(factorial(static_cast<unsigned long>(k - 1)), Int(1)), 3 * e);
    };
    for (long k = 1; k <= 6; ++k)
        for (long p = 0; p <= 8; ++p) {
            const long n_grade = p * (k + 1) + k;
            if (n_grade <= deep.n_max()) {
                const Rat predicted =
                    rat(p + 1) * pow_rat(rat(-k), (p + 1) * (k - 1)) /
                    (pow_rat(rat(2), (p + 1) * k - 1) * pow_rat(rat(k + 1), 2 * p) *
                     fact_cubed(k, p + 1));
                CHECK(rt.gamma(k, p + 1, n_grade) == predicted);
            }
            const long n_plain = p * (k + 1);
            if (p >= 1 && n_plain <= deep.n_max()) {
                const Rat predicted =
                    rat((p * k + p + 1) * (p * k + p + 1)) * pow_rat(rat(-k), p * (k - 1)) /
                    (pow_rat(rat(2), p * k - 2) * rat((k + 2) * (k + 2)) *
                     pow_rat(rat(k + 1), 2 * p - 1) * fact_cubed(k, p));
                CHECK(rt.gamma(k, p, n_plain) == predicted);
            }
        }
}

TEST_CASE("weighted sums over the residue columns", "[residues]") {
    const ResidueTable& rt = residues40();
    for (long n = 1; n <= 40; ++n) {
        const ResidueSumReport r = residue_sum_relations(rt, n);
        CHECK(r.first_column_vanishes);
        CHECK(r.value_sum_matches);
        CHECK(r.derivative_sum_matches);
    }
    // Exact spot values at n = 3.
    const ResidueSumReport r3 = residue_sum_relations(rt, 3);
    CHECK(r3.first_column_sum == 0);
    CHECK(r3.value_sum == rat(1, 2));
    CHECK(r3.derivative_sum == rat(61, 72));
}

TEST_CASE("junior numerator rows against first-pole Laurent data", "[residues]") {
    const ResidueTable& rt = residues40();
    for (int n = 1; n <= 30; ++n) {
        const Decomposition d = decompose(table40(), n);
        Rat alternating = rat(0), weighted = rat(0);
        for (long k = 0; k <= d.m; ++k) {
            const Rat term = Rat(d.p[static_cast<std::size_t>(k)]);
            if (k % 2 == 0) {
                alternating += term;
                weighted -= rat(k) * term;
            } else {
                alternating -= term;
                weighted += rat(k) * term;
            }
        }
        Rat product = rat(1);
        Rat harmonic = rat(0);
        for (long k = 2; k <= n; ++k) {
            product *= pow_rat(rat(k * k - 1), nk(n, k));
            harmonic += rat(nk(n, k)) / rat(k * k - 1);
        }
        const Rat senior = rt.gamma(1, nk(n, 1), n);
        CHECK(alternating == senior * product);
        CHECK(weighted == (rt.gamma(1, nk(n, 1) - 1, n) + senior * harmonic) * product);
    }
}

TEST_CASE("partial-fraction counting and the divisor function", "[residues]") {
    const DivisorAuditReport r = divisor_count_audit(200, 10000);
    CHECK(r.identity_ok);
    INFO("summatory divisor value at " << r.report_at << " is " << r.summatory
                                       << ", main-term error " << r.dirichlet_error
                                       << " against reported bound " << r.remark_bound);
    CHECK(r.dirichlet_error >= 0.0);
    CHECK_THROWS_AS(divisor_count_audit(0, 100), std::invalid_argument);
}

TEST_CASE("residue export and argument checking", "[residues]") {
    const ResidueTable& rt = residues40();
    const std::string expected =
        "n,k,i,numerator,denominator\n"
        "1,1,1,1,1\n"
        "2,1,1,1,1\n"
        "2,2,1,-1,1\n"
        "3,1,1,37,96\n"
        "3,1,2,1,4\n"
        "3,2,1,-2,3\n"
        "3,3,1,9,32\n";
    CHECK(residue_csv(rt, 1, 3) == expected);
    CHECK(residue_csv(rt, 1, 3) == residue_csv(rt, 1, 3));

    CHECK_THROWS_AS(residue_csv(rt, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(residue_csv(rt, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(rt.gamma(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(rt.gamma(1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(rt.gamma(1, 1, 41), std::invalid_argument);
    CHECK_THROWS_AS(rt.gamma(1, -9, 1), std::out_of_range);
    CHECK_THROWS_AS(ResidueTable(table40(), -1), std::invalid_argument);

    CHECK_THROWS_AS(v_tower(rt, 0, 0, 40), std::invalid_argument);
    CHECK_THROWS_AS(v_tower(rt, 1, -2, 40), std::invalid_argument);
    CHECK_THROWS_AS(v_tower(rt, 1, 0, 1), std::invalid_argument);
}
