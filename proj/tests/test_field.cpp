#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <stdexcept>

#include "ffgraph/field.hpp"

using namespace ffgraph;

TEST_CASE("prime field F13: canonical generator and logs") {
    FieldCtx F = build_field(13, 1);
    CHECK(F.q == 13);
    CHECK(F.generator == 2);
    CHECK(modulus_to_string(F.modulus) == "0,1");
    CHECK(F.discrete_log(2) == 1);
    CHECK(F.discrete_log(8) == 3);
    CHECK(F.discrete_log(12) == 6);
    CHECK(F.discrete_log(11) == 7);
    CHECK(F.discrete_log(1) == 0);
    CHECK_THROWS_AS(F.discrete_log(0), std::domain_error);
}

TEST_CASE("canonical moduli for the sweep extensions") {
    CHECK(modulus_to_string(build_field(3, 2).modulus) == "1,0,1");
    CHECK(modulus_to_string(build_field(5, 2).modulus) == "2,0,1");
    CHECK(modulus_to_string(build_field(7, 2).modulus) == "1,0,1");
    CHECK(modulus_to_string(build_field(11, 2).modulus) == "1,0,1");
    CHECK(modulus_to_string(build_field(13, 2).modulus) == "2,0,1");
}

TEST_CASE("modulus string round trip") {
    CHECK(parse_modulus("2,0,1") == std::vector<std::uint32_t>{2, 0, 1});
    FieldCtx F = build_field(5, 2, parse_modulus("2,0,1"));
    CHECK(F.q == 25);
    CHECK_THROWS_AS(parse_modulus(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_modulus("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_modulus("1,x"), std::invalid_argument);
}

TEST_CASE("build_field rejects bad input") {
    CHECK_THROWS_AS(build_field(4, 1), std::invalid_argument);   // composite
    CHECK_THROWS_AS(build_field(2, 3), std::invalid_argument);   // even characteristic
    CHECK_THROWS_AS(build_field(9, 1), std::invalid_argument);   // composite
    CHECK_THROWS_AS(build_field(13, 4, {}, 1000), std::invalid_argument);  // over cap
    // x^2 - 1 is reducible over F5
    CHECK_THROWS_AS(build_field(5, 2, {4, 0, 1}), std::invalid_argument);
    // wrong degree
    CHECK_THROWS_AS(build_field(5, 2, {2, 1}), std::invalid_argument);
    // not monic
    CHECK_THROWS_AS(build_field(5, 2, {2, 0, 2}), std::invalid_argument);
    // coefficient out of range
    CHECK_THROWS_AS(build_field(5, 2, {7, 0, 1}), std::invalid_argument);
}

TEST_CASE("generator override must have full order") {
    FieldCtx F = build_field(13, 1, {}, kDefaultFieldCap, 6);  // 6 generates F13*
    CHECK(F.generator == 6);
    CHECK(F.pow(6, 12) == 1);
    CHECK_THROWS_AS(build_field(13, 1, {}, kDefaultFieldCap, 3),
                    std::invalid_argument);  // ord(3) = 3
    CHECK_THROWS_AS(build_field(13, 1, {}, kDefaultFieldCap, 13),
                    std::invalid_argument);  // out of range
}

TEST_CASE("exp/log are inverse bijections") {
    for (auto [p, s] : {std::pair<std::uint32_t, std::uint32_t>{13, 1}, {3, 2}, {7, 2}}) {
        FieldCtx F = build_field(p, s);
        std::set<std::uint32_t> seen;
        for (std::uint32_t e = 0; e < F.q - 1; ++e) {
            std::uint32_t x = F.exp_tab[e];
            CHECK(x != 0);
            CHECK(F.discrete_log(x) == e);
            seen.insert(x);
        }
        CHECK(seen.size() == F.q - 1);
        // wraparound half of the doubled table
        for (std::uint32_t e = 0; e < F.q - 1; ++e)
            CHECK(F.exp_tab[e + F.q - 1] == F.exp_tab[e]);
    }
}

TEST_CASE("field axioms spot-checked exhaustively on F49") {
    FieldCtx F = build_field(7, 2);
    for (std::uint32_t a = 0; a < F.q; ++a) {
        CHECK(F.add(a, F.neg(a)) == 0);
        CHECK(F.add(a, 0) == a);
        CHECK(F.mul(a, 1) == a);
        CHECK(F.mul(a, 0) == 0);
        if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
        for (std::uint32_t b = 0; b < F.q; ++b) {
            CHECK(F.add(a, b) == F.add(b, a));
            CHECK(F.mul(a, b) == F.mul(b, a));
            CHECK(F.sub(F.add(a, b), b) == a);
        }
    }
    // distributivity sample
    for (std::uint32_t a = 0; a < F.q; a += 5)
        for (std::uint32_t b = 0; b < F.q; b += 3)
            for (std::uint32_t c = 0; c < F.q; c += 7)
                CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
    CHECK_THROWS_AS(F.inv(0), std::domain_error);
}

TEST_CASE("pow matches repeated multiplication") {
    FieldCtx F = build_field(11, 1);
    CHECK(F.pow(0, 0) == 1);
    CHECK(F.pow(0, 5) == 0);
    for (std::uint32_t a = 1; a < F.q; ++a) {
        std::uint32_t acc = 1;
        for (std::uint64_t e = 0; e < 25; ++e) {
            CHECK(F.pow(a, e) == acc);
            acc = F.mul(acc, a);
        }
    }
}

TEST_CASE("g_of and chi_m behave like the power character") {
    FieldCtx F = build_field(13, 1);
    CHECK(F.g_of(0) == 12);
    CHECK(F.g_of(8) == 4);
    CHECK(F.g_of(-8) == 4);
    CHECK(F.g_of(5) == 1);
    CHECK(F.chi_m(2, 0) == 0);
    // chi_2 is the quadratic character: +1 exactly on the 6 squares of F13*
    int plus = 0;
    for (std::uint32_t x = 1; x < 13; ++x) {
        int want = F.discrete_log(x) % 2 == 0 ? 1 : -1;
        CHECK(F.chi_m(2, x) == want);
        if (want == 1) ++plus;
    }
    CHECK(plus == 6);
    // chi_m(x) = 1 iff x is an m-th power
    for (std::int64_t m = 1; m <= 6; ++m)
        for (std::uint32_t x = 1; x < 13; ++x) {
            bool is_power = false;
            for (std::uint32_t y = 1; y < 13; ++y)
                if (F.pow(y, static_cast<std::uint64_t>(m)) == x) is_power = true;
            CHECK((F.chi_m(m, x) == 1) == is_power);
        }
}

TEST_CASE("from_int reduces mod p") {
    FieldCtx F = build_field(7, 2);
    CHECK(F.from_int(4) == 4);
    CHECK(F.from_int(7) == 0);
    CHECK(F.from_int(-2) == 5);
    CHECK(F.from_int(-7) == 0);
}

TEST_CASE("find_nonresidue returns the canonical one") {
    CHECK(find_nonresidue(build_field(13, 1)) == 2);
    CHECK(find_nonresidue(build_field(7, 1)) == 3);
    CHECK(find_nonresidue(build_field(5, 1)) == 2);
    FieldCtx F9 = build_field(3, 2);
    std::uint32_t nr = find_nonresidue(F9);
    CHECK(F9.chi_m(2, nr) == -1);
    for (std::uint32_t x = 1; x < nr; ++x) CHECK(F9.chi_m(2, x) == 1);
}

TEST_CASE("tableless arithmetic path (q above kTableCap) stays consistent") {
    FieldCtx big = build_field(3, 6);  // q = 729 > 512: no add/mul tables
    CHECK(big.add_tab.empty());
    CHECK(big.mul_tab.empty());
    for (std::uint32_t a = 0; a < big.q; a += 17) {
        CHECK(big.add(a, big.neg(a)) == 0);
        if (a != 0) CHECK(big.mul(a, big.inv(a)) == 1);
        for (std::uint32_t b = 0; b < big.q; b += 23) {
            CHECK(big.add(a, b) == big.add(b, a));
            CHECK(big.mul(a, big.add(b, 1)) == big.add(big.mul(a, b), a));
        }
    }
}

TEST_CASE("is_prime") {
    CHECK(is_prime(2));
    CHECK(is_prime(13));
    CHECK(is_prime(97));
    CHECK(!is_prime(1));
    CHECK(!is_prime(0));
    CHECK(!is_prime(91));
    CHECK(!is_prime(169));
}
