#include <catch2/catch_amalgamated.hpp>

#include "cremona/fields.hpp"

using namespace cremona;

TEST_CASE("field_make parses the three field kinds", "[fields]") {
    auto qq = field_make("QQ");
    REQUIRE(qq.kind == FieldKind::Rationals);
    REQUIRE(qq.to_string() == "QQ");

    auto f5 = field_make("GF(5)");
    REQUIRE(f5.kind == FieldKind::Prime);
    REQUIRE(f5.p == 5);
    REQUIRE(f5.to_string() == "GF(5)");
    REQUIRE(f5.size() == 5);

    auto f25 = field_make(" GF( 5 , 2 ) ");
    REQUIRE(f25.kind == FieldKind::Extension);
    REQUIRE(f25.p == 5);
    REQUIRE(f25.k == 2);
    REQUIRE(f25.modulus.size() == 3);
    REQUIRE(f25.modulus[2] == 1);
    REQUIRE(f25.size() == 25);
    REQUIRE(f25.to_string() == "GF(5,2)");

    // degree 1 folds down to the prime field
    REQUIRE(field_make("GF(7,1)").kind == FieldKind::Prime);

    REQUIRE_THROWS_AS(field_make("GF(4)"), precondition_error);
    REQUIRE_THROWS_AS(field_make("GF(0)"), precondition_error);
    REQUIRE_THROWS_AS(field_make("GF(5,0)"), precondition_error);
    REQUIRE_THROWS_AS(field_make("GF"), precondition_error);
    REQUIRE_THROWS_AS(field_make("QQ2"), precondition_error);
    REQUIRE_THROWS_AS(field_make("GF(2305843009213693952)"), precondition_error);  // 2^61
    REQUIRE_THROWS_AS(field_make(""), precondition_error);
}

TEST_CASE("field_make is deterministic under a seed", "[fields]") {
    auto a = field_make("GF(5,3)", 42);
    auto b = field_make("GF(5,3)", 42);
    REQUIRE(a == b);
    field_validate(a);
}

TEST_CASE("GF(5) satisfies the field axioms exhaustively", "[fields]") {
    PrimeField F(5);
    for (u64 a = 0; a < 5; ++a) {
        REQUIRE(F.add(a, F.zero()) == a);
        REQUIRE(F.mul(a, F.one()) == a);
        REQUIRE(F.add(a, F.neg(a)) == 0);
        if (a != 0) REQUIRE(F.mul(a, F.inv(a)) == 1);
        for (u64 b = 0; b < 5; ++b) {
            REQUIRE(F.add(a, b) == F.add(b, a));
            REQUIRE(F.mul(a, b) == F.mul(b, a));
            for (u64 c = 0; c < 5; ++c) {
                REQUIRE(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            }
        }
    }
    REQUIRE_THROWS_AS(F.inv(0), precondition_error);
}

TEST_CASE("PrimeField near the 2^61 bound matches GMP", "[fields]") {
    u64 p = 2305843009213693951ull;  // 2^61 - 1, prime
    PrimeField F(p);
    SplitMix64 rng(17);
    for (int i = 0; i < 100; ++i) {
        u64 a = rng.below(p), b = rng.below(p);
        Int ma(static_cast<unsigned long>(a)), mb(static_cast<unsigned long>(b)),
            mp(static_cast<unsigned long>(p));
        REQUIRE(F.mul(a, b) == Int((ma * mb) % mp).get_ui());
        REQUIRE(F.add(a, b) == Int((ma + mb) % mp).get_ui());
        if (a != 0) REQUIRE(F.mul(a, F.inv(a)) == 1);
    }
    REQUIRE(F.from_long(-3) == p - 3);
    REQUIRE(F.from_int(Int(-3)) == p - 3);
}

TEST_CASE("irreducibility test agrees with the count over GF(2)", "[fields]") {
    // There are exactly 3 irreducible monic quartics over GF(2).
    std::vector<fppoly::Poly> found;
    for (unsigned bits = 0; bits < 16; ++bits) {
        fppoly::Poly m{bits & 1u, (bits >> 1) & 1u, (bits >> 2) & 1u, (bits >> 3) & 1u, 1};
        if (fppoly::is_irreducible(m, 2)) found.push_back(m);
    }
    REQUIRE(found.size() == 3);
    REQUIRE(found[0] == fppoly::Poly{1, 1, 0, 0, 1});  // t^4+t+1
    REQUIRE(found[1] == fppoly::Poly{1, 0, 0, 1, 1});  // t^4+t^3+1
    REQUIRE(found[2] == fppoly::Poly{1, 1, 1, 1, 1});  // t^4+t^3+t^2+t+1

    // Degree <= 3 over a prime field: irreducible iff no roots. Exhaustive over GF(5).
    for (u64 c0 = 0; c0 < 5; ++c0)
        for (u64 c1 = 0; c1 < 5; ++c1)
            for (u64 c2 = 0; c2 < 5; ++c2) {
                fppoly::Poly m{c0, c1, c2, 1};
                bool has_root = false;
                for (u64 x = 0; x < 5; ++x) {
                    u64 v = (c0 + c1 * x + c2 * x * x + x * x * x) % 5;
                    if (v == 0) has_root = true;
                }
                REQUIRE(fppoly::is_irreducible(m, 5) == !has_root);
            }
}

TEST_CASE("GF(5,2) arithmetic", "[fields]") {
    auto spec = field_make("GF(5,2)");
    field_validate(spec);
    ExtField F(spec.p, spec.k, spec.modulus);

    // modulus has no roots in GF(5) (independent of the irreducibility test)
    for (u64 x = 0; x < 5; ++x) {
        u64 v = (spec.modulus[0] + spec.modulus[1] * x + spec.modulus[2] * x * x) % 5;
        REQUIRE(v != 0);
    }

    REQUIRE(F.elem_count() == 25);
    for (u64 i = 0; i < 25; ++i) REQUIRE(F.index_of(F.elem_at(i)) == i);

    // a^25 = a for every element; a^24 = 1 for nonzero a
    for (u64 i = 0; i < 25; ++i) {
        auto a = F.elem_at(i);
        auto pw = F.one();
        for (int e = 0; e < 25; ++e) pw = F.mul(pw, a);
        REQUIRE(pw == a);
        if (!F.is_zero(a)) {
            auto u = F.one();
            for (int e = 0; e < 24; ++e) u = F.mul(u, a);
            REQUIRE(u == F.one());
            REQUIRE(F.mul(a, F.inv(a)) == F.one());
        }
    }

    // sampled ring axioms
    SplitMix64 rng(23);
    for (int i = 0; i < 50; ++i) {
        auto a = F.random(rng), b = F.random(rng), c = F.random(rng);
        REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        REQUIRE(F.add(a, F.neg(a)) == F.zero());
    }
    REQUIRE_THROWS_AS(F.inv(F.zero()), precondition_error);
}

TEST_CASE("GF(13,4) validates and satisfies Fermat", "[fields]") {
    auto spec = field_make("GF(13,4)");
    field_validate(spec);
    REQUIRE(spec.size() == 28561);
    ExtField F(spec.p, spec.k, spec.modulus);
    SplitMix64 rng(31);
    for (int i = 0; i < 5; ++i) {
        auto a = F.random(rng);
        // a^(13^4) == a by square-and-multiply
        auto r = F.one();
        auto base = a;
        u64 e = 28561;
        while (e) {
            if (e & 1) r = F.mul(r, base);
            base = F.mul(base, base);
            e >>= 1;
        }
        REQUIRE(r == a);
    }
}

TEST_CASE("rationals ring", "[fields]") {
    RationalField F;
    auto a = F.from_long(-6);
    auto b = make_rat(4, 9);
    REQUIRE(F.mul(a, b) == make_rat(-8, 3));
    REQUIRE(F.to_string(F.mul(a, b)) == "-8/3");
    REQUIRE(F.inv(make_rat(3, 7)) == make_rat(7, 3));
    REQUIRE_THROWS_AS(F.inv(F.zero()), precondition_error);
    REQUIRE(F.to_string(F.from_int(Int(42))) == "42");
}

TEST_CASE("multiplicative_order", "[fields]") {
    REQUIRE(multiplicative_order(2, 5) == 4);
    REQUIRE(multiplicative_order(2, 7) == 3);
    REQUIRE(multiplicative_order(2, 11) == 10);
    REQUIRE(multiplicative_order(2, 13) == 12);
    REQUIRE(multiplicative_order(1, 101) == 1);
    REQUIRE(multiplicative_order(2, 3) == 2);
    REQUIRE_THROWS_AS(multiplicative_order(0, 7), precondition_error);
    REQUIRE_THROWS_AS(multiplicative_order(10, 5), precondition_error);  // 10 = 0 mod 5
    REQUIRE_THROWS_AS(multiplicative_order(2, 6), precondition_error);   // not prime

    // against brute force for every p <= 61 and every a
    for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                  31ull, 37ull, 41ull, 43ull, 47ull, 53ull, 59ull, 61ull}) {
        for (u64 a = 1; a < p; ++a) {
            u64 m = 1, x = a;
            while (x != 1) {
                x = (x * a) % p;
                ++m;
            }
            REQUIRE(multiplicative_order(a, p) == m);
            REQUIRE((p - 1) % m == 0);
        }
    }
}
