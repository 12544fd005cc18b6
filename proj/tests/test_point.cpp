// Projective points: canonical scaling, evaluation, and plane enumeration.

#include <catch2/catch_amalgamated.hpp>

#include "cremona/parse.hpp"
#include "cremona/point.hpp"
#include "test_util.hpp"

using namespace cremona;

TEST_CASE("point canonicalization") {
    RationalField Q;
    PrimeField F5{5};

    SECTION("first nonzero coordinate becomes 1") {
        auto p = pt_make_longs(Q, 2, 4, 6);
        CHECK(Q.eq(p.c[0], Q.from_long(1)));
        CHECK(Q.eq(p.c[1], Q.from_long(2)));
        CHECK(Q.eq(p.c[2], Q.from_long(3)));
        CHECK(p == pt_make_longs(Q, 1, 2, 3));
        CHECK(p == pt_make_longs(Q, -3, -6, -9));
    }

    SECTION("leading zeros are preserved") {
        auto p = pt_make_longs(Q, 0, -2, 3);
        CHECK(Q.is_zero(p.c[0]));
        CHECK(Q.eq(p.c[1], Q.from_long(1)));
        CHECK(Q.eq(p.c[2], Q.div(Q.from_long(-3), Q.from_long(2))));

        auto q = pt_make_longs(Q, 0, 0, 7);
        CHECK(q == pt_make_longs(Q, 0, 0, 1));
    }

    SECTION("over a prime field") {
        // [0,-2,3] = [0,3,3] ~ [0,1,1] mod 5
        auto p = pt_make_longs(F5, 0, -2, 3);
        CHECK(p == pt_make_longs(F5, 0, 1, 1));
        // the mod-5 orbit point [0,3,4] ~ [0,1,3]
        auto q = pt_make_longs(F5, 0, 3, 4);
        CHECK(q == pt_make_longs(F5, 0, 1, 3));
        CHECK_FALSE(p == q);
    }

    SECTION("the zero triple is rejected") {
        CHECK_THROWS_AS(pt_make_longs(Q, 0, 0, 0), precondition_error);
        CHECK_THROWS_AS(pt_make_longs(F5, 5, 10, 0), precondition_error);
    }

    SECTION("printing") {
        CHECK(pt_to_string(Q, pt_make_longs(Q, 1, 1, 0)) == "[1, 1, 0]");
        CHECK(pt_to_string(F5, pt_make_longs(F5, 0, 3, 4)) == "[0, 1, 3]");
    }
}

TEST_CASE("evaluation at a point") {
    RationalField Q;
    PrimeField F5{5};

    SECTION("rational") {
        auto P = hp_parse(Q, "x*y - 2*z^2");
        // canonical representative of [0,-2,3] is [0,1,-3/2]
        auto pt = pt_make_longs(Q, 0, -2, 3);
        auto v = hp_eval(Q, P, pt);
        CHECK(Q.eq(v, Q.div(Q.from_long(-9), Q.from_long(2))));

        auto fixed = pt_make_longs(Q, 1, 1, 0);
        CHECK(Q.eq(hp_eval(Q, hp_parse(Q, "x*y"), fixed), Q.from_long(1)));
        CHECK(Q.is_zero(hp_eval(Q, hp_parse(Q, "y*z + 3*z^2"), fixed)));
    }

    SECTION("prime field") {
        auto P = hp_parse(F5, "x*y - 2*z^2");
        auto v = hp_eval(F5, P, pt_make_longs(F5, 0, -2, 3));  // [0,1,1]
        CHECK(F5.eq(v, F5.from_long(-2)));
    }

    SECTION("constants and zero") {
        auto pt = pt_make_longs(Q, 1, 2, 3);
        CHECK(Q.eq(hp_eval(Q, hp_const(Q, Q.from_long(7)), pt), Q.from_long(7)));
        CHECK(Q.is_zero(hp_eval(Q, HPoly<RationalField>{}, pt)));
    }
}

TEST_CASE("enumeration of the projective plane") {
    SECTION("counts are q^2 + q + 1") {
        PrimeField F2{2};
        PrimeField F5{5};
        auto pts2 = enumerate_p2(F2);
        auto pts5 = enumerate_p2(F5);
        CHECK(pts2.size() == 7);
        CHECK(pts5.size() == 31);

        auto spec9 = field_make("GF(3,2)");
        ExtField F9(spec9.p, spec9.k, spec9.modulus);
        CHECK(enumerate_p2(F9).size() == 91);
    }

    SECTION("all points are distinct and canonical") {
        PrimeField F5{5};
        auto pts = enumerate_p2(F5);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            // canonical: first nonzero coordinate is 1
            std::size_t lead = 0;
            while (F5.is_zero(pts[i].c[lead])) ++lead;
            CHECK(F5.eq(pts[i].c[lead], F5.one()));
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                CHECK_FALSE(pts[i] == pts[j]);
            }
        }
    }

    SECTION("distinctness over an extension field") {
        auto spec = field_make("GF(3,2)");
        ExtField F9(spec.p, spec.k, spec.modulus);
        auto pts = enumerate_p2(F9);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                CHECK_FALSE(pts[i] == pts[j]);
    }
}
