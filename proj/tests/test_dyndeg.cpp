// Dynamical-degree machinery: the two lower-bound rules and the
// submultiplicative upper bound with their exact applicability test, sequence
// aggregation, root bracketing for x^m - 2x^(m-1) + 1, and the growth
// classifier.  Numeric pins come from a 40-digit independent computation;
// soundness checks are exact rational inequalities.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cremona/dyndeg.hpp"
#include "cremona/parse.hpp"
#include "test_util.hpp"

using namespace cremona;

namespace {

double approx(const Rat& r) { return r.get_d(); }

u64 two_pow(unsigned k) { return u64(1) << k; }

// B(q)^2 is exactly rational even though B(q) is not: B(q)^2 =
// ((4*3^36-1) qsq + 1)^2 / ((4*3^36)^2 qsq).  Used to verify lower bounds by
// pure rational arithmetic.
Rat b_squared(const Rat& qsq) {
    Int four36 = 4 * detail::three_pow_36();
    Rat num = Rat(four36 - 1) * qsq + 1;
    return num * num / (Rat(four36 * four36) * qsq);
}

// Random degree sequence satisfying d_{a+b} <= 2 d_a d_b for every split,
// built by clamping a geometric target below all split caps.
std::vector<u64> random_submultiplicative(SplitMix64& rng, std::size_t len, const Rat& growth) {
    std::vector<u64> d;
    d.push_back(1 + rng.below(4));
    for (std::size_t n = 2; n <= len; ++n) {
        Int cap = Int(1) << 61;
        for (std::size_t a = 1; a < n; ++a) {
            Int c = 2 * Int(d[a - 1]) * Int(d[n - a - 1]);
            if (c < cap) cap = c;
        }
        Rat target = rat_pow(growth, n) * Rat(d[0]);
        Int want = target.get_num() / target.get_den();
        if (want < 1) want = 1;
        if (want > cap) want = cap;
        d.push_back(want.get_ui());
    }
    return d;
}

}  // namespace

TEST_CASE("lower-bound applicability is an exact integer test") {
    // Small degrees never clear the 2*3^36 constant.
    CHECK(!thm31_lower_bound(2, 4, 1));
    CHECK(!cor32_lower_bound(2, 4, 1));
    CHECK(!thm31_lower_bound(1000, 1000000, 10));

    // The doubling sequence clears it first at n = 30: 2^59 >= 3^36 > 2^57.
    CHECK(thm31_lower_bound(two_pow(30), two_pow(60), 30).has_value());
    CHECK(!thm31_lower_bound(two_pow(29), two_pow(58), 29).has_value());

    // Agreement with a 256-bit floating-point check near the boundary.  All
    // quantities fit in 124 bits, so the float comparison is itself exact and
    // the two tests must coincide.
    SplitMix64 rng(2024);
    Int c = 2 * detail::three_pow_36();
    for (int trial = 0; trial < 200; ++trial) {
        u64 d1 = 1 + rng.below(1u << 30);
        Int target2 = c * Int(d1) * Int(d1);
        Int base = floor_nth_root(target2, 2);
        u64 d2 = base.get_ui() + rng.below(5);
        if (d2 < 1) d2 = 1;
        bool exact = thm31_lower_bound(d1, d2, 3).has_value();
        mpf_class lhs(0, 256), rhs(0, 256);
        lhs = mpf_class(Int(d2) * Int(d2), 256);
        rhs = mpf_class(target2, 256);
        CHECK(exact == (lhs >= rhs));
        CHECK(exact == cor32_lower_bound(d1, d2, 3).has_value());
    }
}

TEST_CASE("thm31 lower bound: pinned values and exact soundness") {
    // Boundary q = 1 gives exactly 1.
    CHECK(detail::thm31_from_qsq(Rat(1), 5) == Rat(1));

    // d1 = 2^31, d2 = 2^62, n = 31: q_31^2 = 2^61/3^36, bound 1.02227622986...
    auto r = thm31_lower_bound(two_pow(31), two_pow(62), 31);
    REQUIRE(r.has_value());
    CHECK(approx(*r) == Catch::Approx(1.0222762298662498).epsilon(1e-12));
    CHECK(*r >= 1);

    // n = 30 companion pair.
    auto r30 = thm31_lower_bound(two_pow(30), two_pow(60), 30);
    REQUIRE(r30.has_value());
    CHECK(approx(*r30) == Catch::Approx(1.0112767861266336).epsilon(1e-12));

    // Exact soundness: r^(4n) <= B(q)^2, all rational.
    Rat qsq31(Int(two_pow(61)), detail::three_pow_36());
    qsq31.canonicalize();
    CHECK(rat_pow(*r, 4 * 31) <= b_squared(qsq31));

    // Clamp: barely-applicable ratios still report at least 1.
    Rat barely = Rat(1) + make_rat(1, 1000000);
    CHECK(detail::thm31_from_qsq(barely, 3) >= 1);
}

TEST_CASE("cor32 lower bound: pinned values, useless range, exact soundness") {
    auto r = cor32_lower_bound(two_pow(31), two_pow(62), 31);
    REQUIRE(r.has_value());
    CHECK(approx(*r) == Catch::Approx(1.0219411340096082).epsilon(1e-12));

    // Applicable but below 1: the rule fires yet certifies nothing.
    auto weak = cor32_lower_bound(two_pow(30), two_pow(60), 30);
    REQUIRE(weak.has_value());
    CHECK(*weak < 1);
    CHECK(approx(*weak) == Catch::Approx(0.9993226778173817).epsilon(1e-12));

    // q = 2 exactly: (2/2)^(1/n) = 1.
    CHECK(detail::cor32_from_qsq(Rat(4), 7) == Rat(1));

    // Exact soundness: r^(2n) <= qsq/4.
    Rat qsq31(Int(two_pow(61)), detail::three_pow_36());
    qsq31.canonicalize();
    CHECK(rat_pow(*r, 2 * 31) <= qsq31 / 4);
}

TEST_CASE("submultiplicative upper bound") {
    CHECK(submult_upper_bound(2, 1) == Rat(4));
    CHECK(submult_upper_bound(1, 1) == Rat(2));

    Rat t = submult_upper_bound(1, 10);
    CHECK(approx(t) == Catch::Approx(1.0717734625362932).epsilon(1e-12));
    CHECK(rat_pow(t, 10) >= 2);  // upper bracket never undershoots

    Rat big = submult_upper_bound(two_pow(31), 31);
    CHECK(approx(big) == Catch::Approx(2.0452228712025369).epsilon(1e-12));
    CHECK(rat_pow(big, 31) >= Rat(Int(two_pow(32))));

    // For a flat sequence the upper tends to 1 from above.
    Rat prev = submult_upper_bound(1, 1);
    for (unsigned n = 2; n <= 24; ++n) {
        Rat cur = submult_upper_bound(1, n);
        CHECK(cur < prev);
        CHECK(cur > 1);
        prev = cur;
    }

    CHECK_THROWS_AS(submult_upper_bound(0, 3), precondition_error);
    CHECK_THROWS_AS(submult_upper_bound(2, 0), precondition_error);
}

TEST_CASE("bounds_from_sequence: small real sequences give uppers only") {
    // deg f^n = 2^n for the rational quadratic map, 8 iterates.
    std::vector<u64> degs;
    for (unsigned n = 1; n <= 8; ++n) degs.push_back(two_pow(n));
    Lambda1Bounds b = bounds_from_sequence(degs);
    REQUIRE(b.entries.size() == 4);
    for (const auto& e : b.entries) {
        CHECK(!e.lower.has_value());
        CHECK(e.tag == BoundTag::Submult);
    }
    CHECK(!b.best_lower.has_value());
    REQUIRE(b.best_upper.has_value());
    CHECK(approx(*b.best_upper) == Catch::Approx(2.3784142300054421).epsilon(1e-12));

    // Identity map: twenty 1s, best upper 2^(1/10) at the last pair.
    std::vector<u64> ones(20, 1);
    Lambda1Bounds bi = bounds_from_sequence(ones);
    REQUIRE(bi.entries.size() == 10);
    CHECK(!bi.best_lower.has_value());
    CHECK(approx(*bi.best_upper) == Catch::Approx(1.0717734625362932).epsilon(1e-12));

    CHECK_THROWS_AS(bounds_from_sequence(std::vector<u64>{}), precondition_error);
}

TEST_CASE("bounds_from_sequence: synthetic doubling sequence to 62 terms") {
    std::vector<u64> degs;
    for (unsigned n = 1; n <= 62; ++n) degs.push_back(two_pow(n));
    Lambda1Bounds b = bounds_from_sequence(degs);
    REQUIRE(b.entries.size() == 31);

    // Lower certificates appear exactly from n = 30 on.
    for (unsigned n = 1; n <= 29; ++n) CHECK(!b.entries[n - 1].lower.has_value());
    REQUIRE(b.entries[29].lower.has_value());
    REQUIRE(b.entries[30].lower.has_value());
    CHECK(b.entries[29].tag == BoundTag::Thm31);
    CHECK(b.entries[30].tag == BoundTag::Thm31);

    REQUIRE(b.best_lower.has_value());
    REQUIRE(b.best_upper.has_value());
    CHECK(approx(*b.best_lower) == Catch::Approx(1.0222762298662498).epsilon(1e-12));
    CHECK(approx(*b.best_upper) == Catch::Approx(2.0452228712025369).epsilon(1e-12));
    CHECK(*b.best_lower > 1);
    CHECK(*b.best_lower <= *b.best_upper);

    // Every lower sits below every upper.
    for (const auto& e1 : b.entries)
        if (e1.lower)
            for (const auto& e2 : b.entries) CHECK(*e1.lower <= e2.upper);
}

TEST_CASE("bounds_from_sequence: refinement is monotone, certificates stay sound") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t len = 12 + rng.below(5);
        Rat growth = make_rat(15 + long(rng.below(12)), 10);  // 1.5 .. 2.6
        std::vector<u64> degs = random_submultiplicative(rng, len, growth);

        Lambda1Bounds full = bounds_from_sequence(degs);
        std::vector<u64> prefix(degs.begin(), degs.end() - 3);
        Lambda1Bounds part = bounds_from_sequence(prefix);

        if (part.best_upper && full.best_upper) CHECK(*full.best_upper <= *part.best_upper);
        if (part.best_lower) {
            REQUIRE(full.best_lower.has_value());
            CHECK(*full.best_lower >= *part.best_lower);
        }
        if (full.best_lower && full.best_upper) CHECK(*full.best_lower <= *full.best_upper);

        // Entries without a lower really fail the integer test.
        for (const auto& e : full.entries)
            if (!e.lower) {
                Int lhs = Int(degs[2 * e.n - 1]) * Int(degs[2 * e.n - 1]);
                Int rhs = 2 * detail::three_pow_36() * Int(degs[e.n - 1]) * Int(degs[e.n - 1]);
                CHECK(lhs < rhs);
            }
    }

    // Long doubling-like sequences do fire certificates; soundness must hold.
    for (int trial = 0; trial < 10; ++trial) {
        Rat growth = make_rat(19 + long(rng.below(7)), 10);  // 1.9 .. 2.5, clamped to ~2
        std::vector<u64> degs = random_submultiplicative(rng, 62, growth);
        Lambda1Bounds b = bounds_from_sequence(degs);
        if (!b.best_lower) continue;
        REQUIRE(b.best_upper.has_value());
        CHECK(*b.best_lower <= *b.best_upper);
        for (const auto& e1 : b.entries)
            if (e1.lower)
                for (const auto& e2 : b.entries) CHECK(*e1.lower <= e2.upper);
    }
}

TEST_CASE("bounds_from_sequence accepts a DegreeSequence") {
    DegreeSequence seq;
    seq.degrees = {2, 4, 8, 15, 28, 52};  // quadratic map over F_5
    Lambda1Bounds b = bounds_from_sequence(seq);
    REQUIRE(b.entries.size() == 3);
    CHECK(!b.best_lower.has_value());
    CHECK(approx(*b.best_upper) == Catch::Approx(2.5198420997897463).epsilon(1e-12));
}

TEST_CASE("largest_real_root_sec5: pinned roots and bracket discipline") {
    Rat tol = make_rat(1, 1000000000);  // 1e-9

    // m = 2: (x-1)^2, collapsed bracket at the double root.
    RootBracket r2 = largest_real_root_sec5(2, tol);
    CHECK(r2.lo == Rat(1));
    CHECK(r2.hi == Rat(1));

    struct Pin {
        unsigned m;
        double root;
    };
    const Pin pins[] = {
        {3, 1.6180339887498948},   // (1+sqrt 5)/2 from (x-1)(x^2-x-1)
        {4, 1.8392867552141611},   // real root of x^3 = x^2+x+1 from (x-1)(x^3-x^2-x-1)
        {5, 1.9275619754829253},
        {12, 1.9995104019782855},
    };
    for (const Pin& pin : pins) {
        RootBracket r = largest_real_root_sec5(pin.m, tol);
        CHECK(r.hi - r.lo <= tol);
        CHECK(sgn(detail::drop_poly_eval(pin.m, r.lo)) < 0);
        CHECK(sgn(detail::drop_poly_eval(pin.m, r.hi)) > 0);
        CHECK(approx(r.lo) <= pin.root + 1e-9);
        CHECK(approx(r.hi) >= pin.root - 1e-9);
        // Stays inside the a priori bracket.
        CHECK(r.lo >= 2 - rat_pow(make_rat(2, 3), pin.m - 1));
        CHECK(r.hi <= 2 - rat_pow(make_rat(1, 2), pin.m - 1));
    }

    // Roots increase with m toward 2.
    Rat prev = largest_real_root_sec5(3, tol).lo;
    for (unsigned m = 4; m <= 14; ++m) {
        RootBracket r = largest_real_root_sec5(m, tol);
        CHECK(r.lo > prev);
        CHECK(r.hi < 2);
        prev = r.lo;
    }

    // Coarse tolerance returns the untouched a priori bracket, still signed.
    RootBracket coarse = largest_real_root_sec5(6, Rat(1));
    CHECK(coarse.lo == 2 - rat_pow(make_rat(2, 3), 5));
    CHECK(coarse.hi == 2 - rat_pow(make_rat(1, 2), 5));

    CHECK_THROWS_AS(largest_real_root_sec5(1, tol), precondition_error);
    CHECK_THROWS_AS(largest_real_root_sec5(4, Rat(0)), precondition_error);
}

TEST_CASE("growth classification of synthetic sequences") {
    auto kind = [](std::vector<u64> v) { return classify_growth(v).kind; };

    CHECK(kind({1, 1, 1, 1, 1, 1}) == GrowthKind::Bounded);
    CHECK(kind({2, 3, 4, 5, 6, 7}) == GrowthKind::Linear);
    CHECK(kind({2, 5, 10, 17, 26, 37}) == GrowthKind::Quadratic);
    CHECK(kind({2, 4, 8, 16, 32, 64}) == GrowthKind::Exponential);
    CHECK(kind({10, 11, 13, 14, 16, 17}) == GrowthKind::Inconclusive);

    GrowthClass exp2 = classify_growth(std::vector<u64>{2, 4, 8, 16, 32, 64});
    CHECK(exp2.coefficient == Catch::Approx(2.0).margin(0.05));
    CHECK(exp2.ratios.size() == 5);
    CHECK(exp2.note.find("heuristic") != std::string::npos);

    GrowthClass lin = classify_growth(std::vector<u64>{2, 3, 4, 5, 6, 7});
    CHECK(lin.coefficient == Catch::Approx(1.0).margin(0.01));

    GrowthClass quad = classify_growth(std::vector<u64>{2, 5, 10, 17, 26, 37});
    CHECK(quad.coefficient == Catch::Approx(1.0).margin(0.01));

    // Ragged start, clean tail: only the tail decides.
    CHECK(kind({7, 7, 8, 10, 12, 14, 16, 18}) == GrowthKind::Linear);

    // The F_5 degree sequence of the quadratic map grows like its root 1.839...
    GrowthClass f5 = classify_growth(std::vector<u64>{2, 4, 8, 15, 28, 52});
    CHECK(f5.kind == GrowthKind::Exponential);
    CHECK(f5.coefficient > 1.7);
    CHECK(f5.coefficient < 2.0);

    // Scale robustness: a constant factor never changes the verdict.
    for (u64 c : {u64(3), u64(7)}) {
        for (std::vector<u64> base :
             {std::vector<u64>{1, 1, 1, 1, 1, 1}, std::vector<u64>{2, 3, 4, 5, 6, 7},
              std::vector<u64>{2, 5, 10, 17, 26, 37}, std::vector<u64>{2, 4, 8, 16, 32, 64},
              std::vector<u64>{10, 11, 13, 14, 16, 17}}) {
            GrowthKind before = classify_growth(base).kind;
            std::vector<u64> scaled = base;
            for (u64& d : scaled) d *= c;
            CHECK(classify_growth(scaled).kind == before);
        }
    }

    CHECK_THROWS_AS(classify_growth(std::vector<u64>{1, 2, 3, 4, 5}), precondition_error);
    CHECK_THROWS_AS(classify_growth(std::vector<u64>{1, 1, 0, 1, 1, 1}), precondition_error);
}

TEST_CASE("growth oracles from real maps") {
    RationalField Q;

    // Monomial shear [xy, yz, z^2]: the n-th iterate is [x y^n, y z^n, z^(n+1)],
    // so degrees grow linearly.  Check the closed form for n = 2 directly.
    auto shear = map_new(Q, hp_parse(Q, "x*y"), hp_parse(Q, "y*z"), hp_parse(Q, "z^2"));
    auto shear2 = compose(Q, shear, shear);
    auto shear2_expect =
        map_new(Q, hp_parse(Q, "x*y^2"), hp_parse(Q, "y*z^2"), hp_parse(Q, "z^3"));
    CHECK(shear2 == shear2_expect);
    DegreeSequence ds = iterate_degrees(Q, shear, 7);
    CHECK(ds.degrees == std::vector<unsigned>{2, 3, 4, 5, 6, 7, 8});
    CHECK(classify_growth(ds).kind == GrowthKind::Linear);

    // Triangular map [x^2, xy + z^2, xz]: iterates stay quadratic, the n-th
    // being [x^2, xy + n z^2, xz].
    auto tri = map_new(Q, hp_parse(Q, "x^2"), hp_parse(Q, "x*y + z^2"), hp_parse(Q, "x*z"));
    auto tri2 = compose(Q, tri, tri);
    CHECK(tri2 == map_new(Q, hp_parse(Q, "x^2"), hp_parse(Q, "x*y + 2*z^2"), hp_parse(Q, "x*z")));
    auto tri3 = compose(Q, tri, tri2);
    CHECK(tri3 == map_new(Q, hp_parse(Q, "x^2"), hp_parse(Q, "x*y + 3*z^2"), hp_parse(Q, "x*z")));
    DegreeSequence dt = iterate_degrees(Q, tri, 6);
    CHECK(dt.degrees == std::vector<unsigned>(6, 2));
    CHECK(classify_growth(dt).kind == GrowthKind::Bounded);
}

TEST_CASE("root bracket is consistent with bounds from the mod-p sequences") {
    Rat tol = make_rat(1, 1000000000);

    // F_5: drop sequence 2,4,8,15,28,52, root from m = 4.
    Lambda1Bounds b5 = bounds_from_sequence(std::vector<u64>{2, 4, 8, 15, 28, 52});
    RootBracket r5 = largest_real_root_sec5(4, tol);
    REQUIRE(b5.best_upper.has_value());
    CHECK(!b5.best_lower.has_value());
    CHECK(r5.hi <= *b5.best_upper);

    // F_7: 2,4,7,12,20, root from m = 3.
    Lambda1Bounds b7 = bounds_from_sequence(std::vector<u64>{2, 4, 7, 12, 20});
    RootBracket r7 = largest_real_root_sec5(3, tol);
    REQUIRE(b7.best_upper.has_value());
    CHECK(r7.hi <= *b7.best_upper);
}
