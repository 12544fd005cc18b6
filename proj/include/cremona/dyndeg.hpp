// Certified bounds on the first dynamical degree lambda_1 = lim deg(f^n)^(1/n)
// from finitely many iterate degrees, plus a bracketing routine for the
// characteristic root of x^m - 2x^(m-1) + 1 and a heuristic growth classifier.
//
// Every bound is an exact rational, rounded toward the sound side: lower
// bounds are rounded down, upper bounds up.  Square and n-th roots are
// bracketed by dyadic rationals (nth_root_lower / nth_root_upper), never
// evaluated in floating point.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cremona/arith.hpp"
#include "cremona/cremona.hpp"

namespace cremona {

// Which rule produced the lower bound of an entry.  Submult entries carry an
// upper bound only.
enum class BoundTag { Thm31, Cor32, Submult };

inline const char* to_string(BoundTag t) {
    switch (t) {
        case BoundTag::Thm31: return "thm31";
        case BoundTag::Cor32: return "cor32";
        case BoundTag::Submult: return "submult";
    }
    return "?";
}

/// One row of bound data derived from the pair (deg f^n, deg f^{2n}).
struct BoundEntry {
    unsigned n = 0;
    std::optional<Rat> lower;  // absent when the degrees are too small to certify
    Rat upper;                 // (2 deg f^n)^(1/n), always available
    BoundTag tag = BoundTag::Submult;
};

struct Lambda1Bounds {
    std::vector<BoundEntry> entries;
    std::optional<Rat> best_lower;  // max over entry lowers
    std::optional<Rat> best_upper;  // min over entry uppers
};

namespace detail {

inline const Int& three_pow_36() {
    static const Int v = [] {
        Int t;
        mpz_ui_pow_ui(t.get_mpz_t(), 3, 36);
        return t;
    }();
    return v;
}

// q_n^2 = d2^2 / (2 * 3^36 * d1^2) with d1 = deg f^n, d2 = deg f^{2n}.  The
// lower-bound rules below apply iff q_n >= 1, tested here on exact integers
// so no irrational ever enters the applicability decision.
inline std::optional<Rat> qn_squared(u64 d1, u64 d2) {
    if (d1 < 1 || d2 < 1)
        throw precondition_error("lambda_1 bounds: iterate degrees must be >= 1");
    Int lhs = Int(d2) * Int(d2);
    Int rhs = 2 * three_pow_36() * Int(d1) * Int(d1);
    if (lhs < rhs) return std::nullopt;
    Rat q(lhs, rhs);
    q.canonicalize();
    return q;
}

// B(q) = ((4*3^36 - 1) q^2 + 1) / (4*3^36 q) evaluated at q = sqrt(qsq) and
// then rooted: returns a rational r <= B(q)^(1/(2n)).  The denominator uses an
// upper bracket on q and the final root a lower bracket, so r never exceeds
// the true value; since B(q) >= 1 for q >= 1 the result is clamped to 1.
inline Rat thm31_from_qsq(const Rat& qsq, unsigned n, unsigned prec_bits = 96) {
    if (qsq == 1) return Rat(1);
    Int four36 = 4 * three_pow_36();
    Rat q_hi = nth_root_upper(qsq, 2, prec_bits);
    Rat num = Rat(four36 - 1) * qsq + 1;
    Rat den = Rat(four36) * q_hi;
    Rat b_lo = num / den;
    Rat r = nth_root_lower(b_lo, 2ul * n, prec_bits);
    if (r < 1) r = 1;
    return r;
}

// (q_n / 2)^(1/n) = (qsq / 4)^(1/(2n)), rounded down.  Deliberately not
// clamped: values below 1 are returned so the caller can see the rule fired
// but produced nothing useful.
inline Rat cor32_from_qsq(const Rat& qsq, unsigned n, unsigned prec_bits = 96) {
    Rat v = qsq / 4;
    if (v == 1) return Rat(1);
    return nth_root_lower(v, 2ul * n, prec_bits);
}

}  // namespace detail

/// Lower bound on lambda_1 from d1 = deg f^n and d2 = deg f^{2n}.
/// nullopt when d2^2 < 2*3^36*d1^2 (the rule needs q_n >= 1); otherwise a
/// rational r with 1 <= r < lambda_1.
inline std::optional<Rat> thm31_lower_bound(u64 d1, u64 d2, unsigned n) {
    if (n < 1) throw precondition_error("thm31_lower_bound: n must be >= 1");
    auto qsq = detail::qn_squared(d1, d2);
    if (!qsq) return std::nullopt;
    return detail::thm31_from_qsq(*qsq, n);
}

/// Lower bound (q_n/2)^(1/n) on lambda_1; same applicability test as
/// thm31_lower_bound.  May return a value below 1 (sound but useless).
inline std::optional<Rat> cor32_lower_bound(u64 d1, u64 d2, unsigned n) {
    if (n < 1) throw precondition_error("cor32_lower_bound: n must be >= 1");
    auto qsq = detail::qn_squared(d1, d2);
    if (!qsq) return std::nullopt;
    return detail::cor32_from_qsq(*qsq, n);
}

/// Upper bound (2 dn)^(1/n) on lambda_1, from submultiplicativity of degrees
/// (deg f^(m+n) <= 2 deg f^m deg f^n and Fekete's lemma).
inline Rat submult_upper_bound(u64 dn, unsigned n) {
    if (n < 1) throw precondition_error("submult_upper_bound: n must be >= 1");
    if (dn < 1) throw precondition_error("submult_upper_bound: degree must be >= 1");
    return nth_root_upper(Rat(2 * Int(dn)), n);
}

/// Runs all three bound rules on every usable pair (n, 2n) in a degree
/// sequence (degs[k] = deg f^(k+1)) and aggregates the best certified window.
inline Lambda1Bounds bounds_from_sequence(const std::vector<u64>& degs) {
    if (degs.empty()) throw precondition_error("bounds_from_sequence: empty sequence");
    Lambda1Bounds out;
    for (unsigned n = 1; 2 * n <= degs.size(); ++n) {
        u64 d1 = degs[n - 1];
        u64 d2 = degs[2 * n - 1];
        BoundEntry e;
        e.n = n;
        e.upper = submult_upper_bound(d1, n);
        auto a = thm31_lower_bound(d1, d2, n);
        auto b = cor32_lower_bound(d1, d2, n);
        if (a) {
            // Same applicability, so a and b are present together.  Keep the
            // larger; B(q) beats (q/2)^2 for q < 4 and loses above.
            if (b && *b > *a) {
                e.lower = *b;
                e.tag = BoundTag::Cor32;
            } else {
                e.lower = *a;
                e.tag = BoundTag::Thm31;
            }
        }
        if (e.lower && (!out.best_lower || *e.lower > *out.best_lower))
            out.best_lower = *e.lower;
        if (!out.best_upper || e.upper < *out.best_upper) out.best_upper = e.upper;
        out.entries.push_back(std::move(e));
    }
    return out;
}

inline Lambda1Bounds bounds_from_sequence(const DegreeSequence& seq) {
    std::vector<u64> degs(seq.degrees.begin(), seq.degrees.end());
    return bounds_from_sequence(degs);
}

/// Exact rational bracket around a real root; lo == hi when the root was hit
/// exactly (or is known in closed form).
struct RootBracket {
    Rat lo;
    Rat hi;
};

namespace detail {

// x^m - 2x^(m-1) + 1 at an exact rational.
inline Rat drop_poly_eval(unsigned m, const Rat& x) {
    return (x - 2) * rat_pow(x, m - 1) + 1;
}

}  // namespace detail

/// Largest real root of x^m - 2x^(m-1) + 1 for m >= 2, bracketed to width
/// <= tol by exact-sign bisection.  Starts from the a priori bracket
/// (2 - (2/3)^(m-1), 2 - (1/2)^(m-1)) when m > 2.  For m = 2 the polynomial
/// is (x-1)^2 and the root 1 is returned as a collapsed bracket.
inline RootBracket largest_real_root_sec5(unsigned m, const Rat& tol) {
    if (m < 2) throw precondition_error("largest_real_root_sec5: need m >= 2");
    if (!(tol > 0)) throw precondition_error("largest_real_root_sec5: tol must be > 0");
    if (m == 2) return {Rat(1), Rat(1)};
    Rat lo = 2 - rat_pow(make_rat(2, 3), m - 1);
    Rat hi = 2 - rat_pow(make_rat(1, 2), m - 1);
    if (!(sgn(detail::drop_poly_eval(m, lo)) < 0 && sgn(detail::drop_poly_eval(m, hi)) > 0))
        throw error("largest_real_root_sec5: initial bracket lost the sign change");
    while (hi - lo > tol) {
        Rat mid = (lo + hi) / 2;
        int s = sgn(detail::drop_poly_eval(m, mid));
        if (s == 0) return {mid, mid};
        if (s < 0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Growth classification.  Heuristic by design: it inspects a tail window of
// the finite sequence and can be fooled; the note field says so in every
// result.

enum class GrowthKind { Bounded, Linear, Quadratic, Exponential, Inconclusive };

inline const char* to_string(GrowthKind k) {
    switch (k) {
        case GrowthKind::Bounded: return "bounded";
        case GrowthKind::Linear: return "linear";
        case GrowthKind::Quadratic: return "quadratic";
        case GrowthKind::Exponential: return "exponential";
        case GrowthKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct GrowthClass {
    GrowthKind kind = GrowthKind::Inconclusive;
    double coefficient = 0.0;     // slope / quadratic coefficient / growth rate
    std::vector<double> ratios;   // successive-term ratios, for diagnostics
    std::string note = "heuristic classification from a finite window, not a proof";
};

/// Classifies a degree sequence by its tail: eventually-constant terms, or
/// eventually-constant first or second differences, or ratios bounded away
/// from 1.  Needs at least 6 terms.  Scale-invariant in the verdict.
inline GrowthClass classify_growth(const std::vector<u64>& degs) {
    constexpr double kExpRatioFloor = 1.25;  // min tail ratio to call it exponential
    if (degs.size() < 6)
        throw precondition_error("classify_growth: need at least 6 terms");
    for (u64 d : degs)
        if (d < 1) throw precondition_error("classify_growth: degrees must be >= 1");
    const std::size_t k = degs.size();
    const std::size_t window = std::max<std::size_t>(4, k / 2);  // tail terms inspected
    const std::size_t start = k - window;

    GrowthClass out;
    for (std::size_t i = 0; i + 1 < k; ++i)
        out.ratios.push_back(double(degs[i + 1]) / double(degs[i]));

    std::vector<long long> d1;
    for (std::size_t i = start; i + 1 < k; ++i)
        d1.push_back((long long)degs[i + 1] - (long long)degs[i]);
    auto all_equal = [](const std::vector<long long>& v) {
        return std::all_of(v.begin(), v.end(), [&](long long x) { return x == v.front(); });
    };

    if (all_equal(d1) && d1.front() == 0) {
        out.kind = GrowthKind::Bounded;
        out.coefficient = double(degs.back());
        return out;
    }
    if (all_equal(d1) && d1.front() > 0) {
        out.kind = GrowthKind::Linear;
        out.coefficient = double(d1.front());
        return out;
    }
    std::vector<long long> d2;
    for (std::size_t i = 0; i + 1 < d1.size(); ++i) d2.push_back(d1[i + 1] - d1[i]);
    if (d2.size() >= 2 && all_equal(d2) && d2.front() > 0) {
        out.kind = GrowthKind::Quadratic;
        out.coefficient = double(d2.front()) / 2.0;
        return out;
    }
    double min_ratio = out.ratios[start];
    for (std::size_t i = start; i < out.ratios.size(); ++i)
        min_ratio = std::min(min_ratio, out.ratios[i]);
    if (min_ratio >= kExpRatioFloor) {
        out.kind = GrowthKind::Exponential;
        // Geometric mean of the tail ratios.
        out.coefficient =
            std::pow(double(degs.back()) / double(degs[start]), 1.0 / double(k - 1 - start));
        return out;
    }
    out.kind = GrowthKind::Inconclusive;
    return out;
}

inline GrowthClass classify_growth(const DegreeSequence& seq) {
    std::vector<u64> degs(seq.degrees.begin(), seq.degrees.end());
    return classify_growth(degs);
}

}  // namespace cremona
