// Dynamics over the projective plane of a finite field: orbits with Brent
// cycle detection, an exhaustive periodic-point census driven by a successor
// table, a curve-membership rank test standing in for Zariski density, and
// randomized PGL_3 conjugation sweeps measuring how often a twisted map keeps
// full degree growth.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <thread>
#include <vector>

#include "cremona/cremona.hpp"
#include "cremona/point.hpp"

namespace cremona {

template <class Ring>
HPoly<Ring> jacobian_det(const Ring& R, const CremonaMap<Ring>& m) {
    return jacobian_det(R, m.f[0], m.f[1], m.f[2]);
}

enum class OrbitAbort { None, HitIndeterminacy, StepCap };

inline const char* to_string(OrbitAbort a) {
    switch (a) {
        case OrbitAbort::None: return "none";
        case OrbitAbort::HitIndeterminacy: return "hit-indeterminacy";
        case OrbitAbort::StepCap: return "step-cap";
    }
    return "?";
}

/// Forward orbit of a point: tail steps into a cycle of length `cycle`, or an
/// aborted walk.  `critical` is set when any visited point (including an
/// indeterminate endpoint) lies on the Jacobian-determinant locus.
template <class Ring>
struct OrbitRecord {
    ProjPoint<Ring> start;
    unsigned tail = 0;        // steps before the cycle closes
    unsigned cycle = 0;       // cycle length; 0 when aborted
    OrbitAbort abort = OrbitAbort::None;
    unsigned abort_step = 0;  // forward step whose point could not be mapped
    bool critical = false;
};

/// Brent-style cycle detection: one forward walk with a teleporting anchor
/// finds the cycle length, a second lam-spaced walk finds the tail.  The
/// plane is finite, so the walk either closes, hits an indeterminacy point,
/// or exceeds step_cap.
template <class Ring>
OrbitRecord<Ring> orbit(const Ring& R, const CremonaMap<Ring>& f, const ProjPoint<Ring>& start,
                        u64 step_cap = u64(1) << 22) {
    static_assert(Ring::is_finite, "orbit analysis needs a finite field");
    HPoly<Ring> jac = jacobian_det(R, f);
    auto on_locus = [&](const ProjPoint<Ring>& p) {
        return jac.is_zero() || R.is_zero(hp_eval(R, jac, p));
    };

    OrbitRecord<Ring> rec;
    rec.start = start;
    rec.critical = on_locus(start);

    // Phase 1: hare walks the forward sequence once; every hare position is a
    // point of the orbit, so criticality can be accumulated on the fly.
    ProjPoint<Ring> anchor = start;
    ProjPoint<Ring> hare = start;
    u64 pos = 0, power = 1, lam = 0;
    for (;;) {
        if (pos >= step_cap) {
            rec.abort = OrbitAbort::StepCap;
            rec.abort_step = unsigned(pos);
            return rec;
        }
        auto next = evaluate(R, f, hare);
        if (!next) {
            rec.abort = OrbitAbort::HitIndeterminacy;
            rec.abort_step = unsigned(pos);
            return rec;
        }
        hare = *next;
        ++pos;
        ++lam;
        if (!rec.critical && on_locus(hare)) rec.critical = true;
        if (hare == anchor) break;
        if (lam == power) {
            anchor = hare;
            power <<= 1;
            lam = 0;
        }
    }
    rec.cycle = unsigned(lam);

    // Phase 2: advance a lam-spaced pair from the start; they meet at the
    // first cycle point.  All steps retrace validated ground.
    ProjPoint<Ring> a = start;
    ProjPoint<Ring> b = start;
    for (u64 i = 0; i < lam; ++i) b = *evaluate(R, f, b);
    unsigned mu = 0;
    while (!(a == b)) {
        a = *evaluate(R, f, a);
        b = *evaluate(R, f, b);
        ++mu;
    }
    rec.tail = mu;
    return rec;
}

namespace detail {

// Dense index of a canonical point, matching the enumerate_p2 order.
template <class Ring>
std::size_t p2_index(const Ring& R, const ProjPoint<Ring>& p, u64 q) {
    if (!R.is_zero(p.c[0])) return std::size_t(R.index_of(p.c[1]) * q + R.index_of(p.c[2]));
    if (!R.is_zero(p.c[1])) return std::size_t(q * q + R.index_of(p.c[2]));
    return std::size_t(q * q + q);
}

// Runs fn(i) for i in [0, n) on `threads` workers with a fixed block split,
// so results written by index are identical for any worker count.
template <class Fn>
void for_range_parallel(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = std::size_t(t) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

template <class Ring>
struct CensusEntry {
    ProjPoint<Ring> point;
    unsigned period = 0;
    bool critical = false;  // some point of its cycle lies on the Jacobian locus

    bool operator==(const CensusEntry&) const = default;
};

/// Every periodic point with cycle length <= max_period, in plane enumeration
/// order.  A point is periodic when its forward orbit returns to it; its
/// cycle never meets an indeterminacy point (the walk would die), and the
/// non_critical_only filter additionally drops cycles touching the Jacobian
/// locus.  A vanishing Jacobian determinant marks every point critical.
/// Worker count never changes the result, only the wall time.
template <class Ring>
std::vector<CensusEntry<Ring>> periodic_census(const Ring& R, const CremonaMap<Ring>& f,
                                               unsigned max_period, bool non_critical_only,
                                               unsigned threads = 1) {
    static_assert(Ring::is_finite, "census needs a finite field");
    const auto pts = enumerate_p2(R);
    const std::size_t n = pts.size();
    const u64 q = R.elem_count();
    const std::size_t kNone = n;

    HPoly<Ring> jac = jacobian_det(R, f);
    std::vector<std::size_t> succ(n, kNone);
    std::vector<char> on_locus(n, 0);
    detail::for_range_parallel(n, threads, [&](std::size_t i) {
        auto img = evaluate(R, f, pts[i]);
        if (img) succ[i] = detail::p2_index(R, *img, q);
        on_locus[i] = jac.is_zero() || R.is_zero(hp_eval(R, jac, pts[i])) ? 1 : 0;
    });

    // Walk the functional graph once, labeling each cycle with its length and
    // whether it touches the locus.
    std::vector<unsigned char> state(n, 0);  // 0 new, 1 on current walk, 2 resolved
    std::vector<std::size_t> walk_pos(n, 0);
    std::vector<unsigned> period(n, 0);
    std::vector<char> cycle_critical(n, 0);
    std::vector<std::size_t> walk;
    for (std::size_t i = 0; i < n; ++i) {
        if (state[i] != 0) continue;
        walk.clear();
        std::size_t j = i;
        while (j != kNone && state[j] == 0) {
            state[j] = 1;
            walk_pos[j] = walk.size();
            walk.push_back(j);
            j = succ[j];
        }
        if (j != kNone && state[j] == 1) {
            std::size_t first = walk_pos[j];
            unsigned len = unsigned(walk.size() - first);
            char crit = 0;
            for (std::size_t k = first; k < walk.size(); ++k)
                if (on_locus[walk[k]]) crit = 1;
            for (std::size_t k = first; k < walk.size(); ++k) {
                period[walk[k]] = len;
                cycle_critical[walk[k]] = crit;
            }
        }
        for (std::size_t k : walk) state[k] = 2;
    }

    std::vector<CensusEntry<Ring>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (period[i] == 0 || period[i] > max_period) continue;
        if (non_critical_only && cycle_critical[i]) continue;
        out.push_back({pts[i], period[i], cycle_critical[i] != 0});
    }
    return out;
}

/// Rank test: can one curve of degree D contain all the points?  `contained`
/// iff the m x M evaluation matrix of the degree-D monomials has rank < M,
/// in which case `curve` is a nonzero polynomial vanishing at every point.
template <class Ring>
struct DensityReport {
    std::size_t point_count = 0;
    unsigned degree = 0;     // D
    unsigned monomials = 0;  // M = (D+1)(D+2)/2
    unsigned rank = 0;
    bool contained = false;
    std::optional<HPoly<Ring>> curve;
};

/// Exact rank of the evaluation matrix by Gaussian elimination in the field
/// (no rounding anywhere; over the rationals the arithmetic is exact mpq).
template <class Ring>
DensityReport<Ring> density_check(const Ring& R, const std::vector<ProjPoint<Ring>>& pts,
                                  unsigned D) {
    using Elem = typename Ring::Elem;
    if (pts.empty()) throw precondition_error("density_check: empty point list");
    if (D < 1) throw precondition_error("density_check: degree bound must be >= 1");

    // Degree-D monomials in the term order of HPoly (graded key descending).
    std::vector<u64> mons;
    for (int a = int(D); a >= 0; --a)
        for (int b = int(D) - a; b >= 0; --b) mons.push_back(exp_key(a, b, int(D) - a - b));
    const std::size_t M = mons.size();
    const std::size_t m = pts.size();

    std::vector<std::vector<Elem>> A(m, std::vector<Elem>(M, R.zero()));
    for (std::size_t i = 0; i < m; ++i) {
        std::array<std::vector<Elem>, 3> pow;
        for (int v = 0; v < 3; ++v) {
            pow[v].resize(D + 1);
            pow[v][0] = R.one();
            for (unsigned e = 1; e <= D; ++e) pow[v][e] = R.mul(pow[v][e - 1], pts[i].c[v]);
        }
        for (std::size_t j = 0; j < M; ++j)
            A[i][j] = R.mul(R.mul(pow[0][key_a(mons[j])], pow[1][key_b(mons[j])]),
                            pow[2][key_c(mons[j])]);
    }

    // Reduced row echelon form.
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < M && r < m; ++col) {
        std::size_t sel = m;
        for (std::size_t i = r; i < m; ++i)
            if (!R.is_zero(A[i][col])) {
                sel = i;
                break;
            }
        if (sel == m) continue;
        std::swap(A[r], A[sel]);
        Elem inv = R.inv(A[r][col]);
        for (std::size_t j = col; j < M; ++j) A[r][j] = R.mul(A[r][j], inv);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || R.is_zero(A[i][col])) continue;
            Elem factor = A[i][col];
            for (std::size_t j = col; j < M; ++j)
                A[i][j] = R.sub(A[i][j], R.mul(factor, A[r][j]));
        }
        pivot_col.push_back(col);
        ++r;
    }

    DensityReport<Ring> rep;
    rep.point_count = m;
    rep.degree = D;
    rep.monomials = unsigned(M);
    rep.rank = unsigned(r);
    rep.contained = r < M;
    if (!rep.contained) return rep;

    // Kernel witness: set the first free column to 1, read pivot entries off
    // the reduced rows.
    std::size_t free_col = 0;
    while (free_col < M &&
           std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end())
        ++free_col;
    std::vector<Elem> c(M, R.zero());
    c[free_col] = R.one();
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
        c[pivot_col[i]] = R.neg(A[i][free_col]);

    std::vector<typename HPoly<Ring>::Term> terms;
    for (std::size_t j = 0; j < M; ++j)
        if (!R.is_zero(c[j])) terms.push_back({mons[j], c[j]});
    HPoly<Ring> curve = hp_from_terms(R, D, std::move(terms));
    for (const auto& p : pts)
        if (!R.is_zero(hp_eval(R, curve, p)))
            throw error("density_check: witness curve fails to vanish");  // unreachable
    rep.curve = std::move(curve);
    return rep;
}

/// Fraction of random PGL_3 twists A o f whose first `horizon` iterates keep
/// the maximal degrees d, d^2, ..., d^horizon.  Matrices are sampled by
/// rejection on det != 0; the seed fixes the whole experiment.
struct SweepStats {
    unsigned trials = 0;
    unsigned horizon = 0;
    u64 seed = 0;
    unsigned base_degree = 0;
    unsigned full_growth = 0;
    double fraction = 0.0;
};

template <class Ring>
SweepStats pgl3_stability_sweep(const Ring& R, const CremonaMap<Ring>& f, unsigned trials,
                                unsigned horizon, u64 seed,
                                std::size_t term_cap = kDefaultTermCap) {
    static_assert(Ring::is_finite, "the sweep samples matrices over a finite field");
    using Elem = typename Ring::Elem;
    if (trials < 1) throw precondition_error("pgl3_stability_sweep: trials must be >= 1");
    if (horizon < 1) throw precondition_error("pgl3_stability_sweep: horizon must be >= 1");

    SweepStats st;
    st.trials = trials;
    st.horizon = horizon;
    st.seed = seed;
    st.base_degree = f.deg;

    // d^s for s = 1..horizon; past the representable exponent range no iterate
    // degree can match, so a sentinel keeps the comparison honest.
    std::vector<u64> target;
    u64 d = f.deg;
    u64 acc = 1;
    bool over = false;
    for (unsigned s = 0; s < horizon; ++s) {
        if (!over && acc > (u64(1) << 42) / d) over = true;
        if (over) {
            target.push_back(u64(1) << 43);
        } else {
            acc *= d;
            target.push_back(acc);
        }
    }

    SplitMix64 rng(seed);
    for (unsigned t = 0; t < trials; ++t) {
        std::array<std::array<Elem, 3>, 3> a;
        for (;;) {
            for (auto& row : a)
                for (auto& e : row) e = R.random(rng);
            auto minor = [&](int r0, int r1, int c0, int c1) {
                return R.sub(R.mul(a[r0][c0], a[r1][c1]), R.mul(a[r0][c1], a[r1][c0]));
            };
            Elem det =
                R.add(R.sub(R.mul(a[0][0], minor(1, 2, 1, 2)), R.mul(a[0][1], minor(1, 2, 0, 2))),
                      R.mul(a[0][2], minor(1, 2, 0, 1)));
            if (!R.is_zero(det)) break;
        }
        std::array<HPoly<Ring>, 3> comp;
        for (int i = 0; i < 3; ++i) {
            std::vector<typename HPoly<Ring>::Term> raw;
            for (unsigned v = 0; v < 3; ++v)
                if (!R.is_zero(a[i][v])) raw.push_back({exp_key(v == 0, v == 1, v == 2), a[i][v]});
            comp[i] = hp_from_terms(R, 1, std::move(raw));
        }
        CremonaMap<Ring> twist = compose(R, map_new(R, comp[0], comp[1], comp[2]), f, term_cap);
        DegreeSequence ds = iterate_degrees(R, twist, horizon, term_cap);
        bool full = ds.termination == SeqTermination::Completed && ds.degrees.size() == horizon;
        for (unsigned s = 0; full && s < horizon; ++s)
            if (ds.degrees[s] != target[s]) full = false;
        if (full) ++st.full_growth;
    }
    st.fraction = double(st.full_growth) / double(st.trials);
    return st;
}

}  // namespace cremona
