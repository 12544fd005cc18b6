// Birational self-maps of P^2: construction in lowest terms, composition with
// cancellation, iteration and degree sequences, indeterminacy over finite
// fields, reduction mod p, inverse verification, and stability detection via
// orbits of the inverse's indeterminacy points.
//
// Conventions fixed here:
//   - compose(f, g) means "apply g first", i.e. the components of g are
//     substituted into the components of f.
//   - a map is stored with the gcd of its components divided out and with a
//     joint normalization (one global scalar), so structural equality of maps
//     is projective equality.

#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cremona/hpoly_gcd.hpp"
#include "cremona/point.hpp"

namespace cremona {

template <class Ring>
struct CremonaMap {
    std::array<HPoly<Ring>, 3> f;
    unsigned deg = 1;

    bool operator==(const CremonaMap&) const = default;
};

/// Raw substitution data kept by compose_traced: the three components before
/// cancellation and the common factor that was divided out.
template <class Ring>
struct ComposeTrace {
    std::array<HPoly<Ring>, 3> raw;
    HPoly<Ring> common;
};

enum class SeqTermination { Completed, TermCapHit, MapDegenerated };

struct DegreeSequence {
    std::string source;               // printed form of the base map
    std::vector<unsigned> degrees;    // degrees[k] = deg of the (k+1)-st iterate
    SeqTermination termination = SeqTermination::Completed;
    unsigned stopped_at = 0;          // iterate that could not be computed
};

enum class InverseCheck { Unknown, Verified, Failed };

struct ReductionReport {
    u64 p = 0;
    unsigned degree_before = 0;
    unsigned degree_after = 0;
    InverseCheck birational_verified = InverseCheck::Unknown;
    std::string notes;
};

enum class StabilityKind { StableUpTo, UnstableAt, StableProven };

/// UnstableAt(n) carries the witness orbit: n+1 points starting at a supplied
/// inverse-indeterminacy point and ending at a point where every component of
/// the map vanishes. StableUpTo(N) records the iteration cap that was reached;
/// StableProven (finite fields) means every witness orbit entered a cycle
/// whose points all evaluate cleanly.
template <class Ring>
struct StabilityVerdict {
    StabilityKind kind = StabilityKind::StableUpTo;
    unsigned n = 0;
    std::vector<ProjPoint<Ring>> witness;
};

namespace detail {

/// True iff A and B generate the same line in the polynomial vector space.
template <class Ring>
bool proportional(const Ring& R, const HPoly<Ring>& A, const HPoly<Ring>& B) {
    if (A.is_zero() || B.is_zero()) return A.is_zero() && B.is_zero();
    if (A.deg != B.deg || A.terms.size() != B.terms.size()) return false;
    const auto la = A.terms.front().c;
    const auto lb = B.terms.front().c;
    for (std::size_t i = 0; i < A.terms.size(); ++i) {
        if (A.terms[i].key != B.terms[i].key) return false;
        if (!R.eq(R.mul(A.terms[i].c, lb), R.mul(B.terms[i].c, la))) return false;
    }
    return true;
}

/// One global scalar for the whole triple, chosen so the leading coefficient
/// of the first nonzero component is 1.
template <class Ring>
void joint_normalize(const Ring& R, std::array<HPoly<Ring>, 3>& comp, int first) {
    const auto lc = comp[static_cast<std::size_t>(first)].terms.front().c;
    if (R.eq(lc, R.one())) return;
    const auto s = R.inv(lc);
    for (auto& P : comp)
        for (auto& t : P.terms) t.c = R.mul(t.c, s);
}

/// Rational triples are scaled to jointly primitive integers with the leading
/// coefficient of the first nonzero component positive.
inline void joint_normalize(const RationalField&, std::array<HPoly<RationalField>, 3>& comp,
                            int first) {
    Int L(1);
    for (const auto& P : comp)
        for (const auto& t : P.terms) {
            Int d = t.c.get_den();
            L = lcm(L, d);
        }
    Int G(0);
    for (const auto& P : comp)
        for (const auto& t : P.terms) {
            Rat scaled = t.c * L;
            Int n = scaled.get_num();
            G = gcd(G, n);
        }
    Rat s(L, G);
    s.canonicalize();
    Rat lead = comp[static_cast<std::size_t>(first)].terms.front().c * s;
    if (lead < 0) s = -s;
    if (s == 1) return;
    for (auto& P : comp)
        for (auto& t : P.terms) {
            Rat c = t.c * s;
            t.c = c;
        }
}

/// Build a map from a triple whose component gcd is already constant.
/// Validates degrees and the rank >= 2 requirement, then normalizes.
template <class Ring>
CremonaMap<Ring> map_from_reduced(const Ring& R, std::array<HPoly<Ring>, 3> comp) {
    int first = -1;
    unsigned d = 0;
    for (int i = 0; i < 3; ++i) {
        const auto& P = comp[static_cast<std::size_t>(i)];
        if (P.is_zero()) continue;
        if (first < 0) {
            first = i;
            d = P.deg;
        } else if (P.deg != d) {
            throw precondition_error("map components have unequal degrees");
        }
    }
    if (first < 0) throw precondition_error("all map components are zero");
    if (d == 0) throw precondition_error("map components are constant");
    bool rank2 = false;
    for (int i = first + 1; i < 3 && !rank2; ++i) {
        const auto& P = comp[static_cast<std::size_t>(i)];
        if (!P.is_zero() && !proportional(R, comp[static_cast<std::size_t>(first)], P))
            rank2 = true;
    }
    if (!rank2)
        throw precondition_error(
            "map components are pairwise proportional: the image is a single point");
    joint_normalize(R, comp, first);
    return CremonaMap<Ring>{std::move(comp), d};
}

/// Divide the component gcd out of a raw triple. Returns the (normalized)
/// common factor through `common`.
template <class Ring>
std::array<HPoly<Ring>, 3> cancel_common(const Ring& R, std::array<HPoly<Ring>, 3> comp,
                                         HPoly<Ring>& common, std::size_t term_cap) {
    std::vector<HPoly<Ring>> nonzero;
    for (const auto& P : comp)
        if (!P.is_zero()) nonzero.push_back(P);
    if (nonzero.empty()) throw precondition_error("all map components are zero");
    common = gcd_many(R, std::move(nonzero), term_cap);
    if (common.deg > 0) {
        for (auto& P : comp) {
            if (P.is_zero()) continue;
            auto q = hp_divexact_fast(R, P, common);
            if (!q) throw error("internal: component gcd does not divide a component");
            P = std::move(*q);
        }
    }
    return comp;
}

}  // namespace detail

template <class Ring>
CremonaMap<Ring> map_identity(const Ring& R) {
    std::array<HPoly<Ring>, 3> comp{hp_term(R, R.one(), 1, 0, 0), hp_term(R, R.one(), 0, 1, 0),
                                    hp_term(R, R.one(), 0, 0, 1)};
    return CremonaMap<Ring>{std::move(comp), 1};
}

/// Construct a map from raw components: divides out their gcd (the stored
/// degree may be lower than the input degree) and normalizes. Nonzero
/// components must share one degree; at least two must be linearly
/// independent, otherwise the image is a point and this throws.
template <class Ring>
CremonaMap<Ring> map_new(const Ring& R, HPoly<Ring> p0, HPoly<Ring> p1, HPoly<Ring> p2,
                         std::size_t term_cap = kDefaultTermCap) {
    std::array<HPoly<Ring>, 3> comp{std::move(p0), std::move(p1), std::move(p2)};
    unsigned d = 0;
    bool seen = false;
    for (const auto& P : comp) {
        if (P.is_zero()) continue;
        if (!seen) {
            d = P.deg;
            seen = true;
        } else if (P.deg != d) {
            throw precondition_error("map components have unequal degrees");
        }
    }
    HPoly<Ring> common;
    comp = detail::cancel_common(R, std::move(comp), common, term_cap);
    return detail::map_from_reduced(R, std::move(comp));
}

template <class Ring>
std::string map_to_string(const Ring& R, const CremonaMap<Ring>& m) {
    std::string out = "[";
    for (int i = 0; i < 3; ++i) {
        if (i) out += ", ";
        out += hp_to_string(R, m.f[static_cast<std::size_t>(i)]);
    }
    out += "]";
    return out;
}

namespace detail {

/// Substitute the components of g into each component of f. Every input
/// monomial is homogeneous of one total degree, so each output is either zero
/// or homogeneous of degree deg f * deg g. Monomial evaluations are shared
/// across the three components.
template <class Ring>
std::array<HPoly<Ring>, 3> substitute(const Ring& R, const CremonaMap<Ring>& f,
                                      const CremonaMap<Ring>& g, std::size_t term_cap) {
    std::array<std::vector<HPoly<Ring>>, 3> powers;
    for (auto& v : powers) v.push_back(hp_const(R, R.one()));
    auto power = [&](unsigned v, unsigned e) -> const HPoly<Ring>& {
        auto& vec = powers[v];
        while (vec.size() <= e)
            vec.push_back(hp_mul(R, vec.back(), g.f[v], term_cap));
        return vec[e];
    };
    std::unordered_map<u64, HPoly<Ring>> cache;
    auto monomial = [&](u64 key) -> const HPoly<Ring>& {
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const unsigned a = key_a(key), b = key_b(key), c = key_c(key);
        HPoly<Ring> m = power(0, a);
        if (b) m = hp_mul(R, m, power(1, b), term_cap);
        if (c) m = hp_mul(R, m, power(2, c), term_cap);
        return cache.emplace(key, std::move(m)).first->second;
    };
    std::array<HPoly<Ring>, 3> out;
    for (int i = 0; i < 3; ++i) {
        HPoly<Ring> acc;
        for (const auto& t : f.f[static_cast<std::size_t>(i)].terms)
            acc = hp_add(R, acc, hp_scale(R, monomial(t.key), t.c));
        out[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return out;
}

template <class Ring>
CremonaMap<Ring> compose_core(const Ring& R, const CremonaMap<Ring>& f, const CremonaMap<Ring>& g,
                              std::size_t term_cap, ComposeTrace<Ring>* trace) {
    auto raw = substitute(R, f, g, term_cap);
    HPoly<Ring> common;
    std::array<HPoly<Ring>, 3> reduced;
    if (trace) {
        reduced = cancel_common(R, raw, common, term_cap);  // keeps raw intact
        trace->raw = std::move(raw);
        trace->common = common;
    } else {
        reduced = cancel_common(R, std::move(raw), common, term_cap);
    }
    return map_from_reduced(R, std::move(reduced));
}

}  // namespace detail

/// f after g: substitutes g's components into f's and cancels the common
/// factor. The result degree is at most deg f * deg g; it is lower exactly
/// when the substituted triple has a nonconstant gcd.
template <class Ring>
CremonaMap<Ring> compose(const Ring& R, const CremonaMap<Ring>& f, const CremonaMap<Ring>& g,
                         std::size_t term_cap = kDefaultTermCap) {
    return detail::compose_core(R, f, g, term_cap, static_cast<ComposeTrace<Ring>*>(nullptr));
}

/// Same as compose but also reports the pre-cancellation triple and the factor
/// divided out.
template <class Ring>
CremonaMap<Ring> compose_traced(const Ring& R, const CremonaMap<Ring>& f, const CremonaMap<Ring>& g,
                                ComposeTrace<Ring>& trace,
                                std::size_t term_cap = kDefaultTermCap) {
    return detail::compose_core(R, f, g, term_cap, &trace);
}

/// True iff g undoes f: compose(g, f) cancels down to [x, y, z].
template <class Ring>
bool verify_inverse(const Ring& R, const CremonaMap<Ring>& f, const CremonaMap<Ring>& g,
                    std::size_t term_cap = kDefaultTermCap) {
    CremonaMap<Ring> c;
    try {
        c = compose(R, g, f, term_cap);
    } catch (const precondition_error&) {
        return false;  // composition degenerated; certainly not the identity
    }
    return c == map_identity(R);
}

/// Image of a point, or nullopt when all three components vanish there (the
/// point is indeterminate for the map).
template <class Ring>
std::optional<ProjPoint<Ring>> evaluate(const Ring& R, const CremonaMap<Ring>& m,
                                        const ProjPoint<Ring>& pt) {
    std::array<typename Ring::Elem, 3> v{hp_eval(R, m.f[0], pt), hp_eval(R, m.f[1], pt),
                                         hp_eval(R, m.f[2], pt)};
    if (R.is_zero(v[0]) && R.is_zero(v[1]) && R.is_zero(v[2])) return std::nullopt;
    return pt_make(R, v[0], v[1], v[2]);
}

/// All points of P^2(F_q) where every component vanishes, by full enumeration.
/// Finite fields only; indeterminacy over QQ would need elimination theory and
/// callers supply those points explicitly instead.
template <class Ring>
std::vector<ProjPoint<Ring>> indeterminacy_points(const Ring& R, const CremonaMap<Ring>& m) {
    static_assert(Ring::is_finite,
                  "indeterminacy_points enumerates the plane and needs a finite field");
    std::vector<ProjPoint<Ring>> out;
    for (const auto& pt : enumerate_p2(R)) {
        bool all_zero = true;
        for (const auto& P : m.f)
            if (!R.is_zero(hp_eval(R, P, pt))) {
                all_zero = false;
                break;
            }
        if (all_zero) out.push_back(pt);
    }
    return out;
}

/// Degrees of f, f^2, ..., f^N by left-composing f with the stored previous
/// iterate (no squaring: cancellation differs per bracketing and each step
/// must see the true reduced iterate). Early termination is encoded in the
/// result, not thrown.
template <class Ring>
DegreeSequence iterate_degrees(const Ring& R, const CremonaMap<Ring>& m, unsigned N,
                               std::size_t term_cap = kDefaultTermCap) {
    if (N < 1) throw precondition_error("iterate_degrees needs N >= 1");
    DegreeSequence seq;
    seq.source = map_to_string(R, m);
    seq.degrees.push_back(m.deg);
    CremonaMap<Ring> cur = m;
    for (unsigned n = 2; n <= N; ++n) {
        try {
            cur = compose(R, m, cur, term_cap);
        } catch (const cap_error&) {
            seq.termination = SeqTermination::TermCapHit;
            seq.stopped_at = n;
            break;
        } catch (const precondition_error&) {
            seq.termination = SeqTermination::MapDegenerated;
            seq.stopped_at = n;
            break;
        }
        seq.degrees.push_back(cur.deg);
    }
    // Submultiplicativity (deg f^{m+n} <= 2 deg f^m deg f^n) and the bound
    // deg f^n <= d^n hold for every genuine degree sequence; a violation
    // means the composition machinery miscancelled.
    const auto& ds = seq.degrees;
    Int bound = 1;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        bound *= m.deg;
        if (ds[i] > bound)
            throw error("internal: degree sequence exceeds d^n");
    }
    for (std::size_t a = 1; a <= ds.size(); ++a)
        for (std::size_t b = a; a + b <= ds.size(); ++b)
            if (u64(ds[a + b - 1]) > 2 * u64(ds[a - 1]) * u64(ds[b - 1]))
                throw error("internal: degree sequence violates submultiplicativity");
    return seq;
}

/// Reduce an integer-coefficient map modulo p. The reduced triple is put back
/// in lowest terms (the degree may drop) and structural degeneracies are
/// reported in the notes rather than hidden. When a candidate inverse is
/// supplied it is reduced too and checked with verify_inverse.
inline std::pair<CremonaMap<PrimeField>, ReductionReport> reduce_mod_p(
    const RationalField& Q, const CremonaMap<RationalField>& m, u64 p,
    const std::optional<CremonaMap<RationalField>>& candidate_inverse = std::nullopt,
    std::size_t term_cap = kDefaultTermCap) {
    if (p < 2 || !is_prime_u64(p)) throw precondition_error("reduction modulus must be prime");
    if (p >= kMaxPrime) throw precondition_error("reduction modulus too large");
    PrimeField Fp{p};
    auto note = [](std::string& acc, const std::string& s) {
        if (!acc.empty()) acc += "; ";
        acc += s;
    };
    ReductionReport rep;
    rep.p = p;
    rep.degree_before = m.deg;

    std::array<HPoly<PrimeField>, 3> comp;
    for (int i = 0; i < 3; ++i) {
        const auto& P = m.f[static_cast<std::size_t>(i)];
        std::vector<HPoly<PrimeField>::Term> raw;
        raw.reserve(P.terms.size());
        for (const auto& t : P.terms) {
            if (t.c.get_den() != 1)
                throw precondition_error("map is not in integer form");
            u64 c = Fp.from_int(t.c.get_num());
            if (c) raw.push_back({t.key, c});
        }
        comp[static_cast<std::size_t>(i)] = hp_from_terms(Fp, P.deg, std::move(raw));
        if (comp[static_cast<std::size_t>(i)].is_zero())
            note(rep.notes, "component " + std::to_string(i) + " vanishes mod p");
    }

    auto reduced = map_new(Fp, std::move(comp[0]), std::move(comp[1]), std::move(comp[2]),
                           term_cap);
    rep.degree_after = reduced.deg;
    if (reduced.deg < m.deg)
        note(rep.notes, "degree dropped from " + std::to_string(m.deg) + " to " +
                            std::to_string(reduced.deg));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const auto& A = reduced.f[static_cast<std::size_t>(i)];
            const auto& B = reduced.f[static_cast<std::size_t>(j)];
            if (!A.is_zero() && !B.is_zero() && detail::proportional(Fp, A, B))
                note(rep.notes, "components " + std::to_string(i) + " and " + std::to_string(j) +
                                    " are proportional: the reduced map is not birational");
        }

    if (candidate_inverse) {
        try {
            auto [inv, sub] = reduce_mod_p(Q, *candidate_inverse, p, std::nullopt, term_cap);
            (void)sub;
            rep.birational_verified = verify_inverse(Fp, reduced, inv, term_cap)
                                          ? InverseCheck::Verified
                                          : InverseCheck::Failed;
        } catch (const precondition_error&) {
            rep.birational_verified = InverseCheck::Failed;
            note(rep.notes, "candidate inverse degenerates mod p");
        }
    }
    return {std::move(reduced), rep};
}

/// Track the forward orbit of each supplied point (these should be the
/// indeterminacy points of the inverse). An orbit that reaches a point where
/// all components vanish is an instability witness; the verdict keeps the
/// earliest such witness. Over a finite field every orbit either does that or
/// enters a cycle of cleanly evaluating points, so the answer is definitive;
/// over QQ each orbit is followed for N steps.
template <class Ring>
StabilityVerdict<Ring> stability_witness(const Ring& R, const CremonaMap<Ring>& m,
                                         const std::vector<ProjPoint<Ring>>& inverse_images,
                                         unsigned N) {
    std::optional<StabilityVerdict<Ring>> unstable;
    auto consider = [&](unsigned steps, std::vector<ProjPoint<Ring>> orbit) {
        if (!unstable || steps < unstable->n)
            unstable = StabilityVerdict<Ring>{StabilityKind::UnstableAt, steps, std::move(orbit)};
    };
    for (const auto& start : inverse_images) {
        std::vector<ProjPoint<Ring>> orbit{start};
        if constexpr (Ring::is_finite) {
            std::set<std::array<u64, 3>> seen;
            while (true) {
                const auto& cur = orbit.back();
                auto img = evaluate(R, m, cur);
                if (!img) {
                    consider(static_cast<unsigned>(orbit.size() - 1), orbit);
                    break;
                }
                std::array<u64, 3> key{R.index_of(cur.c[0]), R.index_of(cur.c[1]),
                                       R.index_of(cur.c[2])};
                if (!seen.insert(key).second) break;  // entered a clean cycle
                orbit.push_back(*img);
            }
        } else {
            for (unsigned k = 0; k < N; ++k) {
                auto img = evaluate(R, m, orbit.back());
                if (!img) {
                    consider(k, orbit);
                    break;
                }
                orbit.push_back(*img);
            }
        }
    }
    if (unstable) return *unstable;
    if constexpr (Ring::is_finite)
        return StabilityVerdict<Ring>{StabilityKind::StableProven, 0, {}};
    else
        return StabilityVerdict<Ring>{StabilityKind::StableUpTo, N, {}};
}

}  // namespace cremona
