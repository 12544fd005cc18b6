#ifndef CREMONA_HPOLY_GCD_HPP
#define CREMONA_HPOLY_GCD_HPP

/// GCDs of homogeneous polynomials.
///
/// The base algorithm is the subresultant polynomial-remainder-sequence in the
/// dehomogenized (x = 1) bivariate chart, with content/primitive-part
/// recursion. After the common monomial is stripped, none of x, y, z divides
/// the gcd, and the homogeneous gcd is exactly the homogenization of the
/// bivariate one, so the x = 1 chart loses nothing.
///
/// The PRS is hopeless at iteration scale (operands of degree ~2000), so
/// verified shortcuts run first over finite fields:
///   1. coprimality certificate: for an evaluation point a with
///      lc_y(A_0)(a) != 0, deg_y gcd <= deg gcd_i(A_i(y, a)); a constant image
///      gcd proves deg_y gcd = 0, and the two axis directions together prove
///      the gcd constant. Small prime fields are lifted into an extension so
///      good evaluation points exist.
///   2. nontrivial gcds split as (univariate content in z) * (primitive
///      part). The content factor is an exact univariate gcd. The primitive
///      part is recovered by evaluation/interpolation with the leading
///      coefficient scaled by L = gcd of the lc_y's, then checked by exact
///      trial division and a coprimality certificate on the quotients, which
///      together prove the candidate is the gcd. Any failure falls through.
/// Nothing here rests on probabilistic luck: shortcuts either prove their
/// answer or defer to the next layer.
///
/// Over QQ a one-prime projection certificate applies: components in primitive
/// integer form stay nonzero mod p and keep their degree (homogeneity), so a
/// constant gcd of the mod-p images proves a constant gcd over QQ. Nontrivial
/// rational gcds fall back to the PRS.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cremona/fields.hpp"
#include "cremona/hpoly.hpp"

namespace cremona {

// ---------------------------------------------------------------------------
// Exact sparse division

/// P / D when exact, std::nullopt when D does not divide P. Graded-lex leading
/// terms multiply, so the greedy monomial division is complete.
template <class Ring>
std::optional<HPoly<Ring>> hp_divexact(const Ring& R, const HPoly<Ring>& P,
                                       const HPoly<Ring>& D) {
    if (D.is_zero()) throw precondition_error("division by the zero polynomial");
    if (P.is_zero()) return HPoly<Ring>{};
    if (P.deg < D.deg) return std::nullopt;

    std::map<u64, typename Ring::Elem, std::greater<u64>> rem;
    for (const auto& t : P.terms) rem.emplace(t.key, t.c);

    const u64 dkey = D.terms.front().key;
    const auto dlead_inv = R.inv(D.terms.front().c);
    HPoly<Ring> Q;
    Q.deg = P.deg - D.deg;

    while (!rem.empty()) {
        auto [rkey, rc] = *rem.begin();
        if (key_a(rkey) < key_a(dkey) || key_b(rkey) < key_b(dkey) ||
            key_c(rkey) < key_c(dkey))
            return std::nullopt;
        u64 qkey = rkey - dkey;
        auto qc = R.mul(rc, dlead_inv);
        Q.terms.push_back({qkey, qc});
        for (const auto& dt : D.terms) {
            u64 k = qkey + dt.key;
            auto delta = R.mul(qc, dt.c);
            auto it = rem.find(k);
            if (it == rem.end()) {
                rem.emplace(k, R.neg(delta));
            } else {
                it->second = R.sub(it->second, delta);
                if (R.is_zero(it->second)) rem.erase(it);
            }
        }
    }
    // quotient terms were emitted in decreasing key order already
    if (Q.terms.empty()) Q.deg = 0;
    return Q;
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over a ring (little-endian coefficients)

template <class Ring>
using UPoly = std::vector<typename Ring::Elem>;

namespace upoly {

template <class Ring>
void trim(const Ring& R, UPoly<Ring>& a) {
    while (!a.empty() && R.is_zero(a.back())) a.pop_back();
}

template <class Ring>
int deg(const UPoly<Ring>& a) {
    return static_cast<int>(a.size()) - 1;  // -1 for the zero polynomial
}

template <class Ring>
UPoly<Ring> one(const Ring& R) {
    return {R.one()};
}

template <class Ring>
UPoly<Ring> mul(const Ring& R, const UPoly<Ring>& a, const UPoly<Ring>& b) {
    if (a.empty() || b.empty()) return {};
    UPoly<Ring> c(a.size() + b.size() - 1, R.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (R.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = R.add(c[i + j], R.mul(a[i], b[j]));
    }
    trim(R, c);
    return c;
}

template <class Ring>
UPoly<Ring> scale(const Ring& R, const UPoly<Ring>& a,
                  const typename Ring::Elem& s) {
    if (R.is_zero(s)) return {};
    UPoly<Ring> c = a;
    for (auto& x : c) x = R.mul(x, s);
    return c;
}

template <class Ring>
UPoly<Ring> add(const Ring& R, const UPoly<Ring>& a, const UPoly<Ring>& b) {
    UPoly<Ring> c(std::max(a.size(), b.size()), R.zero());
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto x = i < a.size() ? a[i] : R.zero();
        auto y = i < b.size() ? b[i] : R.zero();
        c[i] = R.add(x, y);
    }
    trim(R, c);
    return c;
}

template <class Ring>
UPoly<Ring> sub(const Ring& R, const UPoly<Ring>& a, const UPoly<Ring>& b) {
    UPoly<Ring> c(std::max(a.size(), b.size()), R.zero());
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto x = i < a.size() ? a[i] : R.zero();
        auto y = i < b.size() ? b[i] : R.zero();
        c[i] = R.sub(x, y);
    }
    trim(R, c);
    return c;
}

template <class Ring>
typename Ring::Elem eval(const Ring& R, const UPoly<Ring>& a,
                         const typename Ring::Elem& x) {
    auto acc = R.zero();
    for (std::size_t i = a.size(); i-- > 0;) acc = R.add(R.mul(acc, x), a[i]);
    return acc;
}

template <class Ring>
UPoly<Ring> monic(const Ring& R, UPoly<Ring> a) {
    trim(R, a);
    if (a.empty()) return a;
    auto inv = R.inv(a.back());
    for (auto& x : a) x = R.mul(x, inv);
    return a;
}

template <class Ring>
UPoly<Ring> rem(const Ring& R, UPoly<Ring> a, const UPoly<Ring>& b) {
    trim(R, a);
    auto inv_lead = R.inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
        auto q = R.mul(a.back(), inv_lead);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = R.sub(a[shift + i], R.mul(q, b[i]));
        trim(R, a);
    }
    return a;
}

template <class Ring>
UPoly<Ring> gcd(const Ring& R, UPoly<Ring> a, UPoly<Ring> b) {
    trim(R, a);
    trim(R, b);
    while (!b.empty()) {
        auto r = rem(R, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(R, std::move(a));
}

/// Quotient when the division is exact, std::nullopt otherwise.
template <class Ring>
std::optional<UPoly<Ring>> div_opt(const Ring& R, UPoly<Ring> a,
                                   const UPoly<Ring>& b) {
    trim(R, a);
    if (a.empty()) return UPoly<Ring>{};
    if (b.empty()) return std::nullopt;
    if (a.size() < b.size()) return std::nullopt;
    auto inv_lead = R.inv(b.back());
    UPoly<Ring> q(a.size() - b.size() + 1, R.zero());
    while (a.size() >= b.size() && !a.empty()) {
        auto qc = R.mul(a.back(), inv_lead);
        std::size_t shift = a.size() - b.size();
        q[shift] = qc;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = R.sub(a[shift + i], R.mul(qc, b[i]));
        trim(R, a);
    }
    if (!a.empty()) return std::nullopt;
    trim(R, q);
    return q;
}

/// Exact division; throws when inexact (used where theory guarantees
/// exactness, e.g. subresultant coefficient removal).
template <class Ring>
UPoly<Ring> divexact(const Ring& R, UPoly<Ring> a, const UPoly<Ring>& b) {
    auto q = div_opt(R, std::move(a), b);
    if (!q) throw error("inexact univariate division");
    return *q;
}

template <class Ring>
UPoly<Ring> pow(const Ring& R, const UPoly<Ring>& a, unsigned e) {
    auto acc = one(R);
    auto base = a;
    while (e) {
        if (e & 1) acc = mul(R, acc, base);
        e >>= 1;
        if (e) base = mul(R, base, base);
    }
    return acc;
}

}  // namespace upoly

// ---------------------------------------------------------------------------
// Dense bivariate polynomials: entry i is the K[z]-coefficient of y^i.

template <class Ring>
using BPoly = std::vector<UPoly<Ring>>;

namespace bpoly {

template <class Ring>
void trim(const Ring& R, BPoly<Ring>& a) {
    for (auto& c : a) upoly::trim(R, c);
    while (!a.empty() && a.back().empty()) a.pop_back();
}

template <class Ring>
bool is_zero(const BPoly<Ring>& a) {
    return a.empty();
}

template <class Ring>
int deg_y(const BPoly<Ring>& a) {
    return static_cast<int>(a.size()) - 1;
}

/// gcd of all K[z]-coefficients.
template <class Ring>
UPoly<Ring> content(const Ring& R, const BPoly<Ring>& a) {
    UPoly<Ring> g;
    for (const auto& c : a) {
        if (c.empty()) continue;
        g = upoly::gcd(R, g, c);
        if (upoly::deg<Ring>(g) == 0) break;
    }
    return g;
}

template <class Ring>
BPoly<Ring> divide_content(const Ring& R, const BPoly<Ring>& a,
                           const UPoly<Ring>& g) {
    BPoly<Ring> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].empty()) out[i] = upoly::divexact(R, a[i], g);
    return out;
}

template <class Ring>
BPoly<Ring> scale(const Ring& R, const BPoly<Ring>& a, const UPoly<Ring>& s) {
    BPoly<Ring> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].empty()) out[i] = upoly::mul(R, a[i], s);
    return out;
}

/// Quotient in (K[z])[y] when the division is exact, std::nullopt otherwise.
template <class Ring>
std::optional<BPoly<Ring>> div_opt(const Ring& R, BPoly<Ring> a,
                                   const BPoly<Ring>& b) {
    trim(R, a);
    if (is_zero<Ring>(a)) return BPoly<Ring>{};
    if (is_zero<Ring>(b)) return std::nullopt;
    if (a.size() < b.size()) return std::nullopt;
    BPoly<Ring> q(a.size() - b.size() + 1);
    while (!is_zero<Ring>(a) && a.size() >= b.size()) {
        auto qrow = upoly::div_opt(R, a.back(), b.back());
        if (!qrow) return std::nullopt;
        std::size_t shift = a.size() - b.size();
        q[shift] = *qrow;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] =
                upoly::sub(R, a[shift + i], upoly::mul(R, b[i], *qrow));
        trim(R, a);
    }
    if (!is_zero<Ring>(a)) return std::nullopt;
    return q;
}

/// Fraction-free pseudo-remainder of a by b in y (deg_y a >= deg_y b >= 0).
template <class Ring>
BPoly<Ring> prem(const Ring& R, BPoly<Ring> a, const BPoly<Ring>& b) {
    const auto lcb = b.back();
    int db = deg_y<Ring>(b);
    int e = deg_y<Ring>(a) - db + 1;
    while (!is_zero<Ring>(a) && deg_y<Ring>(a) >= db) {
        auto lca = a.back();
        int shift = deg_y<Ring>(a) - db;
        BPoly<Ring> next(a.size() - 1);
        for (std::size_t i = 0; i + 1 < a.size(); ++i)
            next[i] = upoly::mul(R, a[i], lcb);
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            auto t = upoly::mul(R, b[i], lca);
            next[i + shift] = upoly::sub(R, next[i + shift], t);
        }
        trim(R, next);
        a = std::move(next);
        --e;
    }
    if (e > 0 && !is_zero<Ring>(a)) {
        auto f = upoly::pow(R, lcb, static_cast<unsigned>(e));
        a = scale(R, a, f);
    }
    return a;
}

/// Subresultant PRS gcd of primitive inputs; returns a primitive gcd.
template <class Ring>
BPoly<Ring> prs_gcd_primitive(const Ring& R, BPoly<Ring> a, BPoly<Ring> b) {
    trim(R, a);
    trim(R, b);
    if (is_zero<Ring>(a)) return b;
    if (is_zero<Ring>(b)) return a;
    if (deg_y<Ring>(a) < deg_y<Ring>(b)) std::swap(a, b);

    auto g = upoly::one(R);
    auto h = upoly::one(R);
    for (;;) {
        int delta = deg_y<Ring>(a) - deg_y<Ring>(b);
        BPoly<Ring> r = prem(R, a, b);
        if (is_zero<Ring>(r)) {
            auto cb = content(R, b);
            return divide_content(R, b, cb);
        }
        if (deg_y<Ring>(r) == 0) return BPoly<Ring>{upoly::one(R)};
        auto divisor =
            upoly::mul(R, g, upoly::pow(R, h, static_cast<unsigned>(delta)));
        BPoly<Ring> nb(r.size());
        for (std::size_t i = 0; i < r.size(); ++i)
            if (!r[i].empty()) nb[i] = upoly::divexact(R, r[i], divisor);
        a = std::move(b);
        b = std::move(nb);
        g = a.back();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = upoly::divexact(
                R, upoly::pow(R, g, static_cast<unsigned>(delta)),
                upoly::pow(R, h, static_cast<unsigned>(delta - 1)));
        }
    }
}

/// Full bivariate gcd: content/primitive-part split around the PRS.
template <class Ring>
BPoly<Ring> prs_gcd(const Ring& R, const BPoly<Ring>& a, const BPoly<Ring>& b) {
    if (is_zero<Ring>(a)) return b;
    if (is_zero<Ring>(b)) return a;
    auto ca = content(R, a), cb = content(R, b);
    auto pa = divide_content(R, a, ca), pb = divide_content(R, b, cb);
    auto pg = prs_gcd_primitive(R, pa, pb);
    auto cg = upoly::gcd(R, ca, cb);
    auto out = scale(R, pg, cg);
    trim(R, out);
    return out;
}

}  // namespace bpoly

// ---------------------------------------------------------------------------
// Bridges between the homogeneous sparse world and the bivariate chart

namespace detail {

/// Largest monomial dividing P, as per-variable minimum exponents.
template <class Ring>
std::array<unsigned, 3> min_exponents(const HPoly<Ring>& P) {
    std::array<unsigned, 3> m = {kMaxExponent, kMaxExponent, kMaxExponent};
    for (const auto& t : P.terms) {
        m[0] = std::min(m[0], key_a(t.key));
        m[1] = std::min(m[1], key_b(t.key));
        m[2] = std::min(m[2], key_c(t.key));
    }
    return m;
}

/// Divide by the monomial x^a y^b z^c (which must divide every term).
template <class Ring>
HPoly<Ring> unshift(const HPoly<Ring>& P, unsigned a, unsigned b, unsigned c) {
    HPoly<Ring> S = P;
    u64 delta = exp_key(a, b, c);
    for (auto& t : S.terms) t.key -= delta;
    S.deg = P.deg - a - b - c;
    return S;
}

/// Dehomogenize at x = 1 into the dense chart; `lift` maps coefficients into
/// the (possibly larger) evaluation field K.
template <class RingF, class RingK, class Lift>
BPoly<RingK> dehomogenize(const RingK& K, const HPoly<RingF>& P, Lift&& lift) {
    BPoly<RingK> A;
    for (const auto& t : P.terms) {
        unsigned b = key_b(t.key), c = key_c(t.key);
        if (A.size() <= b) A.resize(b + 1);
        if (A[b].size() <= c) A[b].resize(c + 1, K.zero());
        A[b][c] = lift(t.c);
    }
    bpoly::trim(K, A);
    return A;
}

/// Total degree of the chart polynomial (max b + c over nonzero entries).
template <class Ring>
unsigned chart_total_degree(const Ring& R, const BPoly<Ring>& A) {
    unsigned d = 0;
    for (std::size_t b = 0; b < A.size(); ++b)
        for (std::size_t c = 0; c < A[b].size(); ++c)
            if (!R.is_zero(A[b][c])) d = std::max(d, unsigned(b + c));
    return d;
}

/// Rebuild a homogeneous polynomial of the given degree from the chart (all
/// chart terms must satisfy b + c <= target_deg).
template <class Ring>
HPoly<Ring> homogenize(const Ring& R, const BPoly<Ring>& A, unsigned target_deg) {
    std::vector<typename HPoly<Ring>::Term> raw;
    for (std::size_t b = 0; b < A.size(); ++b)
        for (std::size_t c = 0; c < A[b].size(); ++c)
            if (!R.is_zero(A[b][c])) {
                if (b + c > target_deg)
                    throw error("chart polynomial exceeds the homogenization degree");
                raw.push_back({exp_key(target_deg - unsigned(b + c),
                                       unsigned(b), unsigned(c)),
                               A[b][c]});
            }
    return hp_from_terms(R, target_deg, std::move(raw));
}

/// Minimal homogenization of a chart polynomial.
template <class Ring>
HPoly<Ring> homogenize(const Ring& R, const BPoly<Ring>& A) {
    return homogenize(R, A, chart_total_degree(R, A));
}

/// P(1, y, alpha) as a univariate polynomial in y over K.
template <class RingF, class RingK, class Lift>
UPoly<RingK> image_in_y(const RingK& K, const HPoly<RingF>& P,
                        const typename RingK::Elem& alpha, Lift&& lift) {
    std::vector<typename RingK::Elem> pw{K.one()};
    for (unsigned e = 1; e <= P.deg; ++e) pw.push_back(K.mul(pw.back(), alpha));
    UPoly<RingK> img;
    for (const auto& t : P.terms) {
        unsigned b = key_b(t.key), c = key_c(t.key);
        if (img.size() <= b) img.resize(b + 1, K.zero());
        img[b] = K.add(img[b], K.mul(lift(t.c), pw[c]));
    }
    upoly::trim(K, img);
    return img;
}

/// P(1, alpha, z) as a univariate polynomial in z over K.
template <class RingF, class RingK, class Lift>
UPoly<RingK> image_in_z(const RingK& K, const HPoly<RingF>& P,
                        const typename RingK::Elem& alpha, Lift&& lift) {
    std::vector<typename RingK::Elem> pw{K.one()};
    for (unsigned e = 1; e <= P.deg; ++e) pw.push_back(K.mul(pw.back(), alpha));
    UPoly<RingK> img;
    for (const auto& t : P.terms) {
        unsigned b = key_b(t.key), c = key_c(t.key);
        if (img.size() <= c) img.resize(c + 1, K.zero());
        img[c] = K.add(img[c], K.mul(lift(t.c), pw[b]));
    }
    upoly::trim(K, img);
    return img;
}

/// Leading y-coefficient of the chart polynomial, as an element of K[z].
template <class RingF, class RingK, class Lift>
UPoly<RingK> lc_y_of_chart(const RingK& K, const HPoly<RingF>& P, Lift&& lift) {
    unsigned maxb = 0;
    for (const auto& t : P.terms) maxb = std::max(maxb, key_b(t.key));
    UPoly<RingK> lc;
    for (const auto& t : P.terms) {
        if (key_b(t.key) != maxb) continue;
        unsigned c = key_c(t.key);
        if (lc.size() <= c) lc.resize(c + 1, K.zero());
        lc[c] = lift(t.c);
    }
    upoly::trim(K, lc);
    return lc;
}

/// Leading z-coefficient of the chart polynomial, as an element of K[y].
template <class RingF, class RingK, class Lift>
UPoly<RingK> lc_z_of_chart(const RingK& K, const HPoly<RingF>& P, Lift&& lift) {
    unsigned maxc = 0;
    for (const auto& t : P.terms) maxc = std::max(maxc, key_c(t.key));
    UPoly<RingK> lc;
    for (const auto& t : P.terms) {
        if (key_c(t.key) != maxc) continue;
        unsigned b = key_b(t.key);
        if (lc.size() <= b) lc.resize(b + 1, K.zero());
        lc[b] = lift(t.c);
    }
    upoly::trim(K, lc);
    return lc;
}

/// gcd over i of the K[z]-contents of the chart images of the P_i, computed
/// exactly in the base ring. This is precisely the y-free factor of the gcd.
template <class Ring>
UPoly<Ring> content_gcd_z(const Ring& R, const std::vector<HPoly<Ring>>& Ps) {
    UPoly<Ring> CG;
    for (const auto& P : Ps) {
        std::map<unsigned, UPoly<Ring>> rows;
        for (const auto& t : P.terms) {
            auto& row = rows[key_b(t.key)];
            unsigned c = key_c(t.key);
            if (row.size() <= c) row.resize(c + 1, R.zero());
            row[c] = t.c;
        }
        for (auto& [b, row] : rows) {
            upoly::trim(R, row);
            CG = upoly::gcd(R, CG, row);
            if (upoly::deg<Ring>(CG) == 0) return CG;
        }
    }
    return CG;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dense-chart exact division (fast path for very wide polynomials)

/// Same contract as hp_divexact, but via the dense chart when P is wide.
template <class Ring>
std::optional<HPoly<Ring>> hp_divexact_fast(const Ring& R, const HPoly<Ring>& P,
                                            const HPoly<Ring>& D) {
    if (D.is_zero()) throw precondition_error("division by the zero polynomial");
    if (P.is_zero()) return HPoly<Ring>{};
    if (P.deg < D.deg) return std::nullopt;
    if (P.terms.size() <= 50'000) return hp_divexact(R, P, D);

    auto id = [](const typename Ring::Elem& e) { return e; };
    auto Pc = detail::dehomogenize(R, P, id);
    auto Dc = detail::dehomogenize(R, D, id);
    // x-power bookkeeping: P = x^(deg - degtot) * homog(chart); divisibility
    // holds iff the divisor's x-power does not exceed the dividend's and the
    // chart parts divide.
    unsigned ep = P.deg - detail::chart_total_degree(R, Pc);
    unsigned ed = D.deg - detail::chart_total_degree(R, Dc);
    if (ed > ep) return std::nullopt;
    auto Qc = bpoly::div_opt(R, std::move(Pc), Dc);
    if (!Qc) return std::nullopt;
    return detail::homogenize(R, *Qc, P.deg - D.deg);
}

// ---------------------------------------------------------------------------
// The verified evaluation ladder

namespace detail {

/// Certify along one axis that the gcd of Ps has degree 0 in that variable,
/// via the gcd of univariate images at a point where the first polynomial's
/// leading coefficient survives. Returns false when inconclusive.
template <class RingF, class RingK, class Lift>
bool certify_axis(const RingK& K, const std::vector<HPoly<RingF>>& Ps,
                  Lift&& lift, bool y_axis, SplitMix64& rng) {
    for (const auto& P : Ps) {
        unsigned d = 0;
        for (const auto& t : P.terms)
            d = std::max(d, y_axis ? key_b(t.key) : key_c(t.key));
        if (d == 0) return true;  // a divisor of a v-free poly is v-free
    }
    auto lc = y_axis ? lc_y_of_chart(K, Ps[0], lift)
                     : lc_z_of_chart(K, Ps[0], lift);
    int last_m = -1;
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto alpha = K.random(rng);
        if (K.is_zero(upoly::eval(K, lc, alpha))) continue;
        UPoly<RingK> g;
        for (const auto& P : Ps) {
            auto img = y_axis ? image_in_y(K, P, alpha, lift)
                              : image_in_z(K, P, alpha, lift);
            g = upoly::gcd(K, g, img);
            if (upoly::deg<RingK>(g) == 0) break;
        }
        int m = upoly::deg<RingK>(g);
        if (m == 0) return true;
        // two agreeing nonconstant image gcds: almost surely a real common
        // factor, so stop burning expensive attempts (false negatives only
        // defer to the interpolation layer)
        if (m == last_m) return false;
        last_m = m;
    }
    return false;
}

/// Interpolate the y-primitive part of the gcd over the evaluation field K.
/// Images are scaled by L = gcd of leading y-coefficients so that the target
/// H = (L / lc_y(pp)) * pp is polynomial in z; shared z-content of the inputs
/// cancels in the monic images and is handled separately by the caller.
/// Returns a candidate once two consecutive interpolants agree; the caller
/// must verify it. std::nullopt when no candidate stabilizes.
template <class RingF, class RingK, class Lift>
std::optional<HPoly<RingK>> brown_pp_candidate(
    const RingK& K, const std::vector<HPoly<RingF>>& Ps, Lift&& lift,
    SplitMix64& rng) {
    for (const auto& P : Ps) {
        unsigned d = 0;
        for (const auto& t : P.terms) d = std::max(d, key_b(t.key));
        if (d == 0) return hp_const(K, K.one());  // gcd is y-free
    }
    auto lc0 = lc_y_of_chart(K, Ps[0], lift);
    UPoly<RingK> L = lc0;
    for (std::size_t i = 1; i < Ps.size() && upoly::deg<RingK>(L) > 0; ++i)
        L = upoly::gcd(K, L, lc_y_of_chart(K, Ps[i], lift));
    if (L.empty()) return std::nullopt;

    unsigned min_zdeg = kMaxExponent;
    for (const auto& P : Ps) {
        unsigned d = 0;
        for (const auto& t : P.terms) d = std::max(d, key_c(t.key));
        min_zdeg = std::min(min_zdeg, d);
    }
    const std::size_t max_points = std::min<std::size_t>(
        std::size_t(std::max(upoly::deg<RingK>(L), 0)) + min_zdeg + 2, 96);

    std::vector<typename RingK::Elem> nodes;
    std::vector<UPoly<RingK>> images;  // L(alpha) * monic image gcd
    int m_min = -1;
    BPoly<RingK> last_candidate;
    bool have_last = false;

    std::size_t failures = 0;
    while (nodes.size() < max_points && failures < 64) {
        auto alpha = K.random(rng);
        bool dup = false;
        for (const auto& n : nodes)
            if (K.eq(n, alpha)) dup = true;
        if (dup || K.is_zero(upoly::eval(K, lc0, alpha))) {
            ++failures;
            continue;
        }
        UPoly<RingK> g;
        for (const auto& P : Ps) {
            auto img = image_in_y(K, P, alpha, lift);
            g = upoly::gcd(K, g, img);
            if (upoly::deg<RingK>(g) == 0) break;
        }
        int m = upoly::deg<RingK>(g);
        if (m == 0) {
            // lc_y(pp) survives at alpha, so deg_y(gcd) = 0: pp part is 1
            return hp_const(K, K.one());
        }
        if (m_min == -1 || m < m_min) {
            nodes.clear();  // earlier points were all unlucky
            images.clear();
            m_min = m;
            have_last = false;
        } else if (m > m_min) {
            ++failures;
            continue;
        }
        nodes.push_back(alpha);
        images.push_back(upoly::scale(K, g, upoly::eval(K, L, alpha)));
        if (nodes.size() < 2) continue;

        // Lagrange interpolation of each y-coefficient through the nodes
        BPoly<RingK> cand(static_cast<std::size_t>(m_min) + 1);
        for (int yi = 0; yi <= m_min; ++yi) {
            UPoly<RingK> acc;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                auto v = yi < static_cast<int>(images[j].size())
                             ? images[j][static_cast<std::size_t>(yi)]
                             : K.zero();
                UPoly<RingK> basis{K.one()};
                auto denom = K.one();
                for (std::size_t l = 0; l < nodes.size(); ++l) {
                    if (l == j) continue;
                    basis = upoly::mul(
                        K, basis, UPoly<RingK>{K.neg(nodes[l]), K.one()});
                    denom = K.mul(denom, K.sub(nodes[j], nodes[l]));
                }
                acc = upoly::sub(
                    K, acc, upoly::scale(K, basis, K.neg(K.div(v, denom))));
            }
            cand[static_cast<std::size_t>(yi)] = std::move(acc);
        }
        bpoly::trim(K, cand);
        if (have_last && !bpoly::is_zero<RingK>(cand) &&
            cand == last_candidate) {
            auto cont = bpoly::content(K, cand);
            auto pp = bpoly::divide_content(K, cand, cont);
            return homogenize(K, pp);
        }
        last_candidate = std::move(cand);
        have_last = true;
    }
    return std::nullopt;
}

/// The full evaluation ladder over K: certificate, then content split plus
/// interpolation, verified by exact division and a coprimality certificate on
/// the quotients (with recursion when the candidate captured only part of the
/// gcd). Preconditions: at least two inputs, all nonconstant, no common
/// monomial factor. Returns std::nullopt when nothing could be proved.
template <class RingF, class RingK, class Lift, class Lower>
std::optional<HPoly<RingF>> eval_gcd_attempt(const RingF& F, const RingK& K,
                                             const std::vector<HPoly<RingF>>& Ps,
                                             Lift&& lift, Lower&& lower,
                                             SplitMix64& rng,
                                             std::size_t term_cap, int depth) {
    if (depth > 24) return std::nullopt;
    if (certify_axis(K, Ps, lift, true, rng) &&
        certify_axis(K, Ps, lift, false, rng))
        return hp_const(F, F.one());

    // y-free factor of the gcd, exact in the base ring
    UPoly<RingF> CG = content_gcd_z(F, Ps);
    BPoly<RingF> CGrow{CG};
    HPoly<RingF> CGh = homogenize(F, CGrow);

    for (int round = 0; round < 3; ++round) {
        auto ppK = brown_pp_candidate(K, Ps, lift, rng);
        if (!ppK) break;
        auto ppF = lower(*ppK);
        if (!ppF) continue;
        HPoly<RingF> G = hp_mul(F, CGh, *ppF, term_cap);
        if (G.deg == 0) {
            // proven: trivial content and deg_y(gcd) = 0 certified in-image
            return hp_const(F, F.one());
        }
        std::vector<HPoly<RingF>> Qs;
        bool divides = true;
        for (const auto& P : Ps) {
            auto q = hp_divexact_fast(F, P, G);
            if (!q) {
                divides = false;
                break;
            }
            Qs.push_back(std::move(*q));
        }
        if (!divides) continue;  // bad interpolant; fresh points next round
        // G divides everything, so gcd(Ps) = G * gcd(Qs). The quotient gcd
        // inherits "no monomial factors" from gcd(Ps), so the two-axis
        // certificate proving it constant proves G maximal.
        bool qconst = false;
        for (const auto& Q : Qs)
            if (Q.deg == 0) qconst = true;
        if (qconst || (certify_axis(K, Qs, lift, true, rng) &&
                       certify_axis(K, Qs, lift, false, rng)))
            return G;
        auto rest =
            eval_gcd_attempt(F, K, Qs, lift, lower, rng, term_cap, depth + 1);
        if (!rest) return std::nullopt;
        return hp_mul(F, G, *rest, term_cap);
    }
    return std::nullopt;
}

/// Exact PRS fallback on the full list (the pinned base algorithm). Guarded:
/// at iteration scale this would never finish, and reaching it there means an
/// upstream shortcut is broken, so fail loudly instead of grinding.
template <class Ring>
HPoly<Ring> prs_gcd_many(const Ring& R, const std::vector<HPoly<Ring>>& Ps) {
    for (const auto& P : Ps)
        if (P.deg > 128)
            throw cap_error(
                "gcd remainder-sequence fallback beyond practical degree",
                P.deg, 128);
    auto id = [](const typename Ring::Elem& e) { return e; };
    BPoly<Ring> acc;
    for (const auto& P : Ps) {
        auto A = dehomogenize(R, P, id);
        acc = bpoly::prs_gcd(R, acc, A);
        if (bpoly::deg_y<Ring>(acc) == 0 && acc.size() == 1 &&
            upoly::deg<Ring>(acc[0]) == 0)
            break;
    }
    return homogenize(R, acc);
}

inline unsigned ext_degree_for(u64 p, u64 needed) {
    unsigned m = 1;
    u128 q = p;
    while (q < needed) {
        q *= p;
        ++m;
    }
    return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-field dispatch

template <class Ring>
HPoly<Ring> gcd_many(const Ring& R, std::vector<HPoly<Ring>> Ps,
                     std::size_t term_cap = kDefaultTermCap);

namespace detail {

/// Core gcd of stripped, nonconstant polynomials over a prime field.
inline HPoly<PrimeField> gcd_core(const PrimeField& F,
                                  const std::vector<HPoly<PrimeField>>& Ps,
                                  std::size_t term_cap) {
    unsigned maxdeg = 0;
    for (const auto& P : Ps) maxdeg = std::max(maxdeg, P.deg);
    const u64 needed = 4 * u64(maxdeg) + 16;
    SplitMix64 rng(0x9c6d1f3a2b58e47dULL ^ F.p ^ (u64(maxdeg) << 32) ^
                   (u64(Ps.size()) << 24));

    std::optional<HPoly<PrimeField>> res;
    if (F.p >= needed) {
        auto id = [](u64 c) { return c; };
        auto keep = [](const HPoly<PrimeField>& C)
            -> std::optional<HPoly<PrimeField>> { return C; };
        res = eval_gcd_attempt(F, F, Ps, id, keep, rng, term_cap, 0);
    } else {
        unsigned m = ext_degree_for(F.p, needed);
        if (m <= 12) {
            // deterministic modulus so repeated runs agree bit for bit
            FieldSpec es = field_make(
                "GF(" + std::to_string(F.p) + "," + std::to_string(m) + ")", 0);
            ExtField K(es.p, es.k, es.modulus);
            auto lift = [&K](u64 c) {
                auto e = K.zero();
                e[0] = c;
                return e;
            };
            auto lower = [&K](const HPoly<ExtField>& C)
                -> std::optional<HPoly<PrimeField>> {
                HPoly<PrimeField> G;
                G.deg = C.deg;
                for (const auto& t : C.terms) {
                    for (unsigned j = 1; j < K.k; ++j)
                        if (t.c[j] != 0) return std::nullopt;
                    G.terms.push_back({t.key, t.c[0]});
                }
                return G;
            };
            res = eval_gcd_attempt(F, K, Ps, lift, lower, rng, term_cap, 0);
        }
    }
    if (res) return *res;
    return prs_gcd_many(F, Ps);
}

/// Core gcd over an extension field. No second lift: when the field is too
/// small for evaluation points the PRS handles it (such inputs stay small in
/// this codebase).
inline HPoly<ExtField> gcd_core(const ExtField& F,
                                const std::vector<HPoly<ExtField>>& Ps,
                                std::size_t term_cap) {
    unsigned maxdeg = 0;
    for (const auto& P : Ps) maxdeg = std::max(maxdeg, P.deg);
    const u64 needed = 4 * u64(maxdeg) + 16;
    u128 q = 1;
    bool big_enough = false;
    for (unsigned i = 0; i < F.k && !big_enough; ++i) {
        q *= F.p;
        if (q >= needed) big_enough = true;
    }
    if (big_enough) {
        SplitMix64 rng(0x51c3e9a7d24b86f1ULL ^ F.p ^ (u64(F.k) << 48) ^
                       (u64(maxdeg) << 32));
        auto id = [](const ExtField::Elem& c) { return c; };
        auto keep = [](const HPoly<ExtField>& C)
            -> std::optional<HPoly<ExtField>> { return C; };
        auto res = eval_gcd_attempt(F, F, Ps, id, keep, rng, term_cap, 0);
        if (res) return *res;
    }
    return prs_gcd_many(F, Ps);
}

/// Core gcd over the rationals: primitive integer form, then a one-prime
/// projection certificate for the (typical) coprime case, else the PRS.
inline HPoly<RationalField> gcd_core(const RationalField& R,
                                     const std::vector<HPoly<RationalField>>& Ps,
                                     std::size_t term_cap) {
    std::vector<HPoly<RationalField>> prim;
    prim.reserve(Ps.size());
    for (const auto& P : Ps) prim.push_back(hp_normalize(R, P));

    // two deterministic 61-bit primes; the second covers an unlucky first
    static const u64 p1 = 2305843009213693951ULL;  // 2^61 - 1
    static const u64 p2 = [] {
        u64 q = 2305843009213693951ULL - 2;
        while (!is_prime_u64(q)) q -= 2;
        return q;
    }();
    for (u64 p : {p1, p2}) {
        PrimeField Fp{p};
        std::vector<HPoly<PrimeField>> imgs;
        imgs.reserve(prim.size());
        for (const auto& P : prim) {
            HPoly<PrimeField> img;
            img.deg = P.deg;
            for (const auto& t : P.terms) {
                u64 c = Fp.from_int(t.c.get_num());
                if (c != 0) img.terms.push_back({t.key, c});
            }
            // integer content is 1, so the image cannot vanish
            if (img.terms.empty())
                throw error("primitive polynomial vanished mod p");
            imgs.push_back(std::move(img));
        }
        // full wrapper: a monomial shared only mod p must still count
        auto g = gcd_many(Fp, std::move(imgs), term_cap);
        if (g.deg == 0) return hp_const(R, R.one());
        // a nonconstant image gcd proves nothing about QQ; next prime
    }
    return prs_gcd_many(R, prim);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public entry points

/// gcd of a family of homogeneous polynomials (zeros ignored), normalized:
/// monic leading coefficient over finite fields, primitive with positive
/// leading integer coefficient over QQ.
template <class Ring>
HPoly<Ring> gcd_many(const Ring& R, std::vector<HPoly<Ring>> Ps,
                     std::size_t term_cap) {
    std::erase_if(Ps, [](const HPoly<Ring>& P) { return P.is_zero(); });
    if (Ps.empty())
        throw precondition_error("gcd of an all-zero family is undefined");
    if (Ps.size() == 1) return hp_normalize(R, Ps[0]);

    auto m = detail::min_exponents(Ps[0]);
    for (std::size_t i = 1; i < Ps.size(); ++i) {
        auto e = detail::min_exponents(Ps[i]);
        for (int j = 0; j < 3; ++j) m[j] = std::min(m[j], e[j]);
    }
    for (auto& P : Ps) P = detail::unshift(P, m[0], m[1], m[2]);

    HPoly<Ring> core;
    bool trivial = false;
    for (const auto& P : Ps)
        if (P.deg == 0) trivial = true;
    if (trivial)
        core = hp_const(R, R.one());
    else
        core = detail::gcd_core(R, Ps, term_cap);

    auto mono = hp_term(R, R.one(), m[0], m[1], m[2]);
    return hp_normalize(R, hp_mul(R, mono, core, term_cap));
}

/// Binary gcd; gcd(P, 0) = normalized P, gcd(0, 0) is an error.
template <class Ring>
HPoly<Ring> hp_gcd(const Ring& R, const HPoly<Ring>& P, const HPoly<Ring>& Q,
                   std::size_t term_cap = kDefaultTermCap) {
    return gcd_many(R, std::vector<HPoly<Ring>>{P, Q}, term_cap);
}

}  // namespace cremona

#endif  // CREMONA_HPOLY_GCD_HPP
