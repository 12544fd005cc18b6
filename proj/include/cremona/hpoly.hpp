#ifndef CREMONA_HPOLY_HPP
#define CREMONA_HPOLY_HPP

/// Sparse homogeneous polynomials in x, y, z over an exact coefficient ring.
///
/// Representation: terms sorted by a packed exponent key, descending, with no
/// zero coefficients, so structural equality is semantic equality. The zero
/// polynomial has no terms and degree 0.
///
/// Multiplication switches between naive sparse accumulation and Kronecker
/// substitution through GMP integer multiplication; products at degree ~2000
/// (half-million-term operands) are what the big-prime iteration runs need,
/// and schoolbook term-by-term is hopeless there.

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cremona/arith.hpp"
#include "cremona/errors.hpp"
#include "cremona/fields.hpp"

namespace cremona {

/// Default cap on stored/accumulated term counts ("degree overflow" guard).
inline constexpr std::size_t kDefaultTermCap = 2'000'000;

/// Per-variable exponent limit imposed by the 3x21-bit key packing.
inline constexpr unsigned kMaxExponent = (1u << 21) - 1;

/// Exponents (a,b,c) of x^a y^b z^c packed high-to-low; for homogeneous terms
/// of one degree, integer order on keys is graded-lex order on monomials.
inline u64 exp_key(unsigned a, unsigned b, unsigned c) {
    return (u64(a) << 42) | (u64(b) << 21) | u64(c);
}
inline unsigned key_a(u64 k) { return unsigned(k >> 42) & kMaxExponent; }
inline unsigned key_b(u64 k) { return unsigned(k >> 21) & kMaxExponent; }
inline unsigned key_c(u64 k) { return unsigned(k) & kMaxExponent; }

template <class Ring>
struct HPoly {
    using Elem = typename Ring::Elem;
    struct Term {
        u64 key;
        Elem c;
        bool operator==(const Term&) const = default;
    };

    unsigned deg = 0;
    std::vector<Term> terms;  // key-descending, no zero coefficients

    bool is_zero() const { return terms.empty(); }
    bool operator==(const HPoly&) const = default;
};

// ---------------------------------------------------------------------------
// Construction

template <class Ring>
HPoly<Ring> hp_zero(const Ring&) {
    return {};
}

/// Canonicalize a raw term list: merge duplicate keys, drop zeros, sort, and
/// check the homogeneity invariant.
template <class Ring>
HPoly<Ring> hp_from_terms(const Ring& R, unsigned deg,
                          std::vector<typename HPoly<Ring>::Term> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& s, const auto& t) { return s.key > t.key; });
    HPoly<Ring> P;
    for (auto& t : raw) {
        if (!P.terms.empty() && P.terms.back().key == t.key) {
            P.terms.back().c = R.add(P.terms.back().c, t.c);
            if (R.is_zero(P.terms.back().c)) P.terms.pop_back();
        } else if (!R.is_zero(t.c)) {
            P.terms.push_back(std::move(t));
        }
    }
    for (const auto& t : P.terms) {
        if (key_a(t.key) + key_b(t.key) + key_c(t.key) != deg)
            throw precondition_error("term degree does not match polynomial degree");
    }
    P.deg = P.terms.empty() ? 0 : deg;
    return P;
}

/// Single monomial c * x^a y^b z^c.
template <class Ring>
HPoly<Ring> hp_term(const Ring& R, typename Ring::Elem coeff, unsigned a, unsigned b,
                    unsigned c) {
    if (a > kMaxExponent || b > kMaxExponent || c > kMaxExponent)
        throw cap_error("exponent exceeds representable range", std::size_t(a) + b + c,
                        kMaxExponent);
    HPoly<Ring> P;
    if (R.is_zero(coeff)) return P;
    P.deg = a + b + c;
    P.terms.push_back({exp_key(a, b, c), std::move(coeff)});
    return P;
}

template <class Ring>
HPoly<Ring> hp_const(const Ring& R, typename Ring::Elem coeff) {
    return hp_term(R, std::move(coeff), 0, 0, 0);
}

// ---------------------------------------------------------------------------
// Linear operations

template <class Ring>
HPoly<Ring> hp_add(const Ring& R, const HPoly<Ring>& P, const HPoly<Ring>& Q) {
    if (P.is_zero()) return Q;
    if (Q.is_zero()) return P;
    if (P.deg != Q.deg)
        throw precondition_error("adding homogeneous polynomials of different degrees");
    HPoly<Ring> S;
    S.terms.reserve(P.terms.size() + Q.terms.size());
    std::size_t i = 0, j = 0;
    while (i < P.terms.size() && j < Q.terms.size()) {
        if (P.terms[i].key > Q.terms[j].key) {
            S.terms.push_back(P.terms[i++]);
        } else if (P.terms[i].key < Q.terms[j].key) {
            S.terms.push_back(Q.terms[j++]);
        } else {
            auto c = R.add(P.terms[i].c, Q.terms[j].c);
            if (!R.is_zero(c)) S.terms.push_back({P.terms[i].key, std::move(c)});
            ++i;
            ++j;
        }
    }
    while (i < P.terms.size()) S.terms.push_back(P.terms[i++]);
    while (j < Q.terms.size()) S.terms.push_back(Q.terms[j++]);
    S.deg = S.terms.empty() ? 0 : P.deg;
    return S;
}

template <class Ring>
HPoly<Ring> hp_neg(const Ring& R, const HPoly<Ring>& P) {
    HPoly<Ring> N = P;
    for (auto& t : N.terms) t.c = R.neg(t.c);
    return N;
}

template <class Ring>
HPoly<Ring> hp_sub(const Ring& R, const HPoly<Ring>& P, const HPoly<Ring>& Q) {
    return hp_add(R, P, hp_neg(R, Q));
}

template <class Ring>
HPoly<Ring> hp_scale(const Ring& R, const HPoly<Ring>& P, const typename Ring::Elem& s) {
    if (R.is_zero(s)) return {};
    HPoly<Ring> S = P;
    for (auto& t : S.terms) t.c = R.mul(t.c, s);
    return S;
}

/// Multiply by the monomial x^a y^b z^c (exact, no cancellation possible).
template <class Ring>
HPoly<Ring> hp_shift(const Ring&, const HPoly<Ring>& P, unsigned a, unsigned b, unsigned c) {
    if (P.is_zero()) return P;
    HPoly<Ring> S = P;
    S.deg = P.deg + a + b + c;
    if (S.deg > kMaxExponent)
        throw cap_error("degree exceeds representable range", S.deg, kMaxExponent);
    u64 delta = exp_key(a, b, c);
    for (auto& t : S.terms) t.key += delta;
    return S;
}

// ---------------------------------------------------------------------------
// Multiplication

namespace detail {

/// Naive sparse product with hash accumulation; deterministic because the
/// result is sorted afterwards and coefficient arithmetic is exact.
template <class Ring>
HPoly<Ring> mul_naive(const Ring& R, const HPoly<Ring>& P, const HPoly<Ring>& Q,
                      std::size_t term_cap) {
    std::unordered_map<u64, typename Ring::Elem> acc;
    acc.reserve(P.terms.size() * 2);
    for (const auto& s : P.terms) {
        for (const auto& t : Q.terms) {
            u64 k = s.key + t.key;
            auto prod = R.mul(s.c, t.c);
            auto it = acc.find(k);
            if (it == acc.end()) {
                if (!R.is_zero(prod)) {
                    acc.emplace(k, std::move(prod));
                    if (acc.size() > term_cap)
                        throw cap_error("degree overflow: product exceeds term cap",
                                        acc.size(), term_cap);
                }
            } else {
                it->second = R.add(it->second, prod);
                if (R.is_zero(it->second)) acc.erase(it);
            }
        }
    }
    HPoly<Ring> S;
    S.terms.reserve(acc.size());
    for (auto& [k, c] : acc) S.terms.push_back({k, std::move(c)});
    std::sort(S.terms.begin(), S.terms.end(),
              [](const auto& s, const auto& t) { return s.key > t.key; });
    S.deg = S.terms.empty() ? 0 : P.deg + Q.deg;
    return S;
}

/// Kronecker packing for GF(p): map each homogeneous polynomial to a GMP
/// integer with one fixed-width slot per (y,z)-exponent pair (x is implied by
/// homogeneity), multiply the integers, then reduce slots mod p.
inline void pack_slot_u64(std::vector<std::uint32_t>& buf, std::size_t slot, unsigned w32,
                          u64 v) {
    std::size_t base = slot * w32;
    buf[base] = static_cast<std::uint32_t>(v);
    if (w32 > 1) buf[base + 1] = static_cast<std::uint32_t>(v >> 32);
}

inline Int import_u32(const std::vector<std::uint32_t>& buf) {
    Int z;
    if (!buf.empty())
        mpz_import(z.get_mpz_t(), buf.size(), -1 /*lsw first*/, 4, 0, 0, buf.data());
    return z;
}

inline HPoly<PrimeField> mul_kronecker_gfp(const PrimeField& R, const HPoly<PrimeField>& P,
                                           const HPoly<PrimeField>& Q, std::size_t term_cap) {
    const unsigned D = P.deg + Q.deg;
    const u64 W = D + 1;  // stride: product z-exponents are <= D

    // slot value bound: min(#terms) convolution partners, each < p^2
    Int bound = Int(static_cast<unsigned long>(std::min(P.terms.size(), Q.terms.size())));
    bound *= Int(static_cast<unsigned long>(R.p - 1));
    bound *= Int(static_cast<unsigned long>(R.p - 1));
    unsigned sbits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
    unsigned w32 = (sbits + 31) / 32;

    auto pack = [&](const HPoly<PrimeField>& A) {
        std::size_t max_slot = std::size_t(A.deg) * W + A.deg;
        std::vector<std::uint32_t> buf((max_slot + 1) * w32, 0);
        for (const auto& t : A.terms) {
            std::size_t slot = std::size_t(key_b(t.key)) * W + key_c(t.key);
            pack_slot_u64(buf, slot, w32, t.c);
        }
        return import_u32(buf);
    };

    Int prod = pack(P) * pack(Q);

    // export with zero padding so every slot read stays in bounds
    std::size_t nslots = std::size_t(D) * W + D + 1;
    std::size_t words = (mpz_sizeinbase(prod.get_mpz_t(), 2) + 31) / 32;
    std::vector<std::uint32_t> out(std::max(words, nslots * w32) + w32, 0);
    std::size_t actual = 0;
    if (prod != 0)
        mpz_export(out.data(), &actual, -1, 4, 0, 0, prod.get_mpz_t());

    HPoly<PrimeField> S;
    for (std::size_t slot = 0; slot < nslots; ++slot) {
        std::size_t base = slot * w32;
        u64 v = 0;
        if (w32 <= 2) {
            v = out[base];
            if (w32 == 2) v |= u64(out[base + 1]) << 32;
            v %= R.p;
        } else if (w32 <= 4) {
            u128 big = 0;
            for (unsigned j = w32; j-- > 0;) big = (big << 32) | out[base + j];
            v = static_cast<u64>(big % R.p);
        } else {
            Int z;
            mpz_import(z.get_mpz_t(), w32, -1, 4, 0, 0, out.data() + base);
            v = mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(R.p));
        }
        if (v != 0) {
            unsigned b = static_cast<unsigned>(slot / W);
            unsigned c = static_cast<unsigned>(slot % W);
            if (b + c > D) throw error("kronecker decode produced an impossible slot");
            S.terms.push_back({exp_key(D - b - c, b, c), v});
            if (S.terms.size() > term_cap)
                throw cap_error("degree overflow: product exceeds term cap", S.terms.size(),
                                term_cap);
        }
    }
    // slots run in (b,c) order, which is not key order once a = D-b-c varies
    std::sort(S.terms.begin(), S.terms.end(),
              [](const auto& s, const auto& t) { return s.key > t.key; });
    S.deg = S.terms.empty() ? 0 : D;
    return S;
}

/// Kronecker packing for integer-coefficient polynomials over QQ. Signed
/// coefficients are handled by a positive/negative buffer split on input and
/// balanced-digit decoding on output.
struct ZZTerm {
    u64 key;
    Int c;
};

inline std::vector<ZZTerm> clear_denominators(const HPoly<RationalField>& P, Int& den_out) {
    Int L = 1;
    for (const auto& t : P.terms) L = lcm(L, t.c.get_den());
    std::vector<ZZTerm> out;
    out.reserve(P.terms.size());
    for (const auto& t : P.terms) {
        Int n = t.c.get_num() * (L / t.c.get_den());
        out.push_back({t.key, std::move(n)});
    }
    den_out = L;
    return out;
}

inline HPoly<RationalField> mul_kronecker_qq(const RationalField& R,
                                             const HPoly<RationalField>& P,
                                             const HPoly<RationalField>& Q,
                                             std::size_t term_cap) {
    const unsigned D = P.deg + Q.deg;
    const u64 W = D + 1;

    Int denP, denQ;
    auto ZP = clear_denominators(P, denP);
    auto ZQ = clear_denominators(Q, denQ);

    Int maxP = 0, maxQ = 0;
    for (const auto& t : ZP) {
        Int a = abs(t.c);
        if (a > maxP) maxP = a;
    }
    for (const auto& t : ZQ) {
        Int a = abs(t.c);
        if (a > maxQ) maxQ = a;
    }
    Int bound = Int(static_cast<unsigned long>(std::min(ZP.size(), ZQ.size()))) * maxP * maxQ;
    // slot width: |product coefficient| < 2^(w-1)
    unsigned sbits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2)) + 2;
    unsigned w32 = (sbits + 31) / 32;
    unsigned wbits = w32 * 32;

    // explicit return type: gmpxx "a - b" is a lazy expression referencing its
    // operands, which must not outlive this scope
    auto pack = [&](const std::vector<ZZTerm>& A, unsigned deg) -> Int {
        std::size_t max_slot = std::size_t(deg) * W + deg;
        std::vector<std::uint32_t> pos((max_slot + 1) * w32, 0),
            neg((max_slot + 1) * w32, 0);
        std::vector<std::uint32_t> tmp(w32);
        for (const auto& t : A) {
            std::size_t slot = std::size_t(key_b(t.key)) * W + key_c(t.key);
            std::fill(tmp.begin(), tmp.end(), 0);
            std::size_t cnt = 0;
            Int a = abs(t.c);
            if (a != 0) mpz_export(tmp.data(), &cnt, -1, 4, 0, 0, a.get_mpz_t());
            auto& buf = sgn(t.c) >= 0 ? pos : neg;
            std::copy(tmp.begin(), tmp.end(), buf.begin() + slot * w32);
        }
        Int packed = import_u32(pos) - import_u32(neg);
        return packed;
    };

    Int prod = pack(ZP, P.deg) * pack(ZQ, Q.deg);
    bool negate = sgn(prod) < 0;
    Int ab = abs(prod);

    std::size_t nslots = std::size_t(D) * W + D + 1;
    std::size_t words = (mpz_sizeinbase(ab.get_mpz_t(), 2) + 31) / 32;
    std::vector<std::uint32_t> out(std::max(words, nslots * w32) + w32, 0);
    std::size_t actual = 0;
    if (ab != 0) mpz_export(out.data(), &actual, -1, 4, 0, 0, ab.get_mpz_t());

    Rat scale(1);
    scale /= Rat(denP * denQ);

    HPoly<RationalField> S;
    Int carry = 0;
    Int half = Int(1) << (wbits - 1);
    Int full = Int(1) << wbits;
    for (std::size_t slot = 0; slot < nslots; ++slot) {
        std::size_t base = slot * w32;
        Int d;
        mpz_import(d.get_mpz_t(), w32, -1, 4, 0, 0, out.data() + base);
        d += carry;
        if (d >= half) {
            d -= full;
            carry = 1;
        } else {
            carry = 0;
        }
        if (d != 0) {
            unsigned b = static_cast<unsigned>(slot / W);
            unsigned c = static_cast<unsigned>(slot % W);
            if (b + c > D) throw error("kronecker decode produced an impossible slot");
            Rat coeff = Rat(negate ? -d : d) * scale;
            coeff.canonicalize();
            S.terms.push_back({exp_key(D - b - c, b, c), std::move(coeff)});
            if (S.terms.size() > term_cap)
                throw cap_error("degree overflow: product exceeds term cap", S.terms.size(),
                                term_cap);
        }
    }
    if (carry != 0) throw error("kronecker decode left a dangling carry");
    std::sort(S.terms.begin(), S.terms.end(),
              [](const auto& s, const auto& t) { return s.key > t.key; });
    S.deg = S.terms.empty() ? 0 : D;
    return S;
}

inline constexpr std::size_t kNaiveMulThreshold = 200'000;  // term-pair count

template <class Ring>
HPoly<Ring> mul_dispatch(const Ring& R, const HPoly<Ring>& P, const HPoly<Ring>& Q,
                         std::size_t term_cap) {
    return mul_naive(R, P, Q, term_cap);
}

/// Kronecker buffers hold one slot per (b,c) pair up to the product degree;
/// refuse to allocate them when that dwarfs the term cap (naive accumulation
/// then reports the cap violation without the giant allocation).
inline bool kronecker_feasible(unsigned prod_deg, std::size_t term_cap) {
    std::size_t nslots = (std::size_t(prod_deg) + 1) * (prod_deg + 1);
    return nslots <= 16 * term_cap;
}

inline HPoly<PrimeField> mul_dispatch(const PrimeField& R, const HPoly<PrimeField>& P,
                                      const HPoly<PrimeField>& Q, std::size_t term_cap) {
    std::size_t pairs = P.terms.size() * Q.terms.size();
    if (pairs <= kNaiveMulThreshold || R.p >= (u64(1) << 32) ||
        !kronecker_feasible(P.deg + Q.deg, term_cap))
        return mul_naive(R, P, Q, term_cap);
    return mul_kronecker_gfp(R, P, Q, term_cap);
}

inline HPoly<RationalField> mul_dispatch(const RationalField& R, const HPoly<RationalField>& P,
                                         const HPoly<RationalField>& Q, std::size_t term_cap) {
    std::size_t pairs = P.terms.size() * Q.terms.size();
    if (pairs <= 20'000 || !kronecker_feasible(P.deg + Q.deg, term_cap))
        return mul_naive(R, P, Q, term_cap);
    return mul_kronecker_qq(R, P, Q, term_cap);
}

}  // namespace detail

template <class Ring>
HPoly<Ring> hp_mul(const Ring& R, const HPoly<Ring>& P, const HPoly<Ring>& Q,
                   std::size_t term_cap = kDefaultTermCap) {
    if (P.is_zero() || Q.is_zero()) return {};
    if (P.deg + Q.deg > kMaxExponent)
        throw cap_error("degree overflow: product degree exceeds representable range",
                        std::size_t(P.deg) + Q.deg, kMaxExponent);
    // refuse up front when even the dense result would blow the cap
    std::size_t dense = (std::size_t(P.deg + Q.deg) + 1) * (P.deg + Q.deg + 2) / 2;
    if (dense / 2 > term_cap && P.terms.size() * Q.terms.size() > term_cap)
        throw cap_error("degree overflow: product exceeds term cap", dense, term_cap);
    return detail::mul_dispatch(R, P, Q, term_cap);
}

template <class Ring>
HPoly<Ring> hp_pow(const Ring& R, const HPoly<Ring>& P, unsigned e,
                   std::size_t term_cap = kDefaultTermCap) {
    HPoly<Ring> acc = hp_const(R, R.one());
    HPoly<Ring> base = P;
    while (e > 0) {
        if (e & 1) acc = hp_mul(R, acc, base, term_cap);
        e >>= 1;
        if (e) base = hp_mul(R, base, base, term_cap);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Evaluation and derivatives

template <class Ring>
typename Ring::Elem hp_eval_coords(const Ring& R, const HPoly<Ring>& P,
                                   const std::array<typename Ring::Elem, 3>& pt) {
    if (P.is_zero()) return R.zero();
    // power tables up to the degree
    std::array<std::vector<typename Ring::Elem>, 3> pw;
    for (int v = 0; v < 3; ++v) {
        pw[v].reserve(P.deg + 1);
        pw[v].push_back(R.one());
        for (unsigned e = 1; e <= P.deg; ++e) pw[v].push_back(R.mul(pw[v].back(), pt[v]));
    }
    auto acc = R.zero();
    for (const auto& t : P.terms) {
        auto m = R.mul(R.mul(pw[0][key_a(t.key)], pw[1][key_b(t.key)]), pw[2][key_c(t.key)]);
        acc = R.add(acc, R.mul(t.c, m));
    }
    return acc;
}

/// Partial derivative with respect to variable 0, 1 or 2.
template <class Ring>
HPoly<Ring> hp_derivative(const Ring& R, const HPoly<Ring>& P, int var) {
    HPoly<Ring> D;
    for (const auto& t : P.terms) {
        unsigned e[3] = {key_a(t.key), key_b(t.key), key_c(t.key)};
        if (e[var] == 0) continue;
        auto c = R.mul(t.c, R.from_long(static_cast<long>(e[var])));
        if (R.is_zero(c)) continue;  // characteristic divides the exponent
        e[var] -= 1;
        D.terms.push_back({exp_key(e[0], e[1], e[2]), std::move(c)});
    }
    D.deg = D.terms.empty() ? 0 : P.deg - 1;
    return D;  // term order is preserved by lowering one exponent uniformly
}

/// Determinant of the Jacobian matrix of three equal-degree components;
/// vanishes exactly on the curves contracted by the map.
template <class Ring>
HPoly<Ring> jacobian_det(const Ring& R, const HPoly<Ring>& f0, const HPoly<Ring>& f1,
                         const HPoly<Ring>& f2, std::size_t term_cap = kDefaultTermCap) {
    const HPoly<Ring>* f[3] = {&f0, &f1, &f2};
    unsigned d = 0;
    bool seen = false;
    for (int i = 0; i < 3; ++i) {
        if (f[i]->is_zero()) continue;
        if (seen && f[i]->deg != d)
            throw precondition_error("jacobian_det: component degree mismatch");
        d = f[i]->deg;
        seen = true;
    }
    if (!seen) throw precondition_error("jacobian_det: all components zero");

    HPoly<Ring> J[3][3];
    for (int i = 0; i < 3; ++i)
        for (int v = 0; v < 3; ++v) J[i][v] = hp_derivative(R, *f[i], v);

    auto minor2 = [&](int r1, int r2, int c1, int c2) {
        return hp_sub(R, hp_mul(R, J[r1][c1], J[r2][c2], term_cap),
                      hp_mul(R, J[r1][c2], J[r2][c1], term_cap));
    };
    auto det = hp_mul(R, J[0][0], minor2(1, 2, 1, 2), term_cap);
    det = hp_sub(R, det, hp_mul(R, J[0][1], minor2(1, 2, 0, 2), term_cap));
    det = hp_add(R, det, hp_mul(R, J[0][2], minor2(1, 2, 0, 1), term_cap));
    return det;
}

// ---------------------------------------------------------------------------
// Normalization

/// Over a field with no further structure: scale so the leading coefficient
/// (graded-lex largest term) is 1.
template <class Ring>
HPoly<Ring> hp_normalize(const Ring& R, const HPoly<Ring>& P) {
    if (P.is_zero()) return P;
    return hp_scale(R, P, R.inv(P.terms.front().c));
}

/// Over QQ: clear denominators to a primitive integer form with positive
/// leading coefficient.
inline HPoly<RationalField> hp_normalize(const RationalField& R,
                                         const HPoly<RationalField>& P) {
    if (P.is_zero()) return P;
    Int L = 1, G = 0;
    for (const auto& t : P.terms) {
        L = lcm(L, t.c.get_den());
        G = gcd(G, t.c.get_num());
    }
    Rat s(L, G);  // L/G clears denominators and leaves content exactly 1
    s.canonicalize();
    if (sgn(P.terms.front().c) < 0) s = -s;
    return hp_scale(R, P, s);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string monomial_string(u64 key) {
    unsigned e[3] = {key_a(key), key_b(key), key_c(key)};
    const char* names[3] = {"x", "y", "z"};
    std::string s;
    for (int v = 0; v < 3; ++v) {
        if (e[v] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[v];
        if (e[v] > 1) s += "^" + std::to_string(e[v]);
    }
    return s;
}

}  // namespace detail

/// Canonical text form, graded-lex descending, explicit '*': "x*y - 2*z^2".
/// Coefficients print through the ring; over QQ a leading '-' is folded into
/// the separator.
template <class Ring>
std::string hp_to_string(const Ring& R, const HPoly<Ring>& P) {
    if (P.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : P.terms) {
        std::string cs = R.to_string(t.c);
        bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        std::string mono = detail::monomial_string(t.key);
        std::string piece;
        if (mono.empty()) {
            piece = cs;
        } else if (cs == "1") {
            piece = mono;
        } else {
            bool needs_parens = cs.find_first_of("+-") != std::string::npos;
            piece = (needs_parens ? "(" + cs + ")" : cs) + "*" + mono;
        }
        if (first) {
            out += neg ? "-" + piece : piece;
            first = false;
        } else {
            out += neg ? " - " + piece : " + " + piece;
        }
    }
    return out;
}

}  // namespace cremona

#endif  // CREMONA_HPOLY_HPP
