#ifndef CREMONA_FIELDS_HPP
#define CREMONA_FIELDS_HPP

/// Exact scalar arithmetic over QQ, prime fields GF(p) with p < 2^61, and
/// extensions GF(p,k) presented as F_p[t]/(modulus).
///
/// Rings are small value objects passed alongside their elements; every
/// element is kept in canonical form (reduced fraction / residues in [0,p)),
/// so element equality is plain structural comparison.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cremona/arith.hpp"
#include "cremona/errors.hpp"

namespace cremona {

/// Largest admissible prime bound: products of residues fit in 128 bits.
inline constexpr u64 kMaxPrime = (u64(1) << 61);

enum class FieldKind { Rationals, Prime, Extension };

struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    u64 p = 0;
    unsigned k = 1;
    std::vector<u64> modulus;  // monic, degree k, coefficients low to high; Extension only

    bool operator==(const FieldSpec&) const = default;

    bool is_finite() const { return kind != FieldKind::Rationals; }

    Int size() const {
        if (!is_finite()) throw precondition_error("field size: QQ is infinite");
        Int q;
        mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), k);
        return q;
    }

    std::string to_string() const {
        switch (kind) {
            case FieldKind::Rationals: return "QQ";
            case FieldKind::Prime: return "GF(" + std::to_string(p) + ")";
            case FieldKind::Extension:
                return "GF(" + std::to_string(p) + "," + std::to_string(k) + ")";
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// Univariate polynomials over F_p, little-endian coefficients. Only what the
// extension-field plumbing needs: mul/mod, Frobenius powers, gcd, inverse.

namespace fppoly {

using Poly = std::vector<u64>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = addmod(c[i + j], cremona::mulmod(a[i], b[j], p), p);
    }
    // m is monic: subtract m shifted while degree >= deg m
    std::size_t dm = m.size() - 1;
    while (c.size() > dm) {
        u64 lead = c.back();
        std::size_t shift = c.size() - 1 - dm;
        if (lead != 0) {
            for (std::size_t i = 0; i <= dm; ++i)
                c[shift + i] = submod(c[shift + i], cremona::mulmod(lead, m[i], p), p);
        }
        c.pop_back();
        trim(c);
        if (c.size() <= dm) break;
    }
    trim(c);
    return c;
}

/// X^(p^i) mod m by repeated Frobenius (binary powering per step).
inline Poly frobenius_power(const Poly& m, u64 p, unsigned i) {
    Poly x{0, 1};
    trim(x);
    Poly t = x;
    for (unsigned step = 0; step < i; ++step) {
        Poly r{1};
        Poly base = t;
        u64 e = p;
        while (e > 0) {
            if (e & 1) r = mulmod(r, base, m, p);
            base = mulmod(base, base, m, p);
            e >>= 1;
        }
        t = r;
    }
    return t;
}

inline u64 inv_mod_p(u64 a, u64 p) {
    return powmod(a % p, p - 2, p);
}

inline Poly monic(Poly a, u64 p) {
    trim(a);
    if (a.empty()) return a;
    u64 s = inv_mod_p(a.back(), p);
    for (auto& c : a) c = cremona::mulmod(c, s, p);
    return a;
}

inline Poly rem(Poly a, const Poly& b, u64 p) {
    trim(a);
    std::size_t db = b.size() - 1;
    u64 inv_lead = inv_mod_p(b.back(), p);
    while (a.size() > db) {
        u64 q = cremona::mulmod(a.back(), inv_lead, p);
        std::size_t shift = a.size() - 1 - db;
        if (q != 0)
            for (std::size_t i = 0; i <= db; ++i)
                a[shift + i] = submod(a[shift + i], cremona::mulmod(q, b[i], p), p);
        a.pop_back();
        trim(a);
    }
    return a;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a), p);
}

/// Inverse of a mod m (m irreducible) by the extended Euclidean algorithm.
inline Poly invmod(Poly a, const Poly& m, u64 p) {
    trim(a);
    if (a.empty()) throw precondition_error("inverse of zero field element");
    Poly r0 = m, r1 = a;
    Poly s0{}, s1{1};
    while (!r1.empty() && r1.size() > 1) {
        // quotient of r0 by r1
        Poly q;
        {
            Poly rem_ = r0;
            std::size_t db = r1.size() - 1;
            u64 inv_lead = inv_mod_p(r1.back(), p);
            if (rem_.size() > db) q.assign(rem_.size() - db, 0);
            while (rem_.size() > db) {
                u64 qc = cremona::mulmod(rem_.back(), inv_lead, p);
                std::size_t shift = rem_.size() - 1 - db;
                q[shift] = qc;
                if (qc != 0)
                    for (std::size_t i = 0; i <= db; ++i)
                        rem_[shift + i] = submod(rem_[shift + i], cremona::mulmod(qc, r1[i], p), p);
                rem_.pop_back();
                trim(rem_);
            }
            r0 = std::move(r1);
            r1 = std::move(rem_);
        }
        // s_{i+1} = s0 - q * s1
        Poly qs(q.size() + (s1.empty() ? 0 : s1.size() - 1) + 1, 0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (std::size_t j = 0; j < s1.size(); ++j)
                qs[i + j] = addmod(qs[i + j], cremona::mulmod(q[i], s1[j], p), p);
        }
        trim(qs);
        Poly s2(std::max(s0.size(), qs.size()), 0);
        for (std::size_t i = 0; i < s2.size(); ++i) {
            u64 x = i < s0.size() ? s0[i] : 0;
            u64 y = i < qs.size() ? qs[i] : 0;
            s2[i] = submod(x, y, p);
        }
        trim(s2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) throw precondition_error("element not invertible: gcd with modulus nontrivial");
    // r1 is a nonzero constant c; inverse is s1 / c.
    u64 c_inv = inv_mod_p(r1[0], p);
    for (auto& c : s1) c = cremona::mulmod(c, c_inv, p);
    trim(s1);
    return s1;
}

/// Irreducibility over F_p: gcd(m, X^(p^i) - X) constant for 1 <= i <= k/2.
inline bool is_irreducible(const Poly& m, u64 p) {
    if (m.size() < 2 || m.back() != 1) return false;
    unsigned k = static_cast<unsigned>(m.size() - 1);
    if (k == 1) return true;
    for (unsigned i = 1; i <= k / 2; ++i) {
        Poly t = frobenius_power(m, p, i);
        // t - X
        Poly diff = t;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = submod(diff[1], 1, p);
        trim(diff);
        Poly g = gcd(m, diff, p);
        if (g.size() > 1) return false;
    }
    return true;
}

inline Poly random_irreducible(u64 p, unsigned k, SplitMix64& rng) {
    for (;;) {
        Poly m(k + 1, 0);
        m[k] = 1;
        for (unsigned i = 0; i < k; ++i) m[i] = rng.below(p);
        if (is_irreducible(m, p)) return m;
    }
}

}  // namespace fppoly

// ---------------------------------------------------------------------------
// Rings

struct RationalField {
    using Elem = Rat;
    static constexpr bool is_finite = false;

    FieldSpec spec() const { return FieldSpec{FieldKind::Rationals, 0, 1, {}}; }

    Elem zero() const { return Rat(0); }
    Elem one() const { return Rat(1); }
    Elem from_int(const Int& n) const { return Rat(n); }
    Elem from_long(long n) const { return Rat(n); }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw precondition_error("division by zero in QQ");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    std::string to_string(const Elem& a) const { return a.get_str(); }
};

struct PrimeField {
    u64 p;
    using Elem = u64;
    static constexpr bool is_finite = true;

    explicit PrimeField(u64 p_) : p(p_) {}

    FieldSpec spec() const { return FieldSpec{FieldKind::Prime, p, 1, {}}; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_long(long n) const {
        long r = n % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        return static_cast<u64>(r);
    }
    Elem from_int(const Int& n) const {
        Int r = n % Int(static_cast<unsigned long>(p));
        if (r < 0) r += static_cast<unsigned long>(p);
        return r.get_ui();
    }

    Elem add(Elem a, Elem b) const { return addmod(a, b, p); }
    Elem sub(Elem a, Elem b) const { return submod(a, b, p); }
    Elem mul(Elem a, Elem b) const { return mulmod(a, b, p); }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw precondition_error("division by zero in GF(p)");
        return powmod(a, p - 2, p);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    u64 elem_count() const { return p; }
    Elem elem_at(u64 i) const { return i; }
    u64 index_of(Elem a) const { return a; }
    Elem random(SplitMix64& rng) const { return rng.below(p); }

    std::string to_string(Elem a) const { return std::to_string(a); }
};

struct ExtField {
    u64 p;
    unsigned k;
    std::vector<u64> modulus;  // monic, degree k
    using Elem = std::vector<u64>;  // coefficients c0..c_{k-1}
    static constexpr bool is_finite = true;

    ExtField(u64 p_, unsigned k_, std::vector<u64> modulus_)
        : p(p_), k(k_), modulus(std::move(modulus_)) {}

    FieldSpec spec() const { return FieldSpec{FieldKind::Extension, p, k, modulus}; }

    Elem zero() const { return Elem(k, 0); }
    Elem one() const {
        Elem e(k, 0);
        e[0] = 1;
        return e;
    }
    Elem from_long(long n) const {
        Elem e(k, 0);
        long r = n % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        e[0] = static_cast<u64>(r);
        return e;
    }
    Elem from_int(const Int& n) const {
        Elem e(k, 0);
        Int r = n % Int(static_cast<unsigned long>(p));
        if (r < 0) r += static_cast<unsigned long>(p);
        e[0] = r.get_ui();
        return e;
    }
    /// The generator t of F_p[t]/(modulus).
    Elem generator() const {
        Elem e(k, 0);
        if (k > 1) e[1] = 1;
        return e;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem c(k);
        for (unsigned i = 0; i < k; ++i) c[i] = addmod(a[i], b[i], p);
        return c;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem c(k);
        for (unsigned i = 0; i < k; ++i) c[i] = submod(a[i], b[i], p);
        return c;
    }
    Elem neg(const Elem& a) const {
        Elem c(k);
        for (unsigned i = 0; i < k; ++i) c[i] = a[i] == 0 ? 0 : p - a[i];
        return c;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        fppoly::Poly pa(a.begin(), a.end()), pb(b.begin(), b.end());
        fppoly::trim(pa);
        fppoly::trim(pb);
        fppoly::Poly c = fppoly::mulmod(pa, pb, modulus, p);
        c.resize(k, 0);
        return Elem(c.begin(), c.end());
    }
    Elem inv(const Elem& a) const {
        fppoly::Poly pa(a.begin(), a.end());
        fppoly::trim(pa);
        fppoly::Poly c = fppoly::invmod(pa, modulus, p);
        c.resize(k, 0);
        return Elem(c.begin(), c.end());
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    bool is_zero(const Elem& a) const {
        for (u64 c : a)
            if (c != 0) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    u64 elem_count() const {
        u128 q = 1;
        for (unsigned i = 0; i < k; ++i) {
            q *= p;
            if (q > (u128(1) << 62)) throw cap_error("extension field too large to enumerate", k, 62);
        }
        return static_cast<u64>(q);
    }
    Elem elem_at(u64 i) const {
        Elem e(k);
        for (unsigned j = 0; j < k; ++j) {
            e[j] = i % p;
            i /= p;
        }
        return e;
    }
    u64 index_of(const Elem& a) const {
        u64 i = 0;
        for (unsigned j = k; j-- > 0;) i = i * p + a[j];
        return i;
    }
    Elem random(SplitMix64& rng) const {
        Elem e(k);
        for (unsigned i = 0; i < k; ++i) e[i] = rng.below(p);
        return e;
    }

    std::string to_string(const Elem& a) const {
        bool constant = true;
        for (unsigned i = 1; i < k; ++i)
            if (a[i] != 0) constant = false;
        if (constant) return std::to_string(a[0]);
        std::string s;
        bool first = true;
        for (unsigned i = 0; i < k; ++i) {
            if (a[i] == 0) continue;
            if (!first) s += "+";
            first = false;
            if (i == 0) {
                s += std::to_string(a[i]);
            } else {
                if (a[i] != 1) s += std::to_string(a[i]) + "*";
                s += "t";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }
};

// ---------------------------------------------------------------------------
// FieldSpec construction and dispatch

/// Parse "QQ" | "GF(p)" | "GF(p,k)". For GF(p,k) an irreducible modulus is
/// found by seeded random search, so repeated runs with the same seed agree.
inline FieldSpec field_make(const std::string& text, u64 seed = 0) {
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s += c;

    if (s == "QQ") return FieldSpec{FieldKind::Rationals, 0, 1, {}};

    if (s.rfind("GF(", 0) == 0 && !s.empty() && s.back() == ')') {
        std::string inner = s.substr(3, s.size() - 4);
        auto comma = inner.find(',');
        std::string p_txt = comma == std::string::npos ? inner : inner.substr(0, comma);
        std::string k_txt = comma == std::string::npos ? "" : inner.substr(comma + 1);

        u64 p = 0;
        try {
            std::size_t used = 0;
            p = std::stoull(p_txt, &used);
            if (used != p_txt.size()) throw std::invalid_argument(p_txt);
        } catch (const std::exception&) {
            throw precondition_error("unparsable field spec: " + text);
        }
        if (p >= kMaxPrime)
            throw precondition_error("prime too large (need p < 2^61): " + p_txt);
        if (!is_prime_u64(p))
            throw precondition_error("not a prime: " + p_txt);

        unsigned k = 1;
        if (!k_txt.empty()) {
            try {
                std::size_t used = 0;
                unsigned long kl = std::stoul(k_txt, &used);
                if (used != k_txt.size() || kl == 0 || kl > 64) throw std::invalid_argument(k_txt);
                k = static_cast<unsigned>(kl);
            } catch (const std::exception&) {
                throw precondition_error("invalid extension degree in field spec: " + text);
            }
        }
        if (k == 1) return FieldSpec{FieldKind::Prime, p, 1, {}};

        SplitMix64 rng(seed ^ (p * 0x9e3779b97f4a7c15ull) ^ k);
        auto modulus = fppoly::random_irreducible(p, k, rng);
        return FieldSpec{FieldKind::Extension, p, k, std::move(modulus)};
    }
    throw precondition_error("unparsable field spec: " + text);
}

/// Validates the invariants of an explicitly assembled spec.
inline void field_validate(const FieldSpec& spec) {
    if (spec.kind == FieldKind::Rationals) return;
    if (spec.p >= kMaxPrime || !is_prime_u64(spec.p))
        throw precondition_error("field spec: p must be a prime < 2^61");
    if (spec.kind == FieldKind::Extension) {
        if (spec.k < 2) throw precondition_error("field spec: extension degree must be >= 2");
        if (spec.modulus.size() != spec.k + 1 || spec.modulus.back() != 1)
            throw precondition_error("field spec: modulus must be monic of degree k");
        for (u64 c : spec.modulus)
            if (c >= spec.p) throw precondition_error("field spec: modulus coefficient out of range");
        if (!fppoly::is_irreducible(spec.modulus, spec.p))
            throw precondition_error("field spec: modulus is reducible");
    }
}

template <class F>
decltype(auto) with_ring(const FieldSpec& spec, F&& f) {
    switch (spec.kind) {
        case FieldKind::Rationals: return f(RationalField{});
        case FieldKind::Prime: return f(PrimeField{spec.p});
        case FieldKind::Extension: return f(ExtField{spec.p, spec.k, spec.modulus});
    }
    throw error("corrupt field spec");
}

/// Order of a in the multiplicative group of F_p; divides p-1.
inline u64 multiplicative_order(u64 a, u64 p) {
    if (!is_prime_u64(p)) throw precondition_error("multiplicative_order: p not prime");
    a %= p;
    if (a == 0) throw precondition_error("multiplicative_order: a = 0");
    u64 m = p - 1;
    auto primes = factor_u64(m);
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (u64 ell : primes) {
        while (m % ell == 0 && powmod(a, m / ell, p) == 1) m /= ell;
    }
    return m;
}

}  // namespace cremona

#endif  // CREMONA_FIELDS_HPP
