#ifndef CREMONA_ARITH_HPP
#define CREMONA_ARITH_HPP

/// Low-level integer arithmetic: 64-bit modular kernels, deterministic
/// primality, factorization of machine-word integers, seeded RNG, and
/// exact rational helpers on top of GMP.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>
#include <algorithm>

#include <gmpxx.h>

#include "cremona/errors.hpp"

namespace cremona {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((u128)a * b % m);
}

inline u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;            // a, b < m <= 2^61, no overflow
    return s >= m ? s - m : s;
}

inline u64 submod(u64 a, u64 b, u64 m) {
    return a >= b ? a - b : a + m - b;
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

/// splitmix64: tiny fully-specified PRNG so seeded runs replay identically
/// across platforms (std distributions are implementation-defined).
struct SplitMix64 {
    u64 state;

    explicit SplitMix64(u64 seed = 0) : state(seed) {}

    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound) by rejection; bound > 0.
    u64 below(u64 bound) {
        u64 threshold = (0 - bound) % bound;
        for (;;) {
            u64 r = next();
            if (r >= threshold) return r % bound;
        }
    }
};

namespace detail {

inline u64 pollard_rho(u64 n, SplitMix64& rng) {
    if ((n & 1) == 0) return 2;
    for (;;) {
        u64 x = rng.below(n - 2) + 2;
        u64 y = x;
        u64 c = rng.below(n - 1) + 1;
        u64 d = 1;
        while (d == 1) {
            x = addmod(mulmod(x, x, n), c, n);
            y = addmod(mulmod(y, y, n), c, n);
            y = addmod(mulmod(y, y, n), c, n);
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::__gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

}  // namespace detail

/// Prime factorization of a 64-bit integer, sorted, with multiplicity.
inline std::vector<u64> factor_u64(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    SplitMix64 rng(0x5eedf00dULL ^ n);
    std::vector<u64> stack{n};
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime_u64(m)) { out.push_back(m); continue; }
        for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
            while (m % p == 0) { out.push_back(p); m /= p; }
        }
        if (m == 1) continue;
        if (is_prime_u64(m)) { out.push_back(m); continue; }
        u64 d = detail::pollard_rho(m, rng);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Exact rational helpers (GMP backed).

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// floor(root_n(m)) for m >= 0.
inline Int floor_nth_root(const Int& m, unsigned long n) {
    Int r;
    mpz_root(r.get_mpz_t(), m.get_mpz_t(), n);
    return r;
}

/// Largest dyadic t/2^prec_bits with t^n <= v; a sound lower bracket of v^(1/n).
inline Rat nth_root_lower(const Rat& v, unsigned long n, unsigned prec_bits = 96) {
    if (sgn(v) < 0) throw precondition_error("nth_root_lower: negative radicand");
    // floor(v * 2^(n*prec)) then floor n-th root, all in integers.
    Int scaled = (v.get_num() << (n * prec_bits)) / v.get_den();
    Int t = floor_nth_root(scaled, n);
    Rat r(t, Int(1) << prec_bits);
    r.canonicalize();
    return r;
}

/// Smallest dyadic t/2^prec_bits with t^n >= v; a sound upper bracket of v^(1/n).
inline Rat nth_root_upper(const Rat& v, unsigned long n, unsigned prec_bits = 96) {
    if (sgn(v) < 0) throw precondition_error("nth_root_upper: negative radicand");
    Int num_scaled = v.get_num() << (n * prec_bits);
    Int scaled = num_scaled / v.get_den();
    if (scaled * v.get_den() != num_scaled) scaled += 1;  // ceil
    Int t = floor_nth_root(scaled, n);
    Int tn;
    mpz_pow_ui(tn.get_mpz_t(), t.get_mpz_t(), n);
    if (tn < scaled) t += 1;
    Rat r(t, Int(1) << prec_bits);
    r.canonicalize();
    return r;
}

inline Rat rat_pow(const Rat& base, unsigned long e) {
    Rat r = 1;
    Rat b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

/// Truncated decimal rendering of an exact rational, for report annotations.
/// Deterministic: plain long division, no floating point.
inline std::string decimal_string(const Rat& q, int frac_digits = 12) {
    Int num = q.get_num();
    Int den = q.get_den();
    std::string s;
    if (sgn(num) < 0) { s += '-'; num = -num; }
    Int ip = num / den;
    Int rem = num - ip * den;
    s += ip.get_str();
    if (frac_digits <= 0 || rem == 0) return s;
    s += '.';
    for (int i = 0; i < frac_digits && rem != 0; ++i) {
        rem *= 10;
        Int d = rem / den;
        rem -= d * den;
        s += static_cast<char>('0' + d.get_ui());
    }
    return s;
}

}  // namespace cremona

#endif  // CREMONA_ARITH_HPP
