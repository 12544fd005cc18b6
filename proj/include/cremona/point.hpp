#ifndef CREMONA_POINT_HPP
#define CREMONA_POINT_HPP

/// Points of the projective plane with a canonical representative: the first
/// nonzero coordinate is scaled to 1, so structural equality is projective
/// equality.

#include <array>
#include <string>
#include <vector>

#include "cremona/fields.hpp"
#include "cremona/hpoly.hpp"

namespace cremona {

template <class Ring>
struct ProjPoint {
    std::array<typename Ring::Elem, 3> c;

    bool operator==(const ProjPoint&) const = default;
};

/// Canonicalize homogeneous coordinates; all-zero is not a point.
template <class Ring>
ProjPoint<Ring> pt_make(const Ring& R, const typename Ring::Elem& x,
                        const typename Ring::Elem& y,
                        const typename Ring::Elem& z) {
    std::array<typename Ring::Elem, 3> c = {x, y, z};
    for (int i = 0; i < 3; ++i) {
        if (R.is_zero(c[i])) continue;
        auto inv = R.inv(c[i]);
        for (int j = i; j < 3; ++j) c[j] = R.mul(c[j], inv);
        return ProjPoint<Ring>{c};
    }
    throw precondition_error("[0, 0, 0] is not a projective point");
}

template <class Ring>
ProjPoint<Ring> pt_make_longs(const Ring& R, long x, long y, long z) {
    return pt_make(R, R.from_long(x), R.from_long(y), R.from_long(z));
}

template <class Ring>
std::string pt_to_string(const Ring& R, const ProjPoint<Ring>& p) {
    return "[" + R.to_string(p.c[0]) + ", " + R.to_string(p.c[1]) + ", " +
           R.to_string(p.c[2]) + "]";
}

/// Evaluate a homogeneous polynomial at the canonical representative.
template <class Ring>
typename Ring::Elem hp_eval(const Ring& R, const HPoly<Ring>& P,
                            const ProjPoint<Ring>& p) {
    return hp_eval_coords(R, P, p.c);
}

/// All q^2 + q + 1 points of the projective plane over a finite field, in a
/// fixed order: [1, a, b] (a, b in enumeration order), then [0, 1, c], then
/// [0, 0, 1]. Guarded so an oversized field fails fast rather than thrashing.
template <class Ring>
std::vector<ProjPoint<Ring>> enumerate_p2(const Ring& R) {
    static_assert(Ring::is_finite, "plane enumeration needs a finite field");
    const u64 q = R.elem_count();
    if (q > (u64(1) << 20))
        throw cap_error("field too large for plane enumeration", q,
                        u64(1) << 20);
    std::vector<ProjPoint<Ring>> pts;
    pts.reserve(std::size_t(q * q + q + 1));
    for (u64 i = 0; i < q; ++i)
        for (u64 j = 0; j < q; ++j)
            pts.push_back(ProjPoint<Ring>{{R.one(), R.elem_at(i), R.elem_at(j)}});
    for (u64 i = 0; i < q; ++i)
        pts.push_back(ProjPoint<Ring>{{R.zero(), R.one(), R.elem_at(i)}});
    pts.push_back(ProjPoint<Ring>{{R.zero(), R.zero(), R.one()}});
    return pts;
}

}  // namespace cremona

#endif  // CREMONA_POINT_HPP
