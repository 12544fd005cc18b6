// Census and orbit demo over a finite field: enumerate periodic points of a
// quadratic map, then follow one orbit into an indeterminacy point.

#include <iostream>

#include "cremona/findyn.hpp"
#include "cremona/parse.hpp"

int main() {
    using namespace cremona;
    PrimeField F{5};

    auto f = map_new(F, hp_parse(F, "x*y"), hp_parse(F, "x*y - 2*z^2"),
                     hp_parse(F, "y*z + 3*z^2"));

    auto census = periodic_census(F, f, 31, /*non_critical_only=*/false);
    std::cout << "periodic points over GF(5): " << census.size() << "\n";
    for (const auto& e : census)
        std::cout << "  " << pt_to_string(F, e.point) << " period " << e.period
                  << (e.critical ? " (critical)" : "") << "\n";

    auto rec = orbit(F, f, pt_make_longs(F, 0, -2, 3));
    std::cout << "orbit of [0,-2,3]: " << to_string(rec.abort) << " after " << rec.abort_step
              << " steps\n";

    auto dens = density_check(F, {pt_make_longs(F, 0, 1, 2), pt_make_longs(F, 0, 1, 4)}, 1);
    if (dens.contained)
        std::cout << "those census points lie on the line " << hp_to_string(F, *dens.curve)
                  << "\n";
    return 0;
}
