// Minimal library walkthrough: build a quadratic map over QQ, iterate it,
// and bracket its dynamical degree from the degree sequence.

#include <iostream>

#include "cremona/cremona.hpp"
#include "cremona/dyndeg.hpp"
#include "cremona/parse.hpp"

int main() {
    using namespace cremona;
    RationalField Q;

    auto f = map_new(Q, hp_parse(Q, "x*y"), hp_parse(Q, "x*y - 2*z^2"),
                     hp_parse(Q, "y*z + 3*z^2"));
    auto j = map_new(Q, hp_parse(Q, "2*x^2 - 2*x*y"), hp_parse(Q, "(-3*x + 3*y + 2*z)^2"),
                     hp_parse(Q, "(x - y)*(-3*x + 3*y + 2*z)"));

    std::cout << "f = " << map_to_string(Q, f) << "\n";
    std::cout << "j inverts f: " << (verify_inverse(Q, f, j) ? "yes" : "no") << "\n";

    DegreeSequence seq = iterate_degrees(Q, f, 8);
    std::cout << "deg f^n:";
    for (unsigned d : seq.degrees) std::cout << ' ' << d;
    std::cout << "\n";

    Lambda1Bounds b = bounds_from_sequence(seq);
    if (b.best_upper)
        std::cout << "lambda1 <= " << decimal_string(*b.best_upper, 9) << "\n";

    // Over GF(5) the degrees fall behind 2^n once cancellation kicks in.
    auto [f5, rep] = reduce_mod_p(Q, f, 5, j);
    PrimeField F5{5};
    std::cout << "mod 5: " << map_to_string(F5, f5) << " (inverse "
              << (rep.birational_verified == InverseCheck::Verified ? "verified" : "lost")
              << ")\n";
    DegreeSequence seq5 = iterate_degrees(F5, f5, 6);
    std::cout << "deg f^n mod 5:";
    for (unsigned d : seq5.degrees) std::cout << ' ' << d;
    std::cout << "\n";
    return 0;
}
