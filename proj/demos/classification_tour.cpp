// A short tour: classify two ordinal intervals, look up distance bounds,
// build the weighted isomorphism pair between C[1,w] and C[1,w*2], and
// check it with the verification harness.

#include <iostream>

#include "ckord/distance.hpp"
#include "ckord/verify.hpp"

using namespace ckord;

int main() {
    Ordinal a = parse_ordinal("w^w");
    Ordinal b = parse_ordinal("w^(w*2)");

    Classification cls = classify(a, b);
    std::cout << "C[1," << format_ordinal(a) << "] vs C[1," << format_ordinal(b) << "]\n"
              << "  homeomorphic: " << cls.homeo << ", isomorphic: " << cls.iso
              << ", positive forward: " << cls.pos_a_to_b << "\n";

    DistanceBound bound = distance_bounds(a, b, DistanceMode::classical);
    if (bound.exact)
        std::cout << "  distance: " << bound.exact->to_string() << " = "
                  << bound.exact->to_double() << "\n";

    // the weighted pair between C[1,w] and C[1,w*2] at its best weight
    auto pair = build_omega2_family<double>((3.0 - std::sqrt(3.0)) / 2.0);
    std::cout << "omega2 distortion at the optimal weight: " << distortion(pair) << "\n";

    // exact verification with rational weights
    auto exact_pair = build_omega2_family<Rational>(Rational{1, 3});
    VerifyConfig cfg;
    cfg.samples = 40;
    auto report = verify_operator(exact_pair, cfg);
    std::cout << "verification of omega2 at lambda = 1/3: "
              << (report.all_passed() ? "all checks pass" : "FAILED") << "\n";
    return report.all_passed() ? 0 : 1;
}
