#pragma once

#include <cstdint>
#include <optional>

#include "doi/matrix.hpp"

namespace doi {

// Tolerances of the property suites. These are the library's contract for the
// identities and bounds it implements; the CLI exposes an override flag but
// the defaults are authoritative.
namespace suite_tolerances {
inline constexpr double roundtrip = 1e-10;
inline constexpr double perturbation = 1e-8;
inline constexpr double homomorphism_additivity = 1e-10;
inline constexpr double homomorphism_multiplicativity = 1e-9;
inline constexpr double split = 1e-9;
inline constexpr double telescope = 1e-8;
inline constexpr double continuity_shrink = 1e-3;  // deviation(1e-5) <= shrink * deviation(1e-2)
inline constexpr double norms = 1e-10;             // normalized bound violation
}  // namespace suite_tolerances

struct SuiteInstanceResult {
    int index = 0;
    double residual = 0.0;
    bool pass = true;
};

struct SuiteReport {
    std::string suite;
    int count = 0;
    uint64_t seed = 0;
    double tolerance = 0.0;
    double max_residual = 0.0;
    bool pass = true;
    std::vector<SuiteInstanceResult> instances;
    std::vector<std::pair<std::string, double>> metrics;
    double runtime_seconds = 0.0;
};

// Runs one of the property suites over `count` seeded random instances:
//   roundtrip     synthesis reconstruction and all spectral invariants
//   perturbation  f(X1) Y - Y f(X2) = T_{f^[1]}(X1 Y - Y X2)
//   homomorphism  additivity and T_{beta gamma} = T_beta o T_gamma
//   split         parameter splitting with the extra term mu, plus the
//                 commuting-nilpotent divergence classification
//   telescope     T^{A,X} - T^{B,X} = T^{A,B,X}(A - B, .)
//   continuity    deviation decay under Jordan-data perturbations
//   norms         soundness of every upper/lower bound plus tightness witnesses
// Unknown names throw InvalidInput. tol_override replaces the primary
// tolerance of the suite.
SuiteReport run_suite(const std::string& name, int count, uint64_t seed,
                      std::optional<double> tol_override = std::nullopt);

}  // namespace doi
