#ifndef DYFRAC_UNCERTAINTY_HPP
#define DYFRAC_UNCERTAINTY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dyfrac/dyadic.hpp"
#include "dyfrac/forms_dyadic.hpp"
#include "dyfrac/haar.hpp"

namespace dyfrac {

/// gamma(s) = gamma_1(s) gamma_2(s).
double gamma(FormParameter s);

inline constexpr double slack_tolerance = 1e-12;

struct UncertaintyReport {
    double s = 0.0;
    double position = 0.0;
    double energy = 0.0;
    double product = 0.0;
    double gamma_bound = 0.0;
    double norm_fourth = 0.0;
    double slack = 0.0;  // product - gamma_bound * norm_fourth
    bool pass = false;   // slack >= -1e-12 product
};

enum class DyadicPath { spectral, direct };

/// Q^delta E^delta >= gamma ||phi||^4 for a finite Haar expansion.
/// Throws InvalidParameter for the zero expansion.
UncertaintyReport dyadic_uncertainty(const HaarExpansion& e, FormParameter s, DyadicPath path = DyadicPath::spectral);

/// Q(|f|) E(f) >= gamma for ||f|| = 1. Throws InvalidParameter unless
/// ||f||^2 is within 1e-10 of 1.
UncertaintyReport euclid_uncertainty(const StepFunction& f, FormParameter s);

enum class OriginMode { support, quantile };

struct WitnessRecord {
    DyadicRational x0;
    double mass_captured = 0.0;
    double dyadic_position = 0.0;
    double dyadic_energy = 0.0;
    double dyadic_product = 0.0;
    double euclid_position = 0.0;
    double euclid_energy = 0.0;
    double euclid_product = 0.0;
    double bound = 0.0;  // gamma (1 - eps)^2
    bool domination_holds = false;
};

/// Picks a grid point x0 (left edge of the support, or the last cell edge
/// leaving at least 1 - eps of the mass to its right), evaluates the dyadic
/// forms of f restricted to (x0, inf) on the grid shifted by x0, and checks
///   dyadic product >= gamma (1-eps)^2,
///   Q(|f|) >= shifted Q^delta,  E(f) >= shifted E^delta,
///   Q(|f|) E(f) >= gamma (1-eps)^2,
/// each up to the relative slack tolerance.
WitnessRecord shifted_grid_witness(const StepFunction& f, FormParameter s, double epsilon,
                                   OriginMode mode = OriginMode::support);

struct SweepConfig {
    std::vector<double> s_grid;
    int trials = 100;
    std::uint64_t seed = 42;
    int max_coefficients = 64;
    int level_min = -4;
    int level_max = 6;
    bool single_haar = false;
};

/// Throws InvalidParameter for an invalid config.
void validate(const SweepConfig& config);

/// Seed of trial i derived from the base seed (splitmix64).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Between 1 and max_coefficients distinct intervals with levels in
/// [level_min, level_max] and offsets in [0, 2^(j - level_min + 1)),
/// coefficients uniform on [-1, 1], then normalized. With single_haar the
/// expansion is one interval with coefficient 1.
HaarExpansion random_wave_function(std::uint64_t seed, const SweepConfig& config);

struct StepConfig {
    int level_min = -2;
    int level_max = 4;
    int max_cells = 24;
    std::int64_t max_start = 64;
};

/// Contiguous run of 1..max_cells cells starting at offset [0, max_start),
/// values uniform on [-1, 1] with roughly one in eight set to 0, normalized.
StepFunction random_step_function(std::uint64_t seed, const StepConfig& config = {});

struct SweepRow {
    double s = 0.0;
    double gamma = 0.0;
    std::optional<double> min_product;
    std::optional<double> min_slack;
    int passes = 0;
    int trials = 0;
};

struct SweepResult {
    std::vector<UncertaintyReport> reports;  // ordered by (s, trial)
    std::vector<SweepRow> rows;
};

/// The same `trials` expansions are evaluated at every s of the grid.
SweepResult sweep(const SweepConfig& config, DyadicPath path = DyadicPath::spectral);

}  // namespace dyfrac

#endif  // DYFRAC_UNCERTAINTY_HPP
