#ifndef DYFRAC_ORACLE_HPP
#define DYFRAC_ORACLE_HPP

#include <cstdint>

#include "dyfrac/forms_dyadic.hpp"
#include "dyfrac/haar.hpp"

namespace dyfrac {

struct OracleEstimate {
    double value = 0.0;
    double bound = 0.0;      // truncation bound, quadrature error estimate, or standard error
    std::int64_t n = 0;      // series terms, quadrature panels, or samples
};

enum class SeriesKind {
    ball_power,        // int_B delta^(alpha-1) dy, exponent = alpha, measure = |B|
    complement_power,  // int_{B^c} delta^(-1-alpha) dy, exponent = alpha, measure = |B|
    intra_cell_Q,      // iint_{C x C} delta^(2s-1), exponent = s, measure = |C|
    outer_tail_E,      // int_{G^c} delta^(-1-2s) dy, exponent = s, measure = |G|
};

/// Level-set series summed shell by shell. `terms` = 0 picks the number of
/// shells so that the remaining geometric tail is below 1e-14 relative.
/// The bound is the exact sum of the omitted shells.
OracleEstimate dyadic_series_oracle(SeriesKind kind, double exponent, double measure, int terms = 0);

enum class FormKind { position, energy };

/// Euclidean form by nested integration: the inner integral over each cell
/// (or exterior ray) in closed form, the outer one by global adaptive
/// Simpson quadrature. `tolerance` is relative, per outer integral; the
/// position form is evaluated on |f|. Throws NonConvergence past 20000
/// panels in a single integral.
OracleEstimate euclid_adaptive_oracle(const StepFunction& f, FormKind kind, FormParameter s,
                                      double tolerance = 1e-10);

/// Dyadic form by Monte Carlo stratified over delta-shells: x is uniform on
/// the cells where f is nonzero and, within each shell, y is uniform on the
/// shell, so the kernel is a constant weight per stratum. Self-cell
/// (position) and exterior (energy) pairs form one more stratum each. Bound
/// is one standard error; it is 0 when every stratum has a constant integrand.
/// Requires samples >= 10^4.
OracleEstimate dyadic_stratified_oracle(const StepFunction& f, FormKind kind, FormParameter s,
                                        std::uint64_t seed, std::int64_t samples);

}  // namespace dyfrac

#endif  // DYFRAC_ORACLE_HPP
