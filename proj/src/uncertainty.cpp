#include "dyfrac/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dyfrac/errors.hpp"
#include "dyfrac/forms_euclid.hpp"

namespace dyfrac {

namespace {

double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    return std::uint64_t((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

double symmetric(std::mt19937_64& rng) { return 2.0 * unit(rng) - 1.0; }

bool at_least(double a, double b) { return a >= b - slack_tolerance * std::abs(b); }

UncertaintyReport make_report(double s, double q, double e, double norm_fourth) {
    UncertaintyReport r;
    r.s = s;
    r.position = q;
    r.energy = e;
    r.product = q * e;
    r.gamma_bound = gamma(s);
    r.norm_fourth = norm_fourth;
    r.slack = r.product - r.gamma_bound * norm_fourth;
    r.pass = r.slack >= -slack_tolerance * std::abs(r.product);
    return r;
}

}  // namespace

double gamma(FormParameter s) { return gamma1(s) * gamma2(s); }

UncertaintyReport dyadic_uncertainty(const HaarExpansion& e, FormParameter s, DyadicPath path) {
    const double norm2 = e.norm_squared();
    if (!(norm2 > 0.0)) throw InvalidParameter("uncertainty product of the zero expansion");
    if (path == DyadicPath::spectral) {
        return make_report(s, position_spectral(e, s).value, energy_spectral(e, s).value, norm2 * norm2);
    }
    const StepFunction f = synthesize(e);
    return make_report(s, position_direct(f, s).value, energy_direct(f, s).value, norm2 * norm2);
}

UncertaintyReport euclid_uncertainty(const StepFunction& f, FormParameter s) {
    const double norm2 = f.norm_squared();
    if (std::abs(norm2 - 1.0) > 1e-10) throw InvalidParameter("Euclidean uncertainty needs ||f||_2 = 1");
    auto r = make_report(s, position_quadratic(f, s).value, energy_quadratic(f, s).value, norm2 * norm2);
    r.pass = r.product >= r.gamma_bound * (1.0 - slack_tolerance);
    return r;
}

WitnessRecord shifted_grid_witness(const StepFunction& f, FormParameter s, double epsilon, OriginMode mode) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
    if (f.is_zero()) throw InvalidParameter("witness needs a nonzero function");
    const auto cells = f.cells();
    const double length = f.cell_length();

    std::size_t pick = 0;
    while (cells[pick].v == 0.0) ++pick;
    if (mode == OriginMode::quantile) {
        double right = f.norm_squared();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (right >= 1.0 - epsilon) pick = i;
            right -= cells[i].v * cells[i].v * length;
        }
    }

    WitnessRecord w;
    w.x0 = DyadicRational(cells[pick].k, f.grid_level());
    const StepFunction shifted = f.restricted_and_shifted(w.x0);
    w.mass_captured = shifted.norm_squared();
    w.dyadic_position = position_direct(shifted, s).value;
    w.dyadic_energy = energy_direct(shifted, s).value;
    w.dyadic_product = w.dyadic_position * w.dyadic_energy;
    w.euclid_position = position_quadratic(f, s).value;
    w.euclid_energy = energy_quadratic(f, s).value;
    w.euclid_product = w.euclid_position * w.euclid_energy;
    w.bound = gamma(s) * (1.0 - epsilon) * (1.0 - epsilon);
    w.domination_holds = at_least(w.dyadic_product, w.bound) && at_least(w.euclid_position, w.dyadic_position) &&
                         at_least(w.euclid_energy, w.dyadic_energy) && at_least(w.euclid_product, w.bound);
    return w;
}

void validate(const SweepConfig& config) {
    for (double s : config.s_grid) {
        if (!(s >= 0.01 && s <= 0.49)) throw InvalidParameter("sweep s values must lie in [0.01, 0.49]");
    }
    if (config.trials < 0) throw InvalidParameter("trial count must be non-negative");
    if (config.max_coefficients < 1) throw InvalidParameter("max coefficients must be at least 1");
    if (config.level_min > config.level_max) throw InvalidParameter("empty level range");
    if (config.level_max - config.level_min > 40) throw InvalidParameter("level range too wide");
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

HaarExpansion random_wave_function(std::uint64_t seed, const SweepConfig& config) {
    validate(config);
    std::mt19937_64 rng(seed);
    const auto levels = std::uint64_t(config.level_max - config.level_min + 1);
    const auto draw_interval = [&] {
        const int j = config.level_min + int(below(rng, levels));
        const auto k = std::int64_t(below(rng, std::uint64_t(1) << (j - config.level_min + 1)));
        return DyadicInterval(j, k);
    };
    HaarExpansion e;
    if (config.single_haar) {
        e.set(draw_interval(), 1.0);
        return e;
    }
    // There are 2^(levels+1) - 2 admissible intervals.
    const std::uint64_t available = levels >= 62 ? UINT64_MAX : (std::uint64_t(2) << levels) - 2;
    const auto count = std::min(available, 1 + below(rng, std::uint64_t(config.max_coefficients)));
    std::set<DyadicInterval> used;
    while (used.size() < count) {
        const auto interval = draw_interval();
        if (!used.insert(interval).second) continue;
        double c = 0.0;
        while (c == 0.0) c = symmetric(rng);
        e.set(interval, c);
    }
    return e.scaled(1.0 / std::sqrt(e.norm_squared()));
}

StepFunction random_step_function(std::uint64_t seed, const StepConfig& config) {
    std::mt19937_64 rng(seed);
    const int level = config.level_min + int(below(rng, std::uint64_t(config.level_max - config.level_min + 1)));
    const auto start = std::int64_t(below(rng, std::uint64_t(config.max_start)));
    const auto count = 1 + std::int64_t(below(rng, std::uint64_t(config.max_cells)));
    std::vector<Cell> cells;
    for (std::int64_t i = 0; i < count; ++i) {
        const bool hole = i > 0 && i + 1 < count && below(rng, 8) == 0;
        const double v = hole ? 0.0 : symmetric(rng);
        cells.push_back({start + i, v});
    }
    if (cells.front().v == 0.0) cells.front().v = 1.0;
    StepFunction f(level, std::move(cells));
    return f.scaled(1.0 / std::sqrt(f.norm_squared()));
}

SweepResult sweep(const SweepConfig& config, DyadicPath path) {
    validate(config);
    std::vector<HaarExpansion> functions;
    functions.reserve(std::size_t(config.trials));
    for (int t = 0; t < config.trials; ++t) functions.push_back(random_wave_function(trial_seed(config.seed, t), config));

    SweepResult out;
    for (double s : config.s_grid) {
        SweepRow row;
        row.s = s;
        row.gamma = gamma(s);
        row.trials = config.trials;
        for (const auto& e : functions) {
            const auto r = dyadic_uncertainty(e, s, path);
            row.min_product = row.min_product ? std::min(*row.min_product, r.product) : r.product;
            row.min_slack = row.min_slack ? std::min(*row.min_slack, r.slack) : r.slack;
            row.passes += r.pass ? 1 : 0;
            out.reports.push_back(r);
        }
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace dyfrac
