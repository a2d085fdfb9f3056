#ifndef DYFRAC_HAAR_HPP
#define DYFRAC_HAAR_HPP

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dyfrac/dyadic.hpp"

namespace dyfrac {

struct Cell {
    std::int64_t k;  // offset at the grid level
    double v;        // value on (k 2^-J, (k+1) 2^-J]

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// A function on (0, inf) that is constant on the cells of level J.
/// Cells are stored with strictly increasing offsets; omitted cells are 0.
class StepFunction {
public:
    StepFunction() = default;
    StepFunction(int grid_level, std::vector<Cell> cells);

    int grid_level() const { return grid_level_; }
    double cell_length() const;
    std::span<const Cell> cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }
    bool is_zero() const;

    DyadicInterval cell_interval(std::size_t i) const { return {grid_level_, cells_[i].k}; }

    /// Smallest dyadic interval containing every stored cell.
    DyadicInterval root() const;

    double norm_squared() const;
    double value_at(double x) const;

    /// Same function on a finer grid.
    StepFunction refined(int level) const;
    /// f(x - n 2^-J) for n cells; the result must stay on (0, inf).
    StepFunction translated(std::int64_t cells) const;
    /// f(x / 2^m).
    StepFunction dilated(int m) const;
    StepFunction scaled(double factor) const;
    StepFunction absolute() const;

    /// Restriction to (x0, inf), re-expressed on the grid with origin x0.
    /// The grid is refined, if needed, so that x0 is a grid point.
    StepFunction restricted_and_shifted(const DyadicRational& x0) const;

private:
    int grid_level_ = 0;
    std::vector<Cell> cells_;
};

/// a f + b g on the common refinement.
StepFunction linear_combination(double a, const StepFunction& f, double b, const StepFunction& g);

/// Both functions refined to the finer of their two grids.
std::pair<StepFunction, StepFunction> on_common_grid(const StepFunction& f, const StepFunction& g);

/// 2^(j/2), computed exactly up to one rounding of sqrt(2).
double haar_amplitude(int level);

/// h_I(x) = 2^(j/2) on the left half of I, -2^(j/2) on the right half.
double haar_eval(const DyadicInterval& interval, double x);

/// h_I as a step function on grid level j + 1.
StepFunction haar_step(const DyadicInterval& interval);

/// Finite Haar expansion, keyed by (level, offset) in ascending order.
class HaarExpansion {
public:
    using Map = std::map<DyadicInterval, double>;

    HaarExpansion() = default;
    explicit HaarExpansion(Map coefficients) : coefficients_(std::move(coefficients)) {}

    void set(const DyadicInterval& interval, double c) { coefficients_[interval] = c; }
    double coefficient(const DyadicInterval& interval) const;

    const Map& coefficients() const { return coefficients_; }
    std::size_t size() const { return coefficients_.size(); }
    bool empty() const { return coefficients_.empty(); }

    double norm_squared() const;
    HaarExpansion scaled(double factor) const;
    /// Drops coefficients with |c| <= tolerance.
    HaarExpansion pruned(double tolerance) const;

private:
    Map coefficients_;
};

/// sum c_I h_I on grid level (finest level in e) + 1.
StepFunction synthesize(const HaarExpansion& expansion);

struct HaarAnalysis {
    HaarExpansion expansion;
    double residual_norm = 0.0;  // sqrt(||f||^2 - sum c^2), clamped at 0
};

/// <f, h_I> for all I with level in [level_min, level_max] meeting the
/// support of f. Levels at or below the grid resolution carry zero
/// coefficients and are not stored.
HaarAnalysis analyze(const StepFunction& f, int level_min, int level_max);

double inner_product(const StepFunction& f, const StepFunction& g);

}  // namespace dyfrac

#endif  // DYFRAC_HAAR_HPP
