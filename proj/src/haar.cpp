#include "dyfrac/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dyfrac {

namespace {

constexpr std::int64_t max_synthesized_cells = std::int64_t(1) << 24;

std::vector<Cell> refine_cells(std::span<const Cell> cells, int by) {
    if (by == 0) return {cells.begin(), cells.end()};
    if (by < 0 || by > 24) throw std::invalid_argument("refinement depth out of range");
    const std::int64_t factor = std::int64_t(1) << by;
    std::vector<Cell> out;
    out.reserve(cells.size() * std::size_t(factor));
    for (const auto& c : cells) {
        if (c.k > (INT64_MAX >> by) - 1) throw std::overflow_error("refined offset exceeds 63 bits");
        for (std::int64_t i = 0; i < factor; ++i) out.push_back({c.k * factor + i, c.v});
    }
    return out;
}

}  // namespace

StepFunction::StepFunction(int grid_level, std::vector<Cell> cells)
    : grid_level_(grid_level), cells_(std::move(cells)) {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i].k < 0) throw std::invalid_argument("step function offsets must be non-negative");
        if (!std::isfinite(cells_[i].v)) throw std::invalid_argument("step function values must be finite");
        if (i > 0 && cells_[i].k <= cells_[i - 1].k) {
            throw std::invalid_argument("step function offsets must be strictly increasing");
        }
    }
}

double StepFunction::cell_length() const { return std::ldexp(1.0, -grid_level_); }

bool StepFunction::is_zero() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Cell& c) { return c.v == 0.0; });
}

DyadicInterval StepFunction::root() const {
    if (cells_.empty()) return {grid_level_, 0};
    return common_ancestor(cell_interval(0), cell_interval(cells_.size() - 1));
}

double StepFunction::norm_squared() const {
    double sum = 0.0;
    for (const auto& c : cells_) sum += c.v * c.v;
    return sum * cell_length();
}

double StepFunction::value_at(double x) const {
    if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
    std::int64_t k = 0;
    try {
        k = DyadicRational::from_double(x).cell_index(grid_level_);
    } catch (const std::overflow_error&) {
        return 0.0;
    }
    const auto it = std::lower_bound(cells_.begin(), cells_.end(), k,
                                     [](const Cell& c, std::int64_t key) { return c.k < key; });
    return (it != cells_.end() && it->k == k) ? it->v : 0.0;
}

StepFunction StepFunction::refined(int level) const {
    if (level < grid_level_) throw std::invalid_argument("cannot refine to a coarser grid");
    return {level, refine_cells(cells_, level - grid_level_)};
}

StepFunction StepFunction::translated(std::int64_t n) const {
    std::vector<Cell> out(cells_);
    for (auto& c : out) c.k += n;
    return {grid_level_, std::move(out)};
}

StepFunction StepFunction::dilated(int m) const { return {grid_level_ - m, cells_}; }

StepFunction StepFunction::scaled(double factor) const {
    std::vector<Cell> out(cells_);
    for (auto& c : out) c.v *= factor;
    return {grid_level_, std::move(out)};
}

StepFunction StepFunction::absolute() const {
    std::vector<Cell> out(cells_);
    for (auto& c : out) c.v = std::abs(c.v);
    return {grid_level_, std::move(out)};
}

StepFunction StepFunction::restricted_and_shifted(const DyadicRational& x0) const {
    const int level = std::max(grid_level_, x0.exponent());
    const StepFunction fine = refined(level);
    // x0 2^level is an integer at this level.
    const int shift = level - x0.exponent();
    if (shift > 62) throw std::overflow_error("origin offset exceeds 63 bits");
    const std::int64_t k0 = x0.numerator() * (std::int64_t(1) << shift);
    std::vector<Cell> out;
    for (const auto& c : fine.cells_) {
        if (c.k >= k0) out.push_back({c.k - k0, c.v});
    }
    return {level, std::move(out)};
}

std::pair<StepFunction, StepFunction> on_common_grid(const StepFunction& f, const StepFunction& g) {
    const int level = std::max(f.grid_level(), g.grid_level());
    return {f.refined(level), g.refined(level)};
}

StepFunction linear_combination(double a, const StepFunction& f, double b, const StepFunction& g) {
    const auto [ff, gg] = on_common_grid(f, g);
    const auto fc = ff.cells();
    const auto gc = gg.cells();
    std::vector<Cell> out;
    std::size_t i = 0, j = 0;
    while (i < fc.size() || j < gc.size()) {
        if (j == gc.size() || (i < fc.size() && fc[i].k < gc[j].k)) {
            out.push_back({fc[i].k, a * fc[i].v});
            ++i;
        } else if (i == fc.size() || gc[j].k < fc[i].k) {
            out.push_back({gc[j].k, b * gc[j].v});
            ++j;
        } else {
            out.push_back({fc[i].k, a * fc[i].v + b * gc[j].v});
            ++i;
            ++j;
        }
    }
    return {ff.grid_level(), std::move(out)};
}

double haar_amplitude(int level) {
    if (level % 2 == 0) return std::ldexp(1.0, level / 2);
    return std::ldexp(std::numbers::sqrt2, (level - 1) / 2);
}

double haar_eval(const DyadicInterval& interval, double x) {
    if (contains(interval.left_half(), x)) return haar_amplitude(interval.level);
    if (contains(interval.right_half(), x)) return -haar_amplitude(interval.level);
    return 0.0;
}

StepFunction haar_step(const DyadicInterval& interval) {
    const double a = haar_amplitude(interval.level);
    return {interval.level + 1, {{2 * interval.offset, a}, {2 * interval.offset + 1, -a}}};
}

double HaarExpansion::coefficient(const DyadicInterval& interval) const {
    const auto it = coefficients_.find(interval);
    return it == coefficients_.end() ? 0.0 : it->second;
}

double HaarExpansion::norm_squared() const {
    double sum = 0.0;
    for (const auto& [interval, c] : coefficients_) sum += c * c;
    return sum;
}

HaarExpansion HaarExpansion::scaled(double factor) const {
    Map out;
    for (const auto& [interval, c] : coefficients_) out.emplace(interval, factor * c);
    return HaarExpansion(std::move(out));
}

HaarExpansion HaarExpansion::pruned(double tolerance) const {
    Map out;
    for (const auto& [interval, c] : coefficients_) {
        if (std::abs(c) > tolerance) out.emplace(interval, c);
    }
    return HaarExpansion(std::move(out));
}

StepFunction synthesize(const HaarExpansion& expansion) {
    if (expansion.empty()) return {};
    int finest = INT32_MIN;
    for (const auto& [interval, c] : expansion.coefficients()) finest = std::max(finest, interval.level);
    const int level = finest + 1;

    struct Piece {
        std::int64_t begin, mid, end;
        double amplitude;
    };
    std::vector<Piece> pieces;
    std::vector<std::int64_t> breaks;
    for (const auto& [interval, c] : expansion.coefficients()) {
        const int depth = level - interval.level;
        if (depth > 62 || interval.offset > (INT64_MAX >> depth) - 1) {
            throw std::overflow_error("synthesized grid offsets exceed 63 bits");
        }
        const std::int64_t span = std::int64_t(1) << depth;
        const std::int64_t begin = interval.offset * span;
        pieces.push_back({begin, begin + span / 2, begin + span, c * haar_amplitude(interval.level)});
        breaks.insert(breaks.end(), {begin, begin + span / 2, begin + span});
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<Cell> cells;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const std::int64_t lo = breaks[b];
        const std::int64_t hi = breaks[b + 1];
        bool covered = false;
        double value = 0.0;
        for (const auto& p : pieces) {
            if (lo >= p.begin && lo < p.end) {
                covered = true;
                value += lo < p.mid ? p.amplitude : -p.amplitude;
            }
        }
        if (!covered) continue;
        if (std::int64_t(cells.size()) + (hi - lo) > max_synthesized_cells) {
            throw std::length_error("expansion spans too many grid cells to synthesize");
        }
        for (std::int64_t k = lo; k < hi; ++k) cells.push_back({k, value});
    }
    return {level, std::move(cells)};
}

HaarAnalysis analyze(const StepFunction& f, int level_min, int level_max) {
    if (level_min > level_max) throw std::invalid_argument("empty level range");
    if (f.grid_level() - level_min > 4096) throw std::invalid_argument("level range too deep");

    struct Node {
        std::int64_t k;
        double mass;  // integral of f over the node
    };
    std::vector<Node> nodes;
    nodes.reserve(f.cells().size());
    const double length = f.cell_length();
    for (const auto& c : f.cells()) nodes.push_back({c.k, c.v * length});

    HaarExpansion::Map coefficients;
    for (int level = f.grid_level(); level > level_min && !nodes.empty(); --level) {
        const int parent = level - 1;
        const bool record = parent <= level_max;
        const double amplitude = haar_amplitude(parent);
        std::vector<Node> parents;
        for (std::size_t i = 0; i < nodes.size();) {
            const std::int64_t pk = nodes[i].k >> 1;
            double left = 0.0, right = 0.0;
            while (i < nodes.size() && (nodes[i].k >> 1) == pk) {
                ((nodes[i].k & 1) ? right : left) += nodes[i].mass;
                ++i;
            }
            parents.push_back({pk, left + right});
            if (record) coefficients.emplace(DyadicInterval(parent, pk), amplitude * (left - right));
        }
        nodes = std::move(parents);
    }

    HaarExpansion expansion(std::move(coefficients));
    const double residual2 = f.norm_squared() - expansion.norm_squared();
    return {std::move(expansion), std::sqrt(std::max(0.0, residual2))};
}

double inner_product(const StepFunction& f, const StepFunction& g) {
    const auto [ff, gg] = on_common_grid(f, g);
    const auto fc = ff.cells();
    const auto gc = gg.cells();
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < fc.size() && j < gc.size()) {
        if (fc[i].k < gc[j].k) {
            ++i;
        } else if (gc[j].k < fc[i].k) {
            ++j;
        } else {
            sum += fc[i].v * gc[j].v;
            ++i;
            ++j;
        }
    }
    return sum * ff.cell_length();
}

}  // namespace dyfrac
