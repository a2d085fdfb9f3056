#include "dyfrac/forms_dyadic.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "dyfrac/errors.hpp"

namespace dyfrac {

FormParameter::FormParameter(double s, ParameterRange recommended) : s_(s), range_(recommended) {
    if (!(s > 0.0 && s < 0.5)) throw InvalidParameter("form order s must lie in (0, 1/2)");
    recommended_ = s >= recommended.lo && s <= recommended.hi;
}

std::string FormParameter::warning() const {
    if (recommended_) return {};
    char text[96];
    std::snprintf(text, sizeof text, "s outside the recommended range [%g, %g]", range_.lo, range_.hi);
    return text;
}

const char* to_string(Method m) {
    switch (m) {
        case Method::direct: return "direct";
        case Method::spectral: return "spectral";
        case Method::oracle: return "oracle";
    }
    return "direct";
}

double gamma1(FormParameter s) {
    return std::expm1((1.0 - 2.0 * s) * std::log(2.0)) / (2.0 * one_minus_pow2(2.0 * s));
}

double gamma2(FormParameter s) {
    return (2.0 - std::exp2(-2.0 * s)) / one_minus_pow2(2.0 * s);
}

double haar_position_closed(const DyadicInterval& interval, FormParameter s) {
    return gamma1(s) * std::exp2(-2.0 * s * interval.level);
}

double haar_energy_closed(const DyadicInterval& interval, FormParameter s) {
    return gamma2(s) * std::exp2(2.0 * s * interval.level);
}

namespace {

// Per-node sums over the grid cells below it: F = sum f, G = sum g,
// P = sum f g.
struct Node {
    std::int64_t k;
    double f;
    double g;
    double fg;
};

struct MergedGrid {
    int level;
    std::vector<Node> cells;
};

MergedGrid merge(const StepFunction& f, const StepFunction& g) {
    const auto [ff, gg] = on_common_grid(f, g);
    const auto fc = ff.cells();
    const auto gc = gg.cells();
    std::vector<Node> out;
    std::size_t i = 0, j = 0;
    while (i < fc.size() || j < gc.size()) {
        if (j == gc.size() || (i < fc.size() && fc[i].k < gc[j].k)) {
            out.push_back({fc[i].k, fc[i].v, 0.0, 0.0});
            ++i;
        } else if (i == fc.size() || gc[j].k < fc[i].k) {
            out.push_back({gc[j].k, 0.0, gc[j].v, 0.0});
            ++j;
        } else {
            out.push_back({fc[i].k, fc[i].v, gc[j].v, fc[i].v * gc[j].v});
            ++i;
            ++j;
        }
    }
    return {ff.grid_level(), std::move(out)};
}

// Visits every ancestor-merge step. `pair_term(parent_measure, cells_per_child,
// left, right, has_left, has_right)` receives the sums of the two children.
template <typename PairTerm>
Node climb(MergedGrid grid, int& root_level, PairTerm&& pair_term) {
    auto nodes = std::move(grid.cells);
    int level = grid.level;
    while (nodes.size() > 1) {
        const double parent_measure = std::ldexp(1.0, -(level - 1));
        const double cells_per_child = std::ldexp(1.0, grid.level - level);
        std::vector<Node> parents;
        parents.reserve(nodes.size() / 2 + 1);
        for (std::size_t i = 0; i < nodes.size();) {
            const std::int64_t pk = nodes[i].k >> 1;
            Node left{0, 0.0, 0.0, 0.0}, right{0, 0.0, 0.0, 0.0};
            bool has_left = false, has_right = false;
            while (i < nodes.size() && (nodes[i].k >> 1) == pk) {
                if (nodes[i].k & 1) {
                    right = nodes[i];
                    has_right = true;
                } else {
                    left = nodes[i];
                    has_left = true;
                }
                ++i;
            }
            pair_term(parent_measure, cells_per_child, left, right, has_left, has_right);
            parents.push_back({pk, left.f + right.f, left.g + right.g, left.fg + right.fg});
        }
        nodes = std::move(parents);
        --level;
    }
    root_level = level;
    return nodes.empty() ? Node{0, 0.0, 0.0, 0.0} : nodes.front();
}

}  // namespace

FormEvaluation position_bilinear_direct(const StepFunction& f, const StepFunction& g, FormParameter s) {
    auto grid = merge(f, g);
    const double length = std::ldexp(1.0, -grid.level);
    const double exponent = 2.0 * s - 1.0;

    double cross = 0.0;
    int root_level = grid.level;
    const Node total = climb(std::move(grid), root_level,
                             [&](double r, double, const Node& l, const Node& rt, bool hl, bool hr) {
                                 if (hl && hr) cross += std::pow(r, exponent) * (l.f * rt.g + rt.f * l.g);
                             });
    // Self-interaction of one cell: |C| times the delta-ball integral over C.
    const double self = total.fg * length * integral_ball_power(2.0 * s, length);
    return {self + cross * length * length, Method::direct, 0.0, s.warning()};
}

FormEvaluation energy_bilinear_direct(const StepFunction& f, const StepFunction& g, FormParameter s) {
    auto grid = merge(f, g);
    const double length = std::ldexp(1.0, -grid.level);
    const double exponent = -1.0 - 2.0 * s;

    double cross = 0.0;
    int root_level = grid.level;
    const Node total = climb(std::move(grid), root_level,
                             [&](double r, double m, const Node& l, const Node& rt, bool, bool) {
                                 // sum over x in one child, y in the other, of
                                 // (f(x)-f(y))(g(x)-g(y)), both orderings.
                                 const double sum = m * (l.fg + rt.fg) - l.f * rt.g - rt.f * l.g;
                                 cross += 2.0 * std::pow(r, exponent) * sum;
                             });
    const double root_measure = std::ldexp(1.0, -root_level);
    // x in the root, y outside, and the mirrored pairs.
    const double tail = 2.0 * total.fg * length * integral_complement_power(2.0 * s, root_measure);
    return {cross * length * length + tail, Method::direct, 0.0, s.warning()};
}

FormEvaluation position_direct(const StepFunction& f, FormParameter s) {
    return position_bilinear_direct(f, f, s);
}

FormEvaluation energy_direct(const StepFunction& f, FormParameter s) {
    return energy_bilinear_direct(f, f, s);
}

FormEvaluation position_spectral(const HaarExpansion& e, FormParameter s) {
    double sum = 0.0;
    for (const auto& [interval, c] : e.coefficients()) sum += c * c * std::exp2(-2.0 * s * interval.level);
    return {gamma1(s) * sum, Method::spectral, 0.0, s.warning()};
}

FormEvaluation energy_spectral(const HaarExpansion& e, FormParameter s) {
    double sum = 0.0;
    for (const auto& [interval, c] : e.coefficients()) sum += c * c * std::exp2(2.0 * s * interval.level);
    return {gamma2(s) * sum, Method::spectral, 0.0, s.warning()};
}

}  // namespace dyfrac
