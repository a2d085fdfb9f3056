#ifndef DYFRAC_TESTS_SUPPORT_HPP
#define DYFRAC_TESTS_SUPPORT_HPP

// Reference implementations used only by the tests. They share no code with
// the library beyond the StepFunction container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dyfrac/haar.hpp"

namespace testing {

inline double rel(double value, double reference) {
    return reference == 0.0 ? std::abs(value) : std::abs(value - reference) / std::abs(reference);
}

// delta(x, y) by scanning levels from fine to coarse with ceil(x 2^j).
inline double brute_delta(double x, double y) {
    if (x == y) return 0.0;
    for (int j = 60; j > -64; --j) {
        if (std::ceil(std::ldexp(x, j)) == std::ceil(std::ldexp(y, j))) return std::ldexp(1.0, -j);
    }
    return INFINITY;
}

// Measure of the smallest common ancestor of two cells at level J.
inline double brute_cell_delta(int level, std::int64_t a, std::int64_t b) {
    int j = level;
    while (a != b) {
        a /= 2;
        b /= 2;
        --j;
    }
    return std::ldexp(1.0, -j);
}

// sum_{k >= 0} 2^-(k+1) L (2^-k L)^(alpha-1), summed until terms vanish.
inline long double ball_series(double alpha, double L) {
    long double sum = 0.0L;
    for (int k = 0; k < 20000; ++k) {
        const long double term = std::ldexp((long double)L, -(k + 1)) * std::pow(std::ldexp((long double)L, -k), (long double)alpha - 1.0L);
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    return sum;
}

// sum_{k >= 1} 2^(k-1) L (2^k L)^(-1-alpha).
inline long double complement_series(double alpha, double L) {
    long double sum = 0.0L;
    for (int k = 1; k < 20000; ++k) {
        const long double term = std::ldexp((long double)L, k - 1) * std::pow(std::ldexp((long double)L, k), -1.0L - alpha);
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    return sum;
}

// Dyadic position form by explicit summation over all ordered cell pairs.
inline double brute_dyadic_position(const dyfrac::StepFunction& f, const dyfrac::StepFunction& g, double s) {
    const auto [ff, gg] = dyfrac::on_common_grid(f, g);
    const double L = ff.cell_length();
    long double sum = 0.0L;
    for (const auto& a : ff.cells()) {
        for (const auto& b : gg.cells()) {
            if (a.k == b.k) {
                sum += (long double)a.v * b.v * L * ball_series(2.0 * s, L);
            } else {
                const double d = brute_cell_delta(ff.grid_level(), a.k, b.k);
                sum += (long double)a.v * b.v * L * L * std::pow((long double)d, 2.0L * s - 1.0L);
            }
        }
    }
    return double(sum);
}

// Dyadic energy form by explicit summation over the dense cells of the root
// interval plus the exterior shells.
inline double brute_dyadic_energy(const dyfrac::StepFunction& f, const dyfrac::StepFunction& g, double s) {
    const auto [ff, gg] = dyfrac::on_common_grid(f, g);
    if (ff.empty() && gg.empty()) return 0.0;
    const int J = ff.grid_level();
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto* h : {&ff, &gg}) {
        for (const auto& c : h->cells()) {
            lo = std::min(lo, c.k);
            hi = std::max(hi, c.k);
        }
    }
    // common root of all cells
    int root = J;
    std::int64_t a = lo, b = hi;
    while (a != b) {
        a /= 2;
        b /= 2;
        --root;
    }
    const std::int64_t first = a << (J - root);
    const std::int64_t count = std::int64_t(1) << (J - root);
    const auto value = [](const dyfrac::StepFunction& h, std::int64_t k) {
        for (const auto& c : h.cells()) {
            if (c.k == k) return c.v;
        }
        return 0.0;
    };
    const double L = ff.cell_length();
    long double sum = 0.0L;
    const auto n = std::size_t(count);
    std::vector<double> fv(n), gv(n);
    for (std::size_t i = 0; i < n; ++i) {
        fv[i] = value(ff, first + std::int64_t(i));
        gv[i] = value(gg, first + std::int64_t(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = brute_cell_delta(J, first + std::int64_t(i), first + std::int64_t(j));
            sum += (long double)(fv[i] - fv[j]) * (gv[i] - gv[j]) * L * L * std::pow((long double)d, -1.0L - 2.0L * s);
        }
        sum += 2.0L * fv[i] * gv[i] * L * complement_series(2.0 * s, std::ldexp(1.0, -root));
    }
    return double(sum);
}

inline dyfrac::StepFunction random_cells(std::mt19937_64& rng, int level, int count, std::int64_t span) {
    std::vector<dyfrac::Cell> cells;
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::int64_t k = std::int64_t(rng() % 8);
    for (int i = 0; i < count; ++i) {
        cells.push_back({k, value(rng)});
        k += 1 + std::int64_t(rng() % std::uint64_t(span));
    }
    return {level, std::move(cells)};
}

}  // namespace testing

#endif  // DYFRAC_TESTS_SUPPORT_HPP
