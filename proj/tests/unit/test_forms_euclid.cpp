#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "dyfrac/errors.hpp"
#include "dyfrac/forms_euclid.hpp"
#include "dyfrac/oracle.hpp"
#include "dyfrac/uncertainty.hpp"
#include "support.hpp"

using namespace dyfrac;
using testing::rel;

namespace {

const double s_grid[] = {0.05, 0.15, 0.25, 0.35, 0.45};

// Four-term antiderivative difference in long double.
long double ld_rect(long double p, long double a, long double b, long double c, long double d) {
    const auto F = [p](long double t) { return t <= 0 ? 0.0L : std::pow(t, p + 2) / ((p + 1) * (p + 2)); };
    if (a == c && b == d) return 2.0L * std::pow(b - a, p + 2) / ((p + 1) * (p + 2));
    if (c < a) {
        std::swap(a, c);
        std::swap(b, d);
    }
    return F(d - a) - F(d - b) - F(c - a) + F(c - b);
}

// int_a^b int_{y > R} (y - x)^(-1-2s) dy dx, and its mirror on the left.
long double ld_right_ray(long double s, long double a, long double b, long double R) {
    const long double q = 1 - 2 * s;
    return (std::pow(R - a, q) - std::pow(R - b, q)) / (2 * s * q);
}

struct Reference {
    double position;
    double energy;
};

Reference reference_forms(const StepFunction& f, double s) {
    const long double L = f.cell_length();
    const auto cells = f.cells();
    Reference r{0.0, 0.0};
    if (cells.empty()) return r;
    long double q = 0.0L;
    for (const auto& x : cells) {
        for (const auto& y : cells) {
            q += std::abs((long double)x.v * y.v) * ld_rect(2 * s - 1, x.k * L, (x.k + 1) * L, y.k * L, (y.k + 1) * L);
        }
    }
    const std::int64_t lo = cells.front().k, hi = cells.back().k;
    std::vector<long double> v(std::size_t(hi - lo + 1), 0.0L);
    for (const auto& c : cells) v[std::size_t(c.k - lo)] = c.v;
    long double e = 0.0L;
    const long double left = lo * L, right = (hi + 1) * L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const long double a = (lo + std::int64_t(i)) * L, b = a + L;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (i == j) continue;
            const long double c = (lo + std::int64_t(j)) * L;
            e += (v[i] - v[j]) * (v[i] - v[j]) * ld_rect(-1 - 2 * s, a, b, c, c + L);
        }
        e += 2.0L * v[i] * v[i] * (ld_right_ray(s, a, b, right) + ld_right_ray(s, right - b, right - a, right - left));
    }
    r.position = double(q);
    r.energy = double(e);
    return r;
}

}  // namespace

TEST_CASE("rectangle integral examples") {
    CHECK(rel(kernel_rect_integral({-0.5}, 0, 1, 0, 1), 8.0 / 3.0) < 1e-15);
    CHECK(rel(kernel_rect_integral({0.0}, 0, 1, 2, 3), 1.0) < 1e-15);
    CHECK(rel(kernel_rect_integral({-1.5}, 0, 1, 1, 2), 8.0 - 4.0 * std::sqrt(2.0)) < 1e-14);
    CHECK(kernel_rect_integral({-1.5}, 1, 2, 0, 1) == kernel_rect_integral({-1.5}, 0, 1, 1, 2));
}

TEST_CASE("rectangle integral rejects invalid configurations") {
    CHECK_THROWS_AS(kernel_rect_integral({-0.5}, 0, 1, 0.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(kernel_rect_integral({-1.5}, 0, 1, 0, 1), DivergentIntegral);
    CHECK_THROWS_AS(kernel_rect_integral({-2.0}, 0, 1, 1, 2), DivergentIntegral);
    CHECK_THROWS_AS(kernel_rect_integral({-1.0}, 0, 1, 3, 4), InvalidParameter);
    CHECK_THROWS_AS(kernel_rect_integral({-0.5}, 1, 0, 2, 3), std::invalid_argument);
}

TEST_CASE("rectangle integral matches long double reference across the series switch") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 2000; ++t) {
        const double s = 0.02 + 0.46 * double(rng() >> 11) * 0x1.0p-53;
        const double p = t % 2 ? 2 * s - 1 : -1 - 2 * s;
        const double l1 = std::ldexp(1.0, -int(rng() % 4)), l2 = std::ldexp(1.0, -int(rng() % 4));
        const double gap = (t % 3 == 0) ? 0.0 : std::ldexp(double(1 + rng() % 64), -int(rng() % 3));
        const double a = std::ldexp(double(rng() % 16), -2), b = a + l1, c = b + gap, d = c + l2;
        const double got = kernel_rect_integral({p}, a, b, c, d);
        const long double want = ld_rect(p, a, b, c, d);
        // long double reference loses digits to cancellation when far apart
        const double far = std::max(1.0, gap / (l1 + l2));
        REQUIRE(rel(got, double(want)) < 1e-13 * far * far);
    }
}

TEST_CASE("position form examples") {
    const auto h = haar_step({0, 0});
    CHECK(rel(position_quadratic(h, 0.25).value, 8.0 / 3.0) < 1e-14);
    CHECK(rel(position_quadratic(haar_step({1, 1}), 0.25).value, 8.0 / 3.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(rel(position_quadratic(haar_step({1, 1}), 0.25).value, 1.8856180832) < 1e-10);
    CHECK(position_quadratic(StepFunction{}, 0.25).value == 0.0);
    CHECK(position_quadratic(h, 0.25).error_bound == 0.0);
}

TEST_CASE("energy form examples") {
    const auto h = haar_step({0, 0});
    const double e = energy_quadratic(h, 0.25).value;
    CHECK(rel(e, haar_energy_euclid_exact({0, 0}, 0.25)) < 1e-12);
    CHECK(rel(e, 16.0 * (2.0 * std::sqrt(2.0) - 1.0)) < 1e-12);

    // one cell of height f and length l: 4 f^2 l^(1-2s) / (2s(1-2s))
    for (double s : s_grid) {
        const double b1 = 1.0 / (2.0 * s * (1.0 - 2.0 * s));
        CHECK(rel(energy_quadratic(StepFunction(0, {{3, 2.0}}), s).value, 4.0 * 4.0 * b1) < 1e-12);
        CHECK(rel(energy_quadratic(StepFunction(2, {{1, 1.0}}), s).value, 4.0 * b1 * std::pow(0.25, 1.0 - 2.0 * s)) < 1e-12);
    }
    CHECK(rel(energy_quadratic(StepFunction(0, {{0, 1.0}}), 0.25).value, 16.0) < 1e-13);
    CHECK(energy_quadratic(StepFunction{}, 0.25).value == 0.0);
}

TEST_CASE("published haar closed forms") {
    CHECK(haar_position_euclid_closed({0, 0}, 0.25) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(rel(haar_position_euclid_closed({0, 0}, 0.1), 1.0 / 0.12) < 1e-15);
    CHECK(rel(haar_energy_euclid_closed({0, 0}, 0.25), 48.0) < 1e-15);
    CHECK(rel(haar_energy_euclid_closed({-2, 0}, 0.25), 24.0) < 1e-15);
    CHECK(rel(haar_product_euclid_closed(0.25), 128.0) < 1e-15);
    for (double s : s_grid) {
        for (int j = -3; j <= 3; ++j) {
            CHECK(rel(haar_position_euclid_closed({j, 0}, s) * haar_energy_euclid_closed({j, 0}, s),
                      haar_product_euclid_closed(s)) < 1e-14);
            CHECK(rel(haar_position_euclid_closed({j, 0}, s) * haar_energy_euclid_exact({j, 0}, s),
                      haar_product_euclid_exact(s)) < 1e-14);
        }
    }
}

TEST_CASE("haar position reproduces the closed form") {
    for (double s : s_grid) {
        for (int j = -3; j <= 3; ++j) {
            const DyadicInterval I(j, 3);
            CHECK(rel(position_quadratic(haar_step(I), s).value, haar_position_euclid_closed(I, s)) < 1e-10);
        }
    }
}

TEST_CASE("haar energy from the integral") {
    // The evaluated energy is 2(2^(2s+1)-1)|I|^(-2s)/(s(1-2s)), confirmed below
    // by an independent long double sum and by adaptive quadrature. It differs
    // from the constant-6 form except in the limit s -> 1/2.
    for (double s : s_grid) {
        for (int j = -3; j <= 3; ++j) {
            const DyadicInterval I(j, 3);
            const auto h = haar_step(I);
            const double e = energy_quadratic(h, s).value;
            CHECK(rel(e, haar_energy_euclid_exact(I, s)) < 1e-10);
            CHECK(rel(e, reference_forms(h, s).energy) < 1e-12);
            CHECK(std::abs(e - haar_energy_euclid_closed(I, s)) > 1e-3 * e);
        }
        CHECK(rel(energy_quadratic(haar_step({0, 0}), s).value,
                  euclid_adaptive_oracle(haar_step({0, 0}), FormKind::energy, s).value) < 1e-8);
    }
    const double near_half = 0.4999;
    CHECK(rel(haar_energy_euclid_exact({0, 0}, near_half), haar_energy_euclid_closed({0, 0}, near_half)) < 1e-3);
}

TEST_CASE("forms match long double reference on random step functions") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 300; ++t) {
        const auto f = testing::random_cells(rng, int(rng() % 5) - 2, 1 + int(rng() % 12), 1 + std::int64_t(rng() % 3));
        const double s = s_grid[t % 5];
        const auto ref = reference_forms(f, s);
        REQUIRE(rel(position_quadratic(f, s).value, ref.position) < 1e-11);
        REQUIRE(rel(energy_quadratic(f, s).value, ref.energy) < 1e-11);
    }
}

TEST_CASE("forms match the adaptive oracle on 100 random step functions") {
    for (int t = 0; t < 100; ++t) {
        const auto f = random_step_function(trial_seed(43, std::uint64_t(t)));
        const double s = s_grid[t % 5];
        REQUIRE(rel(position_quadratic(f, s).value, euclid_adaptive_oracle(f, FormKind::position, s).value) < 1e-6);
        REQUIRE(rel(energy_quadratic(f, s).value, euclid_adaptive_oracle(f, FormKind::energy, s).value) < 1e-6);
    }
}

TEST_CASE("translation invariance") {
    for (int t = 0; t < 100; ++t) {
        const auto f = random_step_function(trial_seed(44, std::uint64_t(t)));
        const double s = s_grid[t % 5];
        const double q = position_quadratic(f, s).value, e = energy_quadratic(f, s).value;
        for (std::int64_t n : {1, 17, 1000}) {
            const auto g = f.translated(n);
            CHECK(rel(position_quadratic(g, s).value, q) < 1e-12);
            CHECK(rel(energy_quadratic(g, s).value, e) < 1e-12);
        }
        // shift by a dyadic rational finer than the grid
        const auto g = f.refined(f.grid_level() + 3).translated(5);
        CHECK(rel(position_quadratic(g, s).value, q) < 1e-12);
        CHECK(rel(energy_quadratic(g, s).value, e) < 1e-12);
    }
}

TEST_CASE("scaling law") {
    // f(x / lambda): Q scales by lambda^(2s+1), E by lambda^(1-2s)
    for (int t = 0; t < 50; ++t) {
        const auto f = random_step_function(trial_seed(45, std::uint64_t(t)));
        const double s = s_grid[t % 5];
        const double q = position_quadratic(f, s).value, e = energy_quadratic(f, s).value;
        for (int m : {-3, -1, 2, 4}) {
            const double lambda = std::ldexp(1.0, m);
            const auto g = f.dilated(m);
            CHECK(rel(position_quadratic(g, s).value, q * std::pow(lambda, 2.0 * s + 1.0)) < 1e-10);
            CHECK(rel(energy_quadratic(g, s).value, e * std::pow(lambda, 1.0 - 2.0 * s)) < 1e-10);
        }
    }
}

TEST_CASE("euclidean forms dominate shifted dyadic forms") {
    for (int t = 0; t < 200; ++t) {
        const auto f = random_step_function(trial_seed(46, std::uint64_t(t)));
        const double s = s_grid[t % 5];
        for (double x0 : {0.0, -0.375, -3.0}) {
            const auto g = f.restricted_and_shifted(DyadicRational::from_double(x0));
            // on the shifted grid the distance is delta_{x0}; Euclidean forms are translation invariant
            CHECK(position_quadratic(f, s).value >= position_direct(g.absolute(), s).value * (1 - 1e-12));
            CHECK(energy_quadratic(f, s).value >= energy_direct(g, s).value * (1 - 1e-12));
        }
    }
}

TEST_CASE("variance") {
    for (int j = -3; j <= 3; ++j) {
        const DyadicInterval I(j, 5);
        CHECK(rel(variance(haar_step(I)), I.measure() * I.measure() / 12.0) < 1e-12);
    }
    CHECK(rel(variance(StepFunction(0, {{0, 1.0}})), 1.0 / 12.0) < 1e-14);
    CHECK(rel(variance(StepFunction(0, {{4, 1.0}})), 1.0 / 12.0) < 1e-12);

    // symmetric about the midpoint of (1, 4]: mean 2.5, central moment by hand
    const StepFunction sym(0, {{1, 1.0}, {2, 0.5}, {3, -1.0}});
    const double norm = sym.norm_squared();
    double m2 = 0.0;
    for (const auto& c : sym.cells()) {
        const double a = double(c.k) - 2.5, b = a + 1.0;
        m2 += c.v * c.v * (b * b * b - a * a * a) / 3.0;
    }
    CHECK(rel(variance(sym), m2) < 1e-14);
    CHECK(norm == 2.25);
    CHECK_THROWS_AS(variance(StepFunction{}), InvalidParameter);
}

TEST_CASE("parameter edge rejection") {
    const auto h = haar_step({0, 0});
    CHECK_THROWS_AS(energy_quadratic(h, 0.4999995), InvalidParameter);
    CHECK_THROWS_AS(position_quadratic(h, 5e-7), InvalidParameter);
    CHECK_NOTHROW(energy_quadratic(h, 0.49999));
}
