#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "dyfrac/errors.hpp"
#include "dyfrac/forms_euclid.hpp"
#include "dyfrac/uncertainty.hpp"
#include "support.hpp"

using namespace dyfrac;
using testing::rel;

namespace {

const double sqrt2 = std::sqrt(2.0);
const double s_grid[] = {0.05, 0.15, 0.25, 0.35, 0.45};

HaarExpansion single(DyadicInterval I, double c = 1.0) {
    HaarExpansion e;
    e.set(I, c);
    return e;
}

HaarExpansion two_level() {
    HaarExpansion e;
    e.set({0, 0}, 1.0 / sqrt2);
    e.set({1, 0}, 1.0 / sqrt2);
    return e;
}

bool same_report(const UncertaintyReport& a, const UncertaintyReport& b) {
    return std::memcmp(&a.product, &b.product, sizeof(double)) == 0 &&
           std::memcmp(&a.slack, &b.slack, sizeof(double)) == 0 && a.pass == b.pass;
}

}  // namespace

TEST_CASE("gamma values") {
    CHECK(rel(dyfrac::gamma(0.25), 1.0 + 1.5 * sqrt2) < 1e-15);
    CHECK(rel(dyfrac::gamma(0.49), 0.0429) < 2e-3);
    CHECK(rel(dyfrac::gamma(0.01), 2600.0) < 1e-3);
    CHECK(dyfrac::gamma(0.01) > 1e3);
    CHECK(dyfrac::gamma(0.49) < 0.05);
    double previous = INFINITY;
    for (int i = 0; i <= 480; ++i) {
        const double s = 0.01 + 0.001 * i;
        const double g = dyfrac::gamma(s);
        CHECK(g < previous);
        previous = g;
    }
    CHECK_THROWS_AS(dyfrac::gamma(0.5), InvalidParameter);
}

TEST_CASE("dyadic examples") {
    const auto h = dyadic_uncertainty(single({0, 0}), 0.25);
    CHECK(rel(h.product, dyfrac::gamma(0.25)) < 1e-15);
    CHECK(std::abs(h.slack) <= 1e-12 * h.product);
    CHECK(h.pass);

    const auto r = dyadic_uncertainty(two_level(), 0.25);
    CHECK(rel(r.position, 0.60355339) < 1e-8);
    CHECK(rel(r.energy, 5.32842712) < 1e-8);
    CHECK(rel(r.product, 3.2160) < 1e-4);
    CHECK(r.slack > 0.0);
    CHECK(r.pass);
    CHECK(rel(r.norm_fourth, 1.0) < 1e-15);

    const auto r2 = dyadic_uncertainty(two_level().scaled(2.0), 0.25);
    CHECK(rel(r2.product, 16.0 * r.product) < 1e-14);
    CHECK(rel(r2.slack, 16.0 * r.slack) < 1e-12);
    CHECK(rel(r2.norm_fourth, 16.0) < 1e-14);
    CHECK(r2.pass == r.pass);

    CHECK_THROWS_AS(dyadic_uncertainty(HaarExpansion{}, 0.25), InvalidParameter);
    const auto d = dyadic_uncertainty(two_level(), 0.25, DyadicPath::direct);
    CHECK(rel(d.product, r.product) < 1e-12);
}

TEST_CASE("inequality on seeded expansions, both paths") {
    SweepConfig config;
    for (double s : s_grid) {
        for (int t = 0; t < 200; ++t) {
            const auto e = random_wave_function(trial_seed(61, std::uint64_t(t)), config);
            const auto a = dyadic_uncertainty(e, s, DyadicPath::spectral);
            const auto b = dyadic_uncertainty(e, s, DyadicPath::direct);
            REQUIRE(a.pass);
            REQUIRE(b.pass);
            REQUIRE(a.slack >= -1e-12 * a.product);
            REQUIRE(b.slack >= -1e-12 * b.product);
        }
    }
}

TEST_CASE("equality on single haar functions") {
    for (double s : s_grid) {
        for (int j = -4; j <= 6; ++j) {
            for (double c : {1.0, -0.3, 7.0}) {
                const auto r = dyadic_uncertainty(single({j, 3}, c), s);
                CHECK(std::abs(r.slack) <= 1e-12 * r.product);
                const auto d = dyadic_uncertainty(single({j, 3}, c), s, DyadicPath::direct);
                CHECK(std::abs(d.slack) <= 1e-12 * d.product);
            }
        }
    }
}

TEST_CASE("slack vanishes exactly when all mass sits at one scale") {
    for (double s : s_grid) {
        HaarExpansion same;
        same.set({2, 0}, 0.3);
        same.set({2, 5}, -1.1);
        same.set({2, 9}, 0.7);
        const auto a = dyadic_uncertainty(same, s);
        CHECK(std::abs(a.slack) <= 1e-12 * a.product);

        HaarExpansion mixed = same;
        mixed.set({1, 0}, 0.2);
        const auto b = dyadic_uncertainty(mixed, s);
        CHECK(b.slack > 1e-6 * b.product);

        // Cauchy-Schwarz slack for two scales, computed directly
        const double m1 = std::pow(0.25, 2 * s), m2 = std::pow(0.5, 2 * s);
        const double w1 = 0.09 + 1.21 + 0.49, w2 = 0.04;
        const double want = gamma1(s) * gamma2(s) * ((w1 * m1 + w2 * m2) * (w1 / m1 + w2 / m2) - (w1 + w2) * (w1 + w2));
        CHECK(rel(b.slack, want) < 1e-10);
    }
}

TEST_CASE("euclidean examples") {
    const auto h = haar_step({0, 0});
    const auto r = euclid_uncertainty(h, 0.25);
    CHECK(r.pass);
    CHECK(rel(r.product, haar_product_euclid_exact(0.25)) < 1e-12);
    CHECK(r.product > dyfrac::gamma(0.25));
    CHECK_THROWS_AS(euclid_uncertainty(h.scaled(1.1), 0.25), InvalidParameter);
    CHECK_NOTHROW(euclid_uncertainty(h.scaled(1.0 + 1e-12), 0.25));

    const auto f = random_step_function(trial_seed(62, 0));
    const auto a = euclid_uncertainty(f, 0.3);
    const auto b = euclid_uncertainty(f.translated(17), 0.3);
    CHECK(rel(b.product, a.product) < 1e-12);
    CHECK(rel(b.position, a.position) < 1e-12);
    CHECK(rel(b.energy, a.energy) < 1e-12);
    CHECK(b.pass == a.pass);
}

TEST_CASE("euclidean inequality on 1000 step functions") {
    for (int t = 0; t < 1000; ++t) {
        const auto f = random_step_function(trial_seed(63, std::uint64_t(t)));
        REQUIRE(euclid_uncertainty(f, 0.25).pass);
    }
}

TEST_CASE("shifted grid witness examples") {
    const auto w = shifted_grid_witness(haar_step({0, 0}), 0.25, 1e-6);
    CHECK(w.x0 == DyadicRational());
    CHECK(rel(w.mass_captured, 1.0) < 1e-15);
    CHECK(w.domination_holds);
    CHECK(rel(w.dyadic_product, dyfrac::gamma(0.25)) < 1e-12);

    const StepFunction f = StepFunction(0, {{5, 0.5}, {6, -0.5}, {7, 0.5}, {8, 0.5}});
    const auto v = shifted_grid_witness(f, 0.25, 0.01);
    CHECK(v.x0 == DyadicRational(5, 0));
    CHECK(rel(v.mass_captured, 1.0) < 1e-15);
    CHECK(v.domination_holds);
    CHECK(v.euclid_position >= v.dyadic_position);
    CHECK(v.euclid_energy >= v.dyadic_energy);

    CHECK_THROWS_AS(shifted_grid_witness(f, 0.25, 0.0), InvalidParameter);
    CHECK_THROWS_AS(shifted_grid_witness(f, 0.25, 1.0), InvalidParameter);
}

TEST_CASE("quantile origin keeps at least 1 - eps of the mass") {
    const StepFunction f(1, {{0, 0.1}, {3, 0.2}, {4, 1.0}, {9, 0.9}});
    const auto g = f.scaled(1.0 / std::sqrt(f.norm_squared()));
    for (double eps : {0.005, 0.05, 0.3}) {
        const auto w = shifted_grid_witness(g, 0.25, eps, OriginMode::quantile);
        CHECK(w.mass_captured >= 1.0 - eps - 1e-15);
        CHECK(w.domination_holds);
    }
    CHECK(shifted_grid_witness(g, 0.25, 0.3, OriginMode::quantile).x0 > DyadicRational());
}

TEST_CASE("domination chain on 200 step functions") {
    for (double s : {0.1, 0.25, 0.4}) {
        for (int t = 0; t < 200; ++t) {
            const auto f = random_step_function(trial_seed(64, std::uint64_t(t)));
            const auto w = shifted_grid_witness(f, s, 1e-6);
            REQUIRE(w.domination_holds);
            REQUIRE(rel(w.mass_captured, 1.0) < 1e-12);
        }
    }
}

TEST_CASE("random wave functions") {
    SweepConfig config;
    config.max_coefficients = 16;
    for (int t = 0; t < 200; ++t) {
        const auto seed = trial_seed(65, std::uint64_t(t));
        const auto e = random_wave_function(seed, config);
        const auto again = random_wave_function(seed, config);
        REQUIRE(e.coefficients() == again.coefficients());
        CHECK(rel(e.norm_squared(), 1.0) < 1e-12);
        CHECK(e.size() >= 1);
        CHECK(e.size() <= 16);
        for (const auto& [I, c] : e.coefficients()) {
            CHECK(I.level >= config.level_min);
            CHECK(I.level <= config.level_max);
            CHECK(c != 0.0);
        }
    }
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));

    config.single_haar = true;
    const auto one = random_wave_function(7, config);
    REQUIRE(one.size() == 1);
    CHECK(one.coefficients().begin()->second == 1.0);

    SweepConfig tiny;
    tiny.level_min = tiny.level_max = 0;
    tiny.max_coefficients = 64;
    CHECK(random_wave_function(3, tiny).size() <= 2);
}

TEST_CASE("sweep config validation") {
    SweepConfig c;
    c.s_grid = {0.005};
    CHECK_THROWS_AS(validate(c), InvalidParameter);
    c.s_grid = {0.25};
    c.trials = -1;
    CHECK_THROWS_AS(validate(c), InvalidParameter);
    c.trials = 1;
    c.level_min = 3;
    c.level_max = 2;
    CHECK_THROWS_AS(validate(c), InvalidParameter);
}

TEST_CASE("sweep") {
    SweepConfig c;
    c.s_grid = {0.1, 0.2, 0.3, 0.4};
    c.trials = 50;
    const auto out = sweep(c);
    REQUIRE(out.rows.size() == 4);
    CHECK(out.reports.size() == 200);
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const auto& row = out.rows[i];
        CHECK(row.passes == 50);
        CHECK(*row.min_product >= row.gamma * (1 - 1e-12));
        if (i > 0) CHECK(row.gamma < out.rows[i - 1].gamma);
    }
    // the same expansions are used at every s
    for (int t = 0; t < 50; ++t) {
        const auto e = random_wave_function(trial_seed(c.seed, std::uint64_t(t)), c);
        CHECK(same_report(out.reports[std::size_t(100 + t)], dyadic_uncertainty(e, 0.3)));
    }

    c.single_haar = true;
    for (const auto& row : sweep(c).rows) CHECK(std::abs(*row.min_slack) <= 1e-12 * *row.min_product);

    c.trials = 0;
    const auto empty = sweep(c);
    REQUIRE(empty.rows.size() == 4);
    CHECK(empty.reports.empty());
    CHECK_FALSE(empty.rows[0].min_product.has_value());
    CHECK(empty.rows[0].gamma == dyfrac::gamma(0.1));

    const auto direct = sweep(c, DyadicPath::direct);
    CHECK(direct.rows.size() == 4);
}
