#include "dyfrac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dyfrac/dyadic.hpp"
#include "dyfrac/forms_euclid.hpp"
#include "dyfrac/haar.hpp"
#include "dyfrac/oracle.hpp"
#include "dyfrac/uncertainty.hpp"

namespace dyfrac {

namespace {

double rel(double value, double reference) {
    const double scale = std::abs(reference);
    return scale == 0.0 ? std::abs(value) : std::abs(value - reference) / scale;
}

class Check {
public:
    Check(std::string name, std::string description, double tolerance)
        : line_{std::move(name), std::move(description), 0.0, tolerance, true, false} {}

    void observe(double deviation) {
        if (!(deviation <= line_.deviation)) line_.deviation = std::isnan(deviation) ? INFINITY : deviation;
    }

    CheckLine done(bool informational = false) {
        line_.informational = informational;
        line_.pass = line_.deviation <= line_.tolerance;
        return line_;
    }

private:
    CheckLine line_;
};

std::vector<DyadicInterval> haar_grid(const VerifyOptions& o) {
    std::vector<DyadicInterval> out;
    for (int j = o.level_min; j <= o.level_max; ++j) out.emplace_back(j, j < 0 ? 0 : 1);
    return out;
}

}  // namespace

std::vector<CheckLine> verify_identities(FormParameter s, const VerifyOptions& o) {
    std::vector<CheckLine> lines;
    const auto haars = haar_grid(o);

    {
        Check c("metric-domination", "|x-y| <= delta(x,y) and the ultrametric inequality on sampled points", 0.0);
        std::mt19937_64 rng(20240601);
        const auto point = [&] { return 8.0 * (double((rng() >> 11) + 1) * 0x1.0p-53); };
        for (int i = 0; i < 2000; ++i) {
            const double x = point(), y = point(), z = point();
            const double dxy = dyadic_distance(x, y), dyz = dyadic_distance(y, z), dxz = dyadic_distance(x, z);
            c.observe(std::max(0.0, std::abs(x - y) - dxy));
            c.observe(std::max(0.0, dxz - std::max(dxy, dyz)));
        }
        lines.push_back(c.done());
    }

    {
        Check ball("ball-integral", "int_B delta^(alpha-1) closed form vs level-set series", o.tolerance);
        Check comp("complement-integral", "int_{B^c} delta^(-1-alpha) closed form vs level-set series", o.tolerance);
        for (double alpha : {0.1, 0.25, 0.5, 0.75, 1.0}) {
            for (double m : {0.25, 1.0, 4.0}) {
                ball.observe(rel(integral_ball_power(alpha, m),
                                 dyadic_series_oracle(SeriesKind::ball_power, alpha, m).value));
                comp.observe(rel(integral_complement_power(alpha, m),
                                 dyadic_series_oracle(SeriesKind::complement_power, alpha, m).value));
            }
        }
        lines.push_back(ball.done());
        lines.push_back(comp.done());
    }

    {
        Check c("haar-variance", "Var|h|^2 = |I|^2 / 12", o.tolerance);
        for (const auto& I : haars) c.observe(rel(variance(haar_step(I)), I.measure() * I.measure() / 12.0));
        lines.push_back(c.done());
    }

    {
        Check closed("haar-position-dyadic", "direct Q^delta(h) vs gamma_1 |I|^(2s)", o.tolerance);
        Check energy("haar-energy-dyadic", "direct E^delta(h) vs gamma_2 |I|^(-2s)", o.tolerance);
        Check mc_q("haar-position-dyadic-oracle", "stratified Monte Carlo Q^delta(h), |error| / 3 sigma", 1.0);
        Check mc_e("haar-energy-dyadic-oracle", "stratified Monte Carlo E^delta(h), |error| / 3 sigma", 1.0);
        std::uint64_t seed = 7;
        for (const auto& I : haars) {
            const auto h = haar_step(I);
            const double q = haar_position_closed(I, s);
            const double e = o.gamma2_factor * haar_energy_closed(I, s);
            closed.observe(rel(position_direct(h, s).value, q));
            energy.observe(rel(energy_direct(h, s).value, e));
            const auto oq = dyadic_stratified_oracle(h, FormKind::position, s, seed++, 200000);
            const auto oe = dyadic_stratified_oracle(h, FormKind::energy, s, seed++, 200000);
            mc_q.observe(std::abs(oq.value - q) / (3.0 * oq.bound + 1e-12 * q));
            mc_e.observe(std::abs(oe.value - haar_energy_closed(I, s)) /
                         (3.0 * oe.bound + 1e-12 * haar_energy_closed(I, s)));
        }
        lines.push_back(closed.done());
        lines.push_back(mc_q.done());
        lines.push_back(energy.done());
        lines.push_back(mc_e.done());
    }

    {
        Check c("haar-orthogonality", "|Q^delta(h,g)|, |E^delta(h,g)| / sqrt(diagonal product), h != g", o.tolerance);
        std::vector<DyadicInterval> family;
        for (int j = o.level_min; j <= std::min(o.level_max, o.level_min + 4); ++j) {
            for (std::int64_t k : {0, 1, 3}) family.emplace_back(j, k);
        }
        for (std::size_t a = 0; a < family.size(); ++a) {
            const auto ha = haar_step(family[a]);
            for (std::size_t b = a + 1; b < family.size(); ++b) {
                const auto hb = haar_step(family[b]);
                const double dq = std::sqrt(haar_position_closed(family[a], s) * haar_position_closed(family[b], s));
                const double de = std::sqrt(haar_energy_closed(family[a], s) * haar_energy_closed(family[b], s));
                c.observe(std::abs(position_bilinear_direct(ha, hb, s).value) / dq);
                c.observe(std::abs(energy_bilinear_direct(ha, hb, s).value) / de);
            }
        }
        lines.push_back(c.done());
    }

    {
        Check c("spectral-direct", "spectral vs direct dyadic forms on seeded expansions", o.tolerance);
        SweepConfig config;
        config.level_min = -4;
        config.level_max = 6;
        for (int t = 0; t < 50; ++t) {
            const auto e = random_wave_function(trial_seed(11, std::uint64_t(t)), config);
            const auto f = synthesize(e);
            c.observe(rel(position_direct(f, s).value, position_spectral(e, s).value));
            c.observe(rel(energy_direct(f, s).value, energy_spectral(e, s).value));
        }
        lines.push_back(c.done());
    }

    {
        Check q("haar-position-euclid", "Euclidean Q(|h|) vs |I|^(2s) / (s(2s+1))", o.tolerance);
        Check qo("haar-position-euclid-oracle", "Euclidean Q(|h|) vs adaptive quadrature", o.oracle_tolerance);
        Check e("haar-energy-euclid", "Euclidean E(h) vs 2(2^(2s+1)-1) |I|^(-2s) / (s(1-2s))", o.tolerance);
        Check eo("haar-energy-euclid-oracle", "Euclidean E(h) vs adaptive quadrature", o.oracle_tolerance);
        Check six("haar-energy-euclid-constant-6", "Euclidean E(h) vs 6 |I|^(-2s) / (s(1-2s))", o.tolerance);
        for (const auto& I : haars) {
            const auto h = haar_step(I);
            const double qv = position_quadratic(h, s).value;
            const double ev = energy_quadratic(h, s).value;
            q.observe(rel(qv, haar_position_euclid_closed(I, s)));
            e.observe(rel(ev, haar_energy_euclid_exact(I, s)));
            six.observe(rel(ev, haar_energy_euclid_closed(I, s)));
            qo.observe(rel(qv, euclid_adaptive_oracle(h, FormKind::position, s).value));
            eo.observe(rel(ev, euclid_adaptive_oracle(h, FormKind::energy, s).value));
        }
        lines.push_back(q.done());
        lines.push_back(qo.done());
        lines.push_back(e.done());
        lines.push_back(eo.done());
        lines.push_back(six.done(true));
    }
    return lines;
}

bool all_pass(const std::vector<CheckLine>& lines) {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass || l.informational; });
}

}  // namespace dyfrac
