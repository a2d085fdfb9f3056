#include "dyfrac/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

#include "dyfrac/errors.hpp"

namespace dyfrac {

// ---------------------------------------------------------------- series

OracleEstimate dyadic_series_oracle(SeriesKind kind, double exponent, double measure, int terms) {
    if (!(measure > 0.0) || !std::isfinite(measure)) throw InvalidParameter("measure must be positive");
    const bool form_kind = kind == SeriesKind::intra_cell_Q || kind == SeriesKind::outer_tail_E;
    if (form_kind && !(exponent > 0.0 && exponent < 0.5)) throw InvalidParameter("s must lie in (0, 1/2)");
    const double alpha = form_kind ? 2.0 * exponent : exponent;
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DivergentIntegral("level-set series diverges for alpha <= 0");
    if (terms < 0) throw InvalidParameter("term count must be non-negative");
    if (terms == 0) terms = int(std::min(1.0e6, std::ceil(14.0 * std::log2(10.0) / alpha)));

    // Shell k is the level set {delta = 2^-k |B|} (inner, k >= 0) or
    // {delta = 2^(k+1) |B|} (outer), of measure 2^-(k+1)|B| or 2^k |B|.
    const auto shell = [&](int k) {
        switch (kind) {
            case SeriesKind::ball_power:
                return std::ldexp(measure, -(k + 1)) * std::pow(std::ldexp(measure, -k), alpha - 1.0);
            case SeriesKind::intra_cell_Q:
                return measure * std::ldexp(measure, -(k + 1)) * std::pow(std::ldexp(measure, -k), alpha - 1.0);
            case SeriesKind::complement_power:
            case SeriesKind::outer_tail_E:
                return std::ldexp(measure, k) * std::pow(std::ldexp(measure, k + 1), -1.0 - alpha);
        }
        return 0.0;
    };
    double sum = 0.0;
    for (int k = 0; k < terms; ++k) sum += shell(k);
    // Consecutive shells have ratio 2^-alpha in every case.
    const double tail = shell(terms) / -std::expm1(-alpha * std::log(2.0));
    return {sum, tail, terms};
}

// ---------------------------------------------------------------- quadrature

namespace {

constexpr std::int64_t max_panels = 20000;

struct Quadrature {
    double value;
    double error;
    std::int64_t panels;
};

struct Panel {
    double a, b;
    double fa, fq1, fm, fq3, fb;
    double value, error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename Fn>
Panel make_panel(Fn& g, double a, double b, double fa, double fm, double fb) {
    const double h = b - a;
    const double fq1 = g(a + 0.25 * h);
    const double fq3 = g(a + 0.75 * h);
    const double coarse = h / 6.0 * (fa + 4.0 * fm + fb);
    const double fine = h / 12.0 * (fa + 4.0 * fq1 + 2.0 * fm + 4.0 * fq3 + fb);
    return {a, b, fa, fq1, fm, fq3, fb, fine + (fine - coarse) / 15.0, std::abs(fine - coarse) / 15.0};
}

// Global adaptive Simpson: always bisect the panel with the largest error
// estimate until the summed estimate meets the relative tolerance.
template <typename Fn>
Quadrature integrate(Fn&& g, double a, double b, double tolerance) {
    std::priority_queue<Panel> heap;
    heap.push(make_panel(g, a, b, g(a), g(0.5 * (a + b)), g(b)));
    double total = heap.top().value;
    double error = heap.top().error;
    std::int64_t panels = 1;
    while (error > tolerance * std::abs(total) && error > 1e-300) {
        if (panels >= max_panels) throw NonConvergence("adaptive quadrature exceeded its panel budget");
        const Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        const Panel left = make_panel(g, p.a, m, p.fa, p.fq1, p.fm);
        const Panel right = make_panel(g, m, p.b, p.fm, p.fq3, p.fb);
        total += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    double sum = 0.0, err = 0.0;
    for (; !heap.empty(); heap.pop()) {
        sum += heap.top().value;
        err += heap.top().error;
    }
    return {sum, err, panels};
}

class EuclidQuadrature {
public:
    EuclidQuadrature(double s, double length, double tolerance) : s_(s), l_(length), tol_(tolerance) {}

    // int_C int_C' |x-y|^(2s-1) for cells `distance` offsets apart.
    Quadrature position(std::int64_t distance) {
        return cached(position_cache_, distance, [&] {
            const double s = s_, l = l_;
            if (distance == 0) {
                // 2 int_0^(l/2) (x^(2s) + (l-x)^(2s)) / (2s) dx with x = u^m.
                const double m = 1.0 / (2.0 * s);
                auto q = integrate(
                    [&](double u) {
                        const double x = std::pow(u, m);
                        return m * std::pow(u, m - 1.0) * (u + std::pow(l - x, 2.0 * s)) / (2.0 * s);
                    },
                    0.0, std::pow(0.5 * l, 1.0 / m), tol_);
                return Quadrature{2.0 * q.value, 2.0 * q.error, q.panels};
            }
            // t = distance from x to the near edge of the other cell.
            const double t0 = double(distance - 1) * l;
            const auto inner = [&](double t) { return (std::pow(t + l, 2.0 * s) - std::pow(t, 2.0 * s)) / (2.0 * s); };
            if (t0 > 0.0) return integrate(inner, t0, t0 + l, tol_);
            const double m = 1.0 / (2.0 * s);
            return integrate(
                [&](double u) {
                    const double t = std::pow(u, m);
                    return m * std::pow(u, m - 1.0) * (std::pow(t + l, 2.0 * s) - u) / (2.0 * s);
                },
                0.0, std::pow(l, 1.0 / m), tol_);
        });
    }

    // int_C int_C' |x-y|^(-1-2s) for distinct cells.
    Quadrature energy(std::int64_t distance) {
        return cached(energy_cache_, distance, [&] {
            const double s = s_, l = l_;
            const double t0 = double(distance - 1) * l;
            const auto inner = [&](double t) { return (std::pow(t, -2.0 * s) - std::pow(t + l, -2.0 * s)) / (2.0 * s); };
            if (t0 > 0.0) return integrate(inner, t0, t0 + l, tol_);
            // t = u^m with m (1-2s) = 1 removes the t^(-2s) singularity.
            const double m = 1.0 / (1.0 - 2.0 * s);
            return integrate(
                [&](double u) {
                    const double t = std::pow(u, m);
                    return m * (1.0 - std::pow(u, m - 1.0) * std::pow(t + l, -2.0 * s)) / (2.0 * s);
                },
                0.0, std::pow(l, 1.0 / m), tol_);
        });
    }

    // int_C int_ray |x-y|^(-1-2s), ray starting `gap` cells from C.
    Quadrature ray(std::int64_t gap) {
        return cached(ray_cache_, gap, [&] {
            const double s = s_, l = l_;
            const double t0 = double(gap) * l;
            if (t0 > 0.0) return integrate([&](double t) { return std::pow(t, -2.0 * s) / (2.0 * s); }, t0, t0 + l, tol_);
            const double m = 1.0 / (1.0 - 2.0 * s);
            return integrate([&](double) { return m / (2.0 * s); }, 0.0, std::pow(l, 1.0 / m), tol_);
        });
    }

private:
    using Cache = std::unordered_map<std::int64_t, Quadrature>;

    template <typename Make>
    Quadrature cached(Cache& cache, std::int64_t key, Make&& make) {
        const auto it = cache.find(key);
        if (it != cache.end()) return {it->second.value, it->second.error, 0};
        const Quadrature q = make();
        cache.emplace(key, q);
        return q;
    }

    double s_, l_, tol_;
    Cache position_cache_, energy_cache_, ray_cache_;
};

struct Accumulator {
    OracleEstimate out;

    void add(double weight, const Quadrature& q) {
        out.value += weight * q.value;
        out.bound += std::abs(weight) * q.error;
        out.n += q.panels;
    }
};

}  // namespace

OracleEstimate euclid_adaptive_oracle(const StepFunction& f, FormKind kind, FormParameter s, double tolerance) {
    if (!(tolerance >= 1e-13) || !std::isfinite(tolerance)) throw InvalidParameter("tolerance must be >= 1e-13");
    if (s < 1e-6 || 0.5 - s < 1e-6) throw InvalidParameter("s too close to 0 or 1/2");
    const auto cells = f.cells();
    EuclidQuadrature quad(s, f.cell_length(), tolerance);
    Accumulator acc;

    if (kind == FormKind::position) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double fi = std::abs(cells[i].v);
            if (fi == 0.0) continue;
            acc.add(fi * fi, quad.position(0));
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                if (cells[j].v != 0.0) acc.add(2.0 * fi * std::abs(cells[j].v), quad.position(cells[j].k - cells[i].k));
            }
        }
        return acc.out;
    }

    if (cells.empty()) return {};
    const std::int64_t first = cells.front().k;
    const auto n = std::size_t(cells.back().k - first + 1);
    std::vector<double> v(n, 0.0);
    for (const auto& c : cells) v[std::size_t(c.k - first)] = c.v;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = v[i] - v[j];
            if (d != 0.0) acc.add(2.0 * d * d, quad.energy(std::int64_t(j - i)));
        }
        if (v[i] != 0.0) {
            acc.add(2.0 * v[i] * v[i], quad.ray(std::int64_t(i)));
            acc.add(2.0 * v[i] * v[i], quad.ray(std::int64_t(n - 1 - i)));
        }
    }
    return acc.out;
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

class CellLookup {
public:
    explicit CellLookup(const StepFunction& f) : cells_(f.cells()) {}

    double operator()(std::int64_t k) const {
        const auto it = std::lower_bound(cells_.begin(), cells_.end(), k,
                                         [](const Cell& c, std::int64_t key) { return c.k < key; });
        return (it != cells_.end() && it->k == k) ? it->v : 0.0;
    }

private:
    std::span<const Cell> cells_;
};

// Uniform integer in [0, 2^bits).
std::int64_t uniform_bits(std::mt19937_64& rng, int bits) {
    if (bits == 0) return 0;
    return std::int64_t(rng() >> (64 - bits));
}

// Uniform integer in [0, n).
std::size_t uniform_below(std::mt19937_64& rng, std::size_t n) {
    return std::size_t((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

struct Stratum {
    double weight;
    double sum = 0.0;
    double sum2 = 0.0;
};

}  // namespace

OracleEstimate dyadic_stratified_oracle(const StepFunction& f, FormKind kind, FormParameter s, std::uint64_t seed,
                                        std::int64_t samples) {
    if (samples < 10000) throw InvalidParameter("stratified oracle needs at least 10^4 samples");
    if (f.is_zero()) return {0.0, 0.0, samples};

    const DyadicInterval root = f.root();
    const int depth = f.grid_level() - root.level;
    if (depth > 62) throw std::overflow_error("support too deep for 63-bit sampling");
    const std::int64_t base = root.offset << depth;
    const double length = f.cell_length();
    const double root_measure = root.measure();
    const CellLookup value(f);

    // x is drawn from the cells where f != 0 only. For the energy, pairs with
    // x off the support mirror pairs with y off the support, so those count twice.
    std::vector<std::int64_t> support;
    for (const auto& c : f.cells()) {
        if (c.v != 0.0) support.push_back(c.k - base);
    }
    const double support_measure = double(support.size()) * length;

    // Strata 0..depth-1: shells at delta = 2^(t+1) |C|; last stratum: the
    // self-cell pairs (position) or the exterior of the root (energy).
    std::vector<Stratum> strata;
    for (int t = 1; t <= depth; ++t) {
        const double r = std::ldexp(length, t);
        const double kernel = kind == FormKind::position ? std::pow(r, 2.0 * s - 1.0) : std::pow(r, -1.0 - 2.0 * s);
        strata.push_back({kernel * support_measure * 0.5 * r});
    }
    if (kind == FormKind::position) {
        const auto self = dyadic_series_oracle(SeriesKind::ball_power, 2.0 * s, length);
        strata.push_back({support_measure * self.value});
    } else {
        const auto tail = dyadic_series_oracle(SeriesKind::outer_tail_E, s, root_measure);
        strata.push_back({2.0 * support_measure * tail.value});
    }

    std::mt19937_64 rng(seed);
    const std::int64_t per_stratum = samples / std::int64_t(strata.size());
    for (std::size_t st = 0; st < strata.size(); ++st) {
        auto& stratum = strata[st];
        const bool shell = st < std::size_t(depth);
        const int t = int(st) + 1;
        for (std::int64_t i = 0; i < per_stratum; ++i) {
            const std::int64_t xc = support[uniform_below(rng, support.size())];
            const double fx = value(base + xc);
            double factor;
            if (shell) {
                const std::int64_t sibling = ((xc >> (t - 1)) ^ 1) << (t - 1);
                const double fy = value(base + sibling + uniform_bits(rng, t - 1));
                if (kind == FormKind::position) {
                    factor = fx * fy;
                } else {
                    factor = fy == 0.0 ? 2.0 * fx * fx : (fx - fy) * (fx - fy);
                }
            } else {
                factor = fx * fx;
            }
            stratum.sum += factor;
            stratum.sum2 += factor * factor;
        }
    }

    double value_sum = 0.0, variance = 0.0;
    const double n = double(per_stratum);
    for (const auto& st : strata) {
        const double mean = st.sum / n;
        const double var = std::max(0.0, (st.sum2 / n - mean * mean)) * n / (n - 1.0);
        value_sum += st.weight * mean;
        variance += st.weight * st.weight * var / n;
    }
    return {value_sum, std::sqrt(variance), per_stratum * std::int64_t(strata.size())};
}

}  // namespace dyfrac
