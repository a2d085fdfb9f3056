#include "dyfrac/forms_euclid.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dyfrac/errors.hpp"

namespace dyfrac {

namespace {

constexpr double endpoint_margin = 1e-6;
constexpr std::int64_t max_energy_span = std::int64_t(1) << 15;

void require_interior(FormParameter s) {
    if (s < endpoint_margin || 0.5 - s < endpoint_margin) {
        throw InvalidParameter("s too close to 0 or 1/2 for the Euclidean antiderivatives");
    }
}

double antiderivative(double p, double t) {
    return t == 0.0 ? 0.0 : std::pow(t, p + 2.0) / ((p + 1.0) * (p + 2.0));
}

// iint over [0,l1] x [l1+g, l1+g+l2] of |x-y|^p.
double separated(double p, double gap, double l1, double l2) {
    if (gap > 4.0 * (l1 + l2)) {
        // g^(p+2) sum_n C(p,n) [(u1+u2)^(n+2) - u1^(n+2) - u2^(n+2)] / ((n+1)(n+2))
        const double u1 = l1 / gap;
        const double u2 = l2 / gap;
        double binom = 1.0;
        double pw12 = (u1 + u2) * (u1 + u2), pw1 = u1 * u1, pw2 = u2 * u2;
        double sum = 0.0;
        for (int n = 0; n < 200; ++n) {
            const double term = binom * (pw12 - pw1 - pw2) / ((n + 1.0) * (n + 2.0));
            sum += term;
            if (n >= 2 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
            binom *= (p - n) / (n + 1.0);
            pw12 *= u1 + u2;
            pw1 *= u1;
            pw2 *= u2;
        }
        return std::pow(gap, p + 2.0) * sum;
    }
    return antiderivative(p, gap + l1 + l2) - antiderivative(p, gap + l1) - antiderivative(p, gap + l2) +
           antiderivative(p, gap);
}

double same_cell(double p, double length) {
    if (!(p > -1.0)) throw DivergentIntegral("kernel |x-y|^p is not integrable on a square for p <= -1");
    return 2.0 * std::pow(length, p + 2.0) / ((p + 1.0) * (p + 2.0));
}

// Kernel integral between two grid cells `distance` offsets apart.
class CellKernel {
public:
    CellKernel(double p, double length) : p_(p), length_(length) {}

    double operator()(std::int64_t distance) {
        const auto it = cache_.find(distance);
        if (it != cache_.end()) return it->second;
        const double v = distance == 0 ? same_cell(p_, length_)
                                       : separated(p_, double(distance - 1) * length_, length_, length_);
        cache_.emplace(distance, v);
        return v;
    }

private:
    double p_;
    double length_;
    std::unordered_map<std::int64_t, double> cache_;
};

// int_C int_{ray} |x-y|^(-1-2s) dy dx for a cell of length l whose near edge
// is at distance t from the ray: ((t+l)^q - t^q) / (2s q), q = 1-2s.
double ray_tail(double s, double t, double length) {
    const double q = 1.0 - 2.0 * s;
    const double diff = t == 0.0 ? std::pow(length, q) : std::pow(t, q) * std::expm1(q * std::log1p(length / t));
    return diff / (2.0 * s * q);
}

}  // namespace

double kernel_rect_integral(KernelExponent kernel, double a, double b, double c, double d) {
    const double p = kernel.p;
    if (!(b > a) || !(d > c)) throw std::invalid_argument("rectangle sides must have positive length");
    if (!(p > -2.0) || !std::isfinite(p)) throw DivergentIntegral("kernel |x-y|^p needs p > -2");
    if (std::abs(p + 1.0) < 1e-12) throw InvalidParameter("kernel exponent p = -1 has a logarithmic antiderivative");
    if (a == c && b == d) return same_cell(p, b - a);
    if (b <= c) return separated(p, c - b, b - a, d - c);
    if (d <= a) return separated(p, a - d, d - c, b - a);
    throw std::invalid_argument("overlapping rectangles must be identical");
}

FormEvaluation position_quadratic(const StepFunction& f, FormParameter s) {
    require_interior(s);
    const auto cells = f.cells();
    CellKernel kernel(KernelExponent::position(s).p, f.cell_length());
    double sum = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double fi = std::abs(cells[i].v);
        if (fi == 0.0) continue;
        sum += fi * fi * kernel(0);
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            sum += 2.0 * fi * std::abs(cells[j].v) * kernel(cells[j].k - cells[i].k);
        }
    }
    return {sum, Method::direct, 0.0, {}};
}

FormEvaluation energy_quadratic(const StepFunction& f, FormParameter s) {
    require_interior(s);
    const auto cells = f.cells();
    if (cells.empty()) return {0.0, Method::direct, 0.0, {}};
    const std::int64_t first = cells.front().k;
    const std::int64_t span = cells.back().k - first + 1;
    if (span > max_energy_span) throw std::length_error("support spans too many grid cells");

    std::vector<double> v(static_cast<std::size_t>(span), 0.0);
    for (const auto& c : cells) v[std::size_t(c.k - first)] = c.v;

    const double length = f.cell_length();
    CellKernel kernel(KernelExponent::energy(s).p, length);
    const auto n = std::size_t(span);
    double interior = 0.0;
    for (std::size_t gap = 1; gap < n; ++gap) {
        double diff2 = 0.0;
        for (std::size_t i = 0; i + gap < n; ++i) {
            const double d = v[i] - v[i + gap];
            diff2 += d * d;
        }
        if (diff2 != 0.0) interior += diff2 * kernel(std::int64_t(gap));
    }
    double exterior = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0.0) continue;
        const double left = ray_tail(s, double(i) * length, length);
        const double right = ray_tail(s, double(n - 1 - i) * length, length);
        exterior += v[i] * v[i] * (left + right);
    }
    return {2.0 * (interior + exterior), Method::direct, 0.0, {}};
}

double haar_position_euclid_closed(const DyadicInterval& interval, FormParameter s) {
    return std::exp2(-2.0 * s * interval.level) / (s * (2.0 * s + 1.0));
}

double haar_energy_euclid_closed(const DyadicInterval& interval, FormParameter s) {
    return 6.0 * std::exp2(2.0 * s * interval.level) / (s * (1.0 - 2.0 * s));
}

double haar_product_euclid_closed(FormParameter s) { return 6.0 / (s * s * (1.0 - 4.0 * s * s)); }

double haar_energy_euclid_exact(const DyadicInterval& interval, FormParameter s) {
    return 2.0 * (std::exp2(2.0 * s + 1.0) - 1.0) * std::exp2(2.0 * s * interval.level) / (s * (1.0 - 2.0 * s));
}

double haar_product_euclid_exact(FormParameter s) {
    return 2.0 * (std::exp2(2.0 * s + 1.0) - 1.0) / (s * s * (1.0 - 4.0 * s * s));
}

double variance(const StepFunction& f) {
    const double length = f.cell_length();
    double mass = 0.0, first_moment = 0.0;
    for (const auto& c : f.cells()) {
        const double w = c.v * c.v;
        const double a = std::ldexp(double(c.k), -f.grid_level());
        const double b = a + length;
        mass += w * length;
        first_moment += w * (b * b - a * a) / 2.0;
    }
    if (!(mass > 0.0)) throw InvalidParameter("variance of the zero function is undefined");
    const double mean = first_moment / mass;
    double central = 0.0;
    for (const auto& c : f.cells()) {
        const double a = std::ldexp(double(c.k), -f.grid_level()) - mean;
        const double b = a + length;
        central += c.v * c.v * (b * b * b - a * a * a) / 3.0;
    }
    return central;
}

}  // namespace dyfrac
