#include "dyfrac/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dyfrac/errors.hpp"

namespace dyfrac {

namespace {

using i128 = __int128;

std::uint64_t magnitude(std::int64_t n) {
    return n < 0 ? std::uint64_t(0) - std::uint64_t(n) : std::uint64_t(n);
}

DyadicRational canonical_from_wide(i128 n, int exponent) {
    if (n == 0) return {};
    while ((n & 1) == 0) {
        n /= 2;
        --exponent;
    }
    if (n > i128(INT64_MAX) || n < i128(INT64_MIN)) {
        throw std::overflow_error("dyadic rational numerator exceeds 64 bits");
    }
    return DyadicRational(static_cast<std::int64_t>(n), exponent);
}

// Both numerators brought to the common exponent max(ea, eb).
struct Aligned {
    i128 a;
    i128 b;
    int exponent;
};

Aligned align(const DyadicRational& x, const DyadicRational& y) {
    const int e = std::max(x.exponent(), y.exponent());
    const int sx = e - x.exponent();
    const int sy = e - y.exponent();
    if (sx > 63 || sy > 63) throw std::overflow_error("dyadic rational exponents too far apart");
    return {i128(x.numerator()) * (i128(1) << sx), i128(y.numerator()) * (i128(1) << sy), e};
}

}  // namespace

DyadicInterval::DyadicInterval(int lvl, std::int64_t off) : level(lvl), offset(off) {
    if (off < 0) throw std::invalid_argument("dyadic interval offset must be non-negative");
}

double DyadicInterval::measure() const { return std::ldexp(1.0, -level); }
double DyadicInterval::left() const { return std::ldexp(double(offset), -level); }
double DyadicInterval::right() const { return std::ldexp(double(offset + 1), -level); }

DyadicInterval DyadicInterval::parent() const { return {level - 1, offset >> 1}; }
DyadicInterval DyadicInterval::left_half() const { return {level + 1, 2 * offset}; }
DyadicInterval DyadicInterval::right_half() const { return {level + 1, 2 * offset + 1}; }

DyadicInterval DyadicInterval::ancestor(int coarser_level) const {
    if (coarser_level > level) throw std::invalid_argument("ancestor level must be coarser");
    const int shift = level - coarser_level;
    return {coarser_level, shift >= 63 ? 0 : offset >> shift};
}

bool DyadicInterval::contains(const DyadicInterval& other) const {
    return other.level >= level && other.ancestor(level) == *this;
}

Overlap relation(const DyadicInterval& a, const DyadicInterval& b) {
    if (a == b) return Overlap::equal;
    if (a.contains(b)) return Overlap::contains;
    if (b.contains(a)) return Overlap::contained;
    return Overlap::disjoint;
}

DyadicInterval common_ancestor(const DyadicInterval& a, const DyadicInterval& b) {
    const int level = std::min(a.level, b.level);
    const auto pa = a.ancestor(level);
    const auto pb = b.ancestor(level);
    if (pa == pb) return pa;
    const int t = std::bit_width(std::uint64_t(pa.offset ^ pb.offset));
    return {level - t, pa.offset >> t};
}

DyadicRational::DyadicRational(std::int64_t numerator, int exponent)
    : numerator_(numerator), exponent_(exponent) {
    if (numerator_ == 0) {
        exponent_ = 0;
        return;
    }
    const int tz = std::countr_zero(magnitude(numerator_));
    numerator_ = (tz == 63) ? -1 : numerator_ / (std::int64_t(1) << tz);
    exponent_ -= tz;
}

DyadicRational DyadicRational::from_double(double x) {
    if (!std::isfinite(x)) throw InvalidParameter("non-finite value has no dyadic representation");
    if (x == 0.0) return {};
    int p = 0;
    const double m = std::frexp(x, &p);
    return DyadicRational(static_cast<std::int64_t>(std::ldexp(m, 53)), 53 - p);
}

double DyadicRational::to_double() const { return std::ldexp(double(numerator_), -exponent_); }

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
    const auto w = align(a, b);
    return canonical_from_wide(w.a - w.b, w.exponent);
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    const auto w = align(a, b);
    return canonical_from_wide(w.a + w.b, w.exponent);
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    const int gap = a.exponent() - b.exponent();
    if (gap >= -63 && gap <= 63) {
        const auto w = align(a, b);
        return w.a <=> w.b;
    }
    // Exponents more than 63 bits apart: the operand with the smaller
    // exponent dominates in magnitude unless it is zero.
    const auto sign = [](std::int64_t n) { return (n > 0) - (n < 0); };
    const int sa = sign(a.numerator());
    const int sb = sign(b.numerator());
    if (sa != sb) return sa <=> sb;
    const bool a_larger_magnitude = gap < 0;
    return sa > 0 ? (a_larger_magnitude ? std::strong_ordering::greater : std::strong_ordering::less)
                  : (a_larger_magnitude ? std::strong_ordering::less : std::strong_ordering::greater);
}

std::int64_t DyadicRational::cell_index(int level) const {
    if (numerator_ <= 0) throw InvalidParameter("cell index requires a positive value");
    if (level >= exponent_) {
        const int shift = level - exponent_;
        if (shift > 62 || numerator_ > (INT64_MAX >> shift)) {
            throw std::overflow_error("cell index exceeds 63 bits at this level");
        }
        return (numerator_ << shift) - 1;
    }
    const int shift = exponent_ - level;
    return shift >= 63 ? 0 : (numerator_ - 1) >> shift;
}

bool contains(const DyadicInterval& interval, const DyadicRational& x) {
    if (x.numerator() <= 0) return false;
    try {
        return x.cell_index(interval.level) == interval.offset;
    } catch (const std::overflow_error&) {
        return false;  // x lies far beyond any representable offset
    }
}

bool contains(const DyadicInterval& interval, double x) {
    if (!std::isfinite(x)) return false;
    return contains(interval, DyadicRational::from_double(x));
}

DyadicMetric::DyadicMetric(GridOrigin origin, int resolution)
    : origin_(origin), resolution_(resolution) {}

DyadicRational DyadicMetric::relative(double x) const {
    auto d = DyadicRational::from_double(x) - origin_.x0;
    if (d.numerator() <= 0) throw InvalidParameter("point must lie strictly right of the grid origin");
    return d;
}

DyadicInterval DyadicMetric::cell(double x, int level) const {
    return {level, relative(x).cell_index(level)};
}

double DyadicMetric::distance(double x, double y) const {
    if (x == y) {
        relative(x);  // still reject points outside the half-line
        return 0.0;
    }
    const auto dx = relative(x);
    const auto dy = relative(y);
    const double largest = std::max(dx.to_double(), dy.to_double());
    const int bits = std::ilogb(largest) + 1;
    const int level = std::min(resolution_, 62 - bits);
    const auto kx = dx.cell_index(level);
    const auto ky = dy.cell_index(level);
    if (kx == ky) return std::ldexp(1.0, -level);
    const int t = std::bit_width(std::uint64_t(kx ^ ky));
    return std::ldexp(1.0, t - level);
}

DyadicInterval DyadicMetric::ball(double x, double r) const {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParameter("ball radius must be positive and finite");
    int e = 0;
    const double m = std::frexp(r, &e);
    // Largest power of two strictly below r.
    const int level = (m == 0.5) ? 2 - e : 1 - e;
    return {level, relative(x).cell_index(level)};
}

double dyadic_distance(double x, double y, const GridOrigin& origin) {
    return DyadicMetric(origin).distance(x, y);
}

DyadicInterval dyadic_ball(double x, double r, const GridOrigin& origin) {
    return DyadicMetric(origin).ball(x, r);
}

double level_set_measure(const DyadicInterval& interval, int k) {
    return std::ldexp(interval.measure(), k - 1);
}

double one_minus_pow2(double a) { return -std::expm1(-a * std::numbers::ln2); }

namespace {

void require_convergent(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DivergentIntegral("delta-power integral diverges for alpha <= 0");
    }
}

}  // namespace

double integral_ball_power(double alpha, double ball_measure) {
    require_convergent(alpha);
    return std::pow(ball_measure, alpha) / (2.0 * one_minus_pow2(alpha));
}

double integral_ball_power(double alpha, const DyadicInterval& ball) {
    return integral_ball_power(alpha, ball.measure());
}

double integral_complement_power(double alpha, double ball_measure) {
    require_convergent(alpha);
    return std::exp2(-alpha) * std::pow(ball_measure, -alpha) / (2.0 * one_minus_pow2(alpha));
}

double integral_complement_power(double alpha, const DyadicInterval& ball) {
    return integral_complement_power(alpha, ball.measure());
}

bool divergence_witness(DivergentCase which) {
    switch (which) {
        case DivergentCase::ball_inverse_power:
        case DivergentCase::complement_positive_power:
        case DivergentCase::logarithmic:
            return true;
    }
    return true;
}

}  // namespace dyfrac
