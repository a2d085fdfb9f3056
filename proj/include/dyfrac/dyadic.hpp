#ifndef DYFRAC_DYADIC_HPP
#define DYFRAC_DYADIC_HPP

#include <compare>
#include <cstdint>

namespace dyfrac {

/// The dyadic interval (k 2^-j, (k+1) 2^-j], left-open and right-closed.
/// Named by the exact integer pair (level j, offset k); j may be negative.
struct DyadicInterval {
    int level = 0;
    std::int64_t offset = 0;

    constexpr DyadicInterval() = default;
    DyadicInterval(int level, std::int64_t offset);

    double measure() const;
    double left() const;
    double right() const;

    DyadicInterval parent() const;
    DyadicInterval left_half() const;
    DyadicInterval right_half() const;

    /// The ancestor of this interval at a coarser (or equal) level.
    DyadicInterval ancestor(int coarser_level) const;

    /// True when `other` is a (not necessarily proper) subset of this interval.
    bool contains(const DyadicInterval& other) const;

    friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

enum class Overlap { disjoint, equal, contains, contained };

/// Relative position of two dyadic intervals. Partial overlap cannot occur.
Overlap relation(const DyadicInterval& a, const DyadicInterval& b);

/// Smallest dyadic interval containing both.
DyadicInterval common_ancestor(const DyadicInterval& a, const DyadicInterval& b);

/// n 2^-e, stored canonically (n odd, or n = 0 with e = 0).
class DyadicRational {
public:
    constexpr DyadicRational() = default;
    DyadicRational(std::int64_t numerator, int exponent);

    /// Every finite double is a dyadic rational; the conversion is exact.
    static DyadicRational from_double(double x);

    std::int64_t numerator() const { return numerator_; }
    int exponent() const { return exponent_; }
    double to_double() const;

    /// Exact difference. Throws std::overflow_error if the result does not
    /// fit the 64-bit numerator.
    friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
    friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);

    friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);
    friend bool operator==(const DyadicRational& a, const DyadicRational& b) = default;

    /// Index k of the level-j interval (k 2^-j, (k+1) 2^-j] containing this
    /// value, i.e. ceil(x 2^j) - 1. Exact.
    std::int64_t cell_index(int level) const;

private:
    std::int64_t numerator_ = 0;
    int exponent_ = 0;
};

/// x in (k 2^-j, (k+1) 2^-j]. Exact: no floating-point equality involved.
bool contains(const DyadicInterval& interval, double x);
bool contains(const DyadicInterval& interval, const DyadicRational& x);

/// Origin of a translated grid D_{x0} = x0 + D.
struct GridOrigin {
    DyadicRational x0;

    GridOrigin() = default;
    explicit GridOrigin(DyadicRational shift) : x0(shift) {}
    explicit GridOrigin(double shift) : x0(DyadicRational::from_double(shift)) {}
};

inline constexpr int default_resolution = 52;

/// The dyadic metric on (x0, infinity) for the grid shifted by `origin`.
///
/// Points are located in the shifted grid at `resolution` binary digits
/// using exact rational arithmetic, and the common ancestor is found from
/// the shared prefix of the two cell indices. Two distinct points that share
/// a cell at the resolution level are reported at distance 2^-resolution.
/// Points too large for 63-bit cell indices at that resolution are located
/// at the finest level that still fits.
class DyadicMetric {
public:
    explicit DyadicMetric(GridOrigin origin = {}, int resolution = default_resolution);

    const GridOrigin& origin() const { return origin_; }
    int resolution() const { return resolution_; }

    /// delta(x, y); 0 iff x == y. Throws InvalidParameter for points <= x0.
    double distance(double x, double y) const;

    /// B(x, r): the largest interval of the shifted grid containing x with
    /// measure strictly less than r. Coordinates are relative to x0.
    DyadicInterval ball(double x, double r) const;

    /// Interval of the shifted grid at `level` containing x (relative to x0).
    DyadicInterval cell(double x, int level) const;

private:
    DyadicRational relative(double x) const;

    GridOrigin origin_;
    int resolution_;
};

double dyadic_distance(double x, double y, const GridOrigin& origin = {});
DyadicInterval dyadic_ball(double x, double r, const GridOrigin& origin = {});

/// Measure of the delta level set of scale 2^k |I| seen from any x in I:
/// for k >= 1 the outer shell {y not in I : delta(x,y) = 2^k |I|}, for k <= 0
/// the inner shell {y in I : delta(x,y) = 2^k |I|}. Both equal 2^(k-1) |I|.
double level_set_measure(const DyadicInterval& interval, int k);

/// 1 - 2^-a, accurate for small a.
double one_minus_pow2(double a);

/// Integral over the delta-ball I of delta(x,y)^(alpha-1) dy, x in I:
/// |I|^alpha / (2 (1 - 2^-alpha)). Throws DivergentIntegral for alpha <= 0.
double integral_ball_power(double alpha, const DyadicInterval& ball);
double integral_ball_power(double alpha, double ball_measure);

/// Integral over the complement of the delta-ball I of
/// delta(x,y)^(-1-alpha) dy: 2^-alpha |I|^-alpha / (2 (1 - 2^-alpha)).
double integral_complement_power(double alpha, const DyadicInterval& ball);
double integral_complement_power(double alpha, double ball_measure);

enum class DivergentCase { ball_inverse_power, complement_positive_power, logarithmic };

/// The three delta-integrals that diverge for every alpha > 0: the
/// kernel delta^(-1-alpha) on a ball, delta^(alpha-1) off a ball, and
/// 1/delta on either. Always true.
bool divergence_witness(DivergentCase which);

}  // namespace dyfrac

#endif  // DYFRAC_DYADIC_HPP
