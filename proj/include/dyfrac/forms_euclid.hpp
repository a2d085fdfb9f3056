#ifndef DYFRAC_FORMS_EUCLID_HPP
#define DYFRAC_FORMS_EUCLID_HPP

#include "dyfrac/dyadic.hpp"
#include "dyfrac/forms_dyadic.hpp"
#include "dyfrac/haar.hpp"

namespace dyfrac {

/// Exponent p of the kernel |x - y|^p.
struct KernelExponent {
    double p;

    static KernelExponent position(FormParameter s) { return {2.0 * s - 1.0}; }
    static KernelExponent energy(FormParameter s) { return {-1.0 - 2.0 * s}; }
};

/// iint_{[a,b] x [c,d]} |x - y|^p dx dy, exact via the double antiderivative
/// t^(p+2) / ((p+1)(p+2)).
///
/// The rectangles must be identical (requires p > -1) or have disjoint
/// interiors (requires p > -2). Far-apart rectangles use a binomial series
/// instead of the cancelling four-term difference.
double kernel_rect_integral(KernelExponent p, double a, double b, double c, double d);

/// Euclidean position form of |f|:
///   Q(|f|) = iint |x-y|^(2s-1) |f(x)| |f(y)| dx dy.
FormEvaluation position_quadratic(const StepFunction& f, FormParameter s);

/// Euclidean energy form
///   E(f) = iint (f(x)-f(y))^2 |x-y|^(-1-2s) dx dy
/// over the real line. Cells between the first and last support cell are
/// treated uniformly (zeros included); the two exterior rays are closed forms.
///
/// Cost is quadratic in the number of grid cells spanned by the support.
FormEvaluation energy_quadratic(const StepFunction& f, FormParameter s);

/// |I|^(2s) / (s (2s+1)).
double haar_position_euclid_closed(const DyadicInterval& interval, FormParameter s);
/// 6 |I|^(-2s) / (s (1-2s)).
double haar_energy_euclid_closed(const DyadicInterval& interval, FormParameter s);
/// 6 / (s^2 (1 - 4 s^2)).
double haar_product_euclid_closed(FormParameter s);

/// The energy of a Haar function as the integral actually evaluates:
/// 2 (2^(2s+1) - 1) |I|^(-2s) / (s (1-2s)). The inner-pair integral over
/// I_- x I_+ carries a factor 2^(2s) - 1 that the constant 6 above omits;
/// the two agree only in the limit s -> 1/2.
double haar_energy_euclid_exact(const DyadicInterval& interval, FormParameter s);
/// 2 (2^(2s+1) - 1) / (s^2 (1 - 4 s^2)).
double haar_product_euclid_exact(FormParameter s);

/// inf_a int (x-a)^2 f(x)^2 dx, i.e. the central second moment of f^2
/// without dividing by ||f||^2. For ||f|| = 1 this is the variance of |f|^2.
/// Throws InvalidParameter for the zero function.
double variance(const StepFunction& f);

}  // namespace dyfrac

#endif  // DYFRAC_FORMS_EUCLID_HPP
