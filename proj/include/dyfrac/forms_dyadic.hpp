#ifndef DYFRAC_FORMS_DYADIC_HPP
#define DYFRAC_FORMS_DYADIC_HPP

#include <string>

#include "dyfrac/dyadic.hpp"
#include "dyfrac/haar.hpp"

namespace dyfrac {

/// Recommended closed range for the order s. Values inside (0, 1/2) but
/// outside this range are accepted and flagged.
struct ParameterRange {
    double lo = 0.01;
    double hi = 0.49;
};

/// Form order s, 0 < s < 1/2.
class FormParameter {
public:
    /// Throws InvalidParameter outside the open interval (0, 1/2).
    FormParameter(double s, ParameterRange recommended = {});  // NOLINT: implicit by intent

    double value() const { return s_; }
    operator double() const { return s_; }  // NOLINT
    bool recommended() const { return recommended_; }
    /// Empty inside the recommended range.
    std::string warning() const;

private:
    double s_;
    ParameterRange range_;
    bool recommended_;
};

enum class Method { direct, spectral, oracle };

const char* to_string(Method m);

struct FormEvaluation {
    double value = 0.0;
    Method method = Method::direct;
    double error_bound = 0.0;
    std::string warning;
};

/// gamma_1(s) = (2^(1-2s) - 1) / (2 (1 - 2^-2s)).
double gamma1(FormParameter s);
/// gamma_2(s) = (2 - 2^-2s) / (1 - 2^-2s).
double gamma2(FormParameter s);

/// Q_s^delta(h_I) = gamma_1(s) |I|^(2s).
double haar_position_closed(const DyadicInterval& interval, FormParameter s);
/// E_s^delta(h_I) = gamma_2(s) |I|^(-2s).
double haar_energy_closed(const DyadicInterval& interval, FormParameter s);

/// Exact dyadic position form
///   Q(f, g) = iint delta(x,y)^(2s-1) f(x) g(y) dx dy
/// over (0, inf)^2. Distinct grid cells see a constant delta equal to the
/// measure of their smallest common ancestor, so the cross terms are summed
/// by climbing the ancestor tree once; each cell adds its own closed-form
/// self-interaction.
FormEvaluation position_bilinear_direct(const StepFunction& f, const StepFunction& g, FormParameter s);

/// Exact dyadic energy form
///   E(f, g) = iint (f(x)-f(y)) (g(x)-g(y)) delta(x,y)^(-1-2s) dx dy.
/// Same ancestor-tree summation, plus the closed-form tail for pairs with
/// one point outside the common root interval.
FormEvaluation energy_bilinear_direct(const StepFunction& f, const StepFunction& g, FormParameter s);

FormEvaluation position_direct(const StepFunction& f, FormParameter s);
FormEvaluation energy_direct(const StepFunction& f, FormParameter s);

/// gamma_1(s) sum c_I^2 |I|^(2s).
FormEvaluation position_spectral(const HaarExpansion& e, FormParameter s);
/// gamma_2(s) sum c_I^2 |I|^(-2s).
FormEvaluation energy_spectral(const HaarExpansion& e, FormParameter s);

}  // namespace dyfrac

#endif  // DYFRAC_FORMS_DYADIC_HPP
