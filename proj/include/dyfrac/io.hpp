#ifndef DYFRAC_IO_HPP
#define DYFRAC_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dyfrac/dyadic.hpp"
#include "dyfrac/forms_dyadic.hpp"
#include "dyfrac/haar.hpp"
#include "dyfrac/oracle.hpp"
#include "dyfrac/uncertainty.hpp"

namespace dyfrac {

using Json = nlohmann::ordered_json;

Json to_json(const DyadicInterval& interval);
Json to_json(const StepFunction& f);
Json to_json(const HaarExpansion& e);
Json to_json(const FormEvaluation& r);
Json to_json(const OracleEstimate& r);
Json to_json(const UncertaintyReport& r);

/// {"gridLevel": J, "cells": [{"k": int, "v": real}, ...]}; cells may come in
/// any order but offsets must be distinct and non-negative.
StepFunction parse_step_function(std::string_view text);
/// {"coeffs": [{"j": int, "k": int, "c": real}, ...]}; intervals distinct.
HaarExpansion parse_expansion(std::string_view text);

using FunctionInput = std::variant<StepFunction, HaarExpansion>;

/// Either representation, told apart by the "cells" or "coeffs" key.
/// Throws ParseError carrying the byte offset of a syntax error.
FunctionInput parse_function(std::string_view text);

/// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_real(double x);

inline constexpr const char* report_csv_header = "s,gamma,Q,E,product,norm4,slack,pass";

std::string report_csv_row(const UncertaintyReport& r);
/// Parses one row produced by report_csv_row. Throws ParseError.
UncertaintyReport parse_report_csv_row(std::string_view line);

void write_reports_csv(std::ostream& out, const std::vector<UncertaintyReport>& reports);

}  // namespace dyfrac

#endif  // DYFRAC_IO_HPP
