#include "dyfrac/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "dyfrac/errors.hpp"

namespace dyfrac {

Json to_json(const DyadicInterval& interval) { return {{"j", interval.level}, {"k", interval.offset}}; }

Json to_json(const StepFunction& f) {
    Json cells = Json::array();
    for (const auto& c : f.cells()) cells.push_back({{"k", c.k}, {"v", c.v}});
    return {{"gridLevel", f.grid_level()}, {"cells", std::move(cells)}};
}

Json to_json(const HaarExpansion& e) {
    Json coeffs = Json::array();
    for (const auto& [interval, c] : e.coefficients()) {
        coeffs.push_back({{"j", interval.level}, {"k", interval.offset}, {"c", c}});
    }
    return {{"coeffs", std::move(coeffs)}};
}

Json to_json(const FormEvaluation& r) {
    Json j = {{"value", r.value}, {"method", to_string(r.method)}, {"errorBound", r.error_bound}};
    if (!r.warning.empty()) j["warning"] = r.warning;
    return j;
}

Json to_json(const OracleEstimate& r) { return {{"value", r.value}, {"bound", r.bound}, {"n", r.n}}; }

Json to_json(const UncertaintyReport& r) {
    return {{"s", r.s},         {"gamma", r.gamma_bound}, {"Q", r.position}, {"E", r.energy},
            {"product", r.product}, {"norm4", r.norm_fourth},  {"slack", r.slack}, {"pass", r.pass}};
}

namespace {

Json parse_document(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports the 1-based index of the last byte read.
        const std::size_t position = e.byte == 0 ? 0 : e.byte - 1;
        throw ParseError("malformed JSON at byte " + std::to_string(position), position);
    }
}

const Json& member(const Json& object, const char* key, const std::string& where) {
    if (!object.is_object()) throw ParseError(where + ": expected an object");
    const auto it = object.find(key);
    if (it == object.end()) throw ParseError(where + ": missing key \"" + key + "\"");
    return *it;
}

std::int64_t integer(const Json& object, const char* key, const std::string& where) {
    const Json& v = member(object, key, where);
    if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

double real(const Json& object, const char* key, const std::string& where) {
    const Json& v = member(object, key, where);
    if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
    return v.get<double>();
}

int level_of(std::int64_t j, const std::string& where) {
    if (j < -4096 || j > 4096) throw ParseError(where + ": level out of range");
    return int(j);
}

StepFunction step_function_from(const Json& doc) {
    const int level = level_of(integer(doc, "gridLevel", "$"), "$.gridLevel");
    const Json& cells = member(doc, "cells", "$");
    if (!cells.is_array()) throw ParseError("$.cells: expected an array");
    std::map<std::int64_t, double> sorted;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string where = "$.cells[" + std::to_string(i) + "]";
        const auto k = integer(cells[i], "k", where);
        const double v = real(cells[i], "v", where);
        if (k < 0) throw ParseError(where + ".k: offsets must be non-negative");
        if (!sorted.emplace(k, v).second) throw ParseError(where + ".k: duplicate offset");
    }
    std::vector<Cell> out;
    out.reserve(sorted.size());
    for (const auto& [k, v] : sorted) out.push_back({k, v});
    return {level, std::move(out)};
}

HaarExpansion expansion_from(const Json& doc) {
    const Json& coeffs = member(doc, "coeffs", "$");
    if (!coeffs.is_array()) throw ParseError("$.coeffs: expected an array");
    HaarExpansion::Map map;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const std::string where = "$.coeffs[" + std::to_string(i) + "]";
        const int j = level_of(integer(coeffs[i], "j", where), where + ".j");
        const auto k = integer(coeffs[i], "k", where);
        const double c = real(coeffs[i], "c", where);
        if (k < 0) throw ParseError(where + ".k: offsets must be non-negative");
        if (!map.emplace(DyadicInterval(j, k), c).second) throw ParseError(where + ": duplicate interval");
    }
    return HaarExpansion(std::move(map));
}

}  // namespace

StepFunction parse_step_function(std::string_view text) { return step_function_from(parse_document(text)); }

HaarExpansion parse_expansion(std::string_view text) { return expansion_from(parse_document(text)); }

FunctionInput parse_function(std::string_view text) {
    const Json doc = parse_document(text);
    if (!doc.is_object()) throw ParseError("$: expected an object");
    const bool cells = doc.contains("cells");
    const bool coeffs = doc.contains("coeffs");
    if (cells == coeffs) throw ParseError("$: expected exactly one of \"cells\" or \"coeffs\"");
    if (cells) return step_function_from(doc);
    return expansion_from(doc);
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string report_csv_row(const UncertaintyReport& r) {
    std::string row;
    for (double v : {r.s, r.gamma_bound, r.position, r.energy, r.product, r.norm_fourth, r.slack}) {
        row += format_real(v);
        row += ',';
    }
    row += r.pass ? "true" : "false";
    return row;
}

UncertaintyReport parse_report_csv_row(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    if (fields.size() != 8) throw ParseError("report row needs 8 fields");
    double values[7];
    std::size_t offset = 0;
    for (int i = 0; i < 7; ++i) {
        const auto f = fields[std::size_t(i)];
        const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
        if (ec != std::errc() || end != f.data() + f.size()) {
            throw ParseError("report row field " + std::to_string(i + 1) + " is not a number", offset);
        }
        offset += f.size() + 1;
    }
    if (fields[7] != "true" && fields[7] != "false") throw ParseError("pass field must be true or false", offset);
    UncertaintyReport r;
    r.s = values[0];
    r.gamma_bound = values[1];
    r.position = values[2];
    r.energy = values[3];
    r.product = values[4];
    r.norm_fourth = values[5];
    r.slack = values[6];
    r.pass = fields[7] == "true";
    return r;
}

void write_reports_csv(std::ostream& out, const std::vector<UncertaintyReport>& reports) {
    out << report_csv_header << '\n';
    for (const auto& r : reports) out << report_csv_row(r) << '\n';
}

}  // namespace dyfrac
