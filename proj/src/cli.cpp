#include "dyfrac/cli.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dyfrac/errors.hpp"
#include "dyfrac/forms_dyadic.hpp"
#include "dyfrac/forms_euclid.hpp"
#include "dyfrac/io.hpp"
#include "dyfrac/oracle.hpp"
#include "dyfrac/uncertainty.hpp"
#include "dyfrac/verify.hpp"

namespace dyfrac {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    double s = 0.25;
    double s_min = 0.01;
    double s_max = 0.49;
    int steps = 49;
    int trials = 100;
    std::uint64_t seed = 42;
    std::string levels;
    std::string format = "csv";
    std::string input;
    std::string output;
    std::optional<double> tolerance;
    bool plot_data = false;
    bool single_haar = false;
    int max_coefficients = 64;
    std::string theorem = "both";
    std::string method;
    std::string form;
    std::string fault;
    std::int64_t samples = 1000000;
};

std::pair<int, int> parse_levels(const std::string& text, std::pair<int, int> fallback) {
    if (text.empty()) return fallback;
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw UsageError("--levels expects j_min..j_max");
    int lo = 0, hi = 0;
    const auto read = [](std::string_view part, int& v) {
        const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        return ec == std::errc() && end == part.data() + part.size();
    };
    const std::string_view all(text);
    if (!read(all.substr(0, dots), lo) || !read(all.substr(dots + 2), hi) || lo > hi) {
        throw UsageError("--levels expects j_min..j_max with j_min <= j_max");
    }
    return {lo, hi};
}

std::vector<double> s_grid(const Options& o) {
    if (!(o.s_min >= 0.01 && o.s_max <= 0.49 && o.s_min < o.s_max)) {
        throw UsageError("need 0.01 <= --s-min < --s-max <= 0.49");
    }
    if (o.steps < 2) throw UsageError("--steps must be at least 2");
    std::vector<double> grid;
    for (int i = 0; i < o.steps; ++i) {
        grid.push_back(i + 1 == o.steps ? o.s_max : o.s_min + (o.s_max - o.s_min) * i / (o.steps - 1));
    }
    return grid;
}

std::string csv_line(std::initializer_list<double> values) {
    std::string line;
    for (double v : values) {
        if (!line.empty()) line += ',';
        line += format_real(v);
    }
    return line;
}

int cmd_gamma_table(const Options& o, std::ostream& out) {
    const auto grid = s_grid(o);
    if (o.plot_data) {
        out << "s,gamma\n";
        for (double s : grid) out << csv_line({s, gamma(s)}) << '\n';
        return exit_code::ok;
    }
    if (o.format == "json") {
        Json rows = Json::array();
        for (double s : grid) {
            rows.push_back({{"s", s},
                            {"gamma1", gamma1(s)},
                            {"gamma2", gamma2(s)},
                            {"gamma", gamma(s)},
                            {"euclid_haar_product", haar_product_euclid_closed(s)},
                            {"euclid_haar_product_exact", haar_product_euclid_exact(s)}});
        }
        out << rows.dump(2) << '\n';
        return exit_code::ok;
    }
    out << "s,gamma1,gamma2,gamma,euclid_haar_product,euclid_haar_product_exact\n";
    for (double s : grid) {
        out << csv_line({s, gamma1(s), gamma2(s), gamma(s), haar_product_euclid_closed(s), haar_product_euclid_exact(s)})
            << '\n';
    }
    return exit_code::ok;
}

int cmd_verify_lemmas(const Options& o, std::ostream& out, std::ostream& err) {
    const FormParameter s(o.s);
    VerifyOptions v;
    std::tie(v.level_min, v.level_max) = parse_levels(o.levels, {-3, 3});
    if (v.level_max - v.level_min > 40) throw UsageError("level range too wide");
    if (o.tolerance) {
        if (!(*o.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
        v.tolerance = *o.tolerance;
    }
    if (o.fault == "gamma2") v.gamma2_factor = 1.0 + 1e-6;

    const auto lines = verify_identities(s, v);
    const bool ok = all_pass(lines);
    if (o.format == "json") {
        Json checks = Json::array();
        for (const auto& l : lines) {
            checks.push_back({{"name", l.name},
                              {"description", l.description},
                              {"deviation", l.deviation},
                              {"tolerance", l.tolerance},
                              {"pass", l.pass},
                              {"informational", l.informational}});
        }
        out << Json{{"s", o.s}, {"pass", ok}, {"checks", std::move(checks)}}.dump(2) << '\n';
    } else {
        out << "s=" << format_real(o.s) << " levels=" << v.level_min << ".." << v.level_max
            << " tolerance=" << format_real(v.tolerance) << '\n';
        for (const auto& l : lines) {
            const char* tag = l.informational ? "INFO" : (l.pass ? "PASS" : "FAIL");
            out << tag << ' ' << l.name << " deviation=" << format_real(l.deviation)
                << " tolerance=" << format_real(l.tolerance) << " : " << l.description << '\n';
        }
        out << (ok ? "all checks passed\n" : "some checks FAILED\n");
    }
    for (const auto& l : lines) {
        if (!l.pass && !l.informational) err << "failed check: " << l.name << " (" << l.description << ")\n";
    }
    return ok ? exit_code::ok : exit_code::verification_failed;
}

SweepConfig sweep_config(const Options& o, std::vector<double> grid) {
    SweepConfig c;
    c.s_grid = std::move(grid);
    c.trials = o.trials;
    c.seed = o.seed;
    c.max_coefficients = o.max_coefficients;
    std::tie(c.level_min, c.level_max) = parse_levels(o.levels, {-4, 6});
    c.single_haar = o.single_haar;
    if (c.trials < 0) throw UsageError("--trials must be non-negative");
    validate(c);
    return c;
}

DyadicPath dyadic_path(const Options& o) {
    if (o.method.empty() || o.method == "spectral") return DyadicPath::spectral;
    if (o.method == "direct") return DyadicPath::direct;
    throw UsageError("--method must be spectral or direct here");
}

int cmd_verify_inequality(const Options& o, std::ostream& out) {
    if (!(o.s >= 0.01 && o.s <= 0.49)) throw UsageError("--s must lie in [0.01, 0.49]");
    const auto config = sweep_config(o, {o.s});
    const auto path = dyadic_path(o);
    const bool dyadic = o.theorem != "euclid";
    const bool euclid = o.theorem != "dyadic";

    std::vector<UncertaintyReport> dyadic_rows, euclid_rows;
    for (int t = 0; t < config.trials; ++t) {
        const auto seed = trial_seed(config.seed, std::uint64_t(t));
        if (dyadic) dyadic_rows.push_back(dyadic_uncertainty(random_wave_function(seed, config), o.s, path));
        if (euclid) {
            const StepFunction f = config.single_haar
                                       ? haar_step(random_wave_function(seed, config).coefficients().begin()->first)
                                       : random_step_function(seed);
            euclid_rows.push_back(euclid_uncertainty(f, o.s));
        }
    }

    bool ok = true;
    for (const auto* rows : {&dyadic_rows, &euclid_rows}) {
        for (const auto& r : *rows) ok = ok && r.pass;
    }
    if (o.format == "json") {
        Json doc = Json::object();
        const auto block = [](const std::vector<UncertaintyReport>& rows) {
            Json a = Json::array();
            for (const auto& r : rows) a.push_back(to_json(r));
            return a;
        };
        if (dyadic) doc["dyadic"] = block(dyadic_rows);
        if (euclid) doc["euclid"] = block(euclid_rows);
        doc["pass"] = ok;
        out << doc.dump(2) << '\n';
    } else {
        if (dyadic) write_reports_csv(out, dyadic_rows);
        if (euclid) write_reports_csv(out, euclid_rows);
    }
    return ok ? exit_code::ok : exit_code::verification_failed;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read input file " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cmd_eval_form(const Options& o, std::ostream& out, std::ostream& err) {
    const FormParameter s(o.s);
    const FunctionInput input = parse_function(read_file(o.input));
    const auto* expansion = std::get_if<HaarExpansion>(&input);
    const StepFunction f = expansion ? synthesize(*expansion) : std::get<StepFunction>(input);
    const std::string method = o.method.empty() ? "direct" : o.method;
    const bool dyadic_form = o.form == "Qdelta" || o.form == "Edelta";

    FormEvaluation result;
    if (o.form == "variance") {
        if (method != "direct") throw UsageError("variance has only the direct method");
        result = {variance(f), Method::direct, 0.0, {}};
    } else if (method == "spectral") {
        if (!dyadic_form) throw UsageError("spectral evaluation applies to Qdelta and Edelta only");
        if (!expansion) throw UsageError("spectral evaluation needs a Haar expansion input");
        result = o.form == "Qdelta" ? position_spectral(*expansion, s) : energy_spectral(*expansion, s);
    } else if (method == "direct") {
        if (o.form == "Qdelta") result = position_direct(f, s);
        if (o.form == "Edelta") result = energy_direct(f, s);
        if (o.form == "Qeuclid") result = position_quadratic(f, s);
        if (o.form == "Eeuclid") result = energy_quadratic(f, s);
    } else {
        const FormKind kind = (o.form == "Qdelta" || o.form == "Qeuclid") ? FormKind::position : FormKind::energy;
        const OracleEstimate est = dyadic_form ? dyadic_stratified_oracle(f, kind, s, o.seed, o.samples)
                                               : euclid_adaptive_oracle(f, kind, s, o.tolerance.value_or(1e-10));
        result = {est.value, Method::oracle, est.bound, s.warning()};
    }

    if (o.format == "json") {
        out << to_json(result).dump(2) << '\n';
    } else {
        out << "value,method,errorBound\n"
            << format_real(result.value) << ',' << to_string(result.method) << ',' << format_real(result.error_bound)
            << '\n';
    }
    if (!result.warning.empty()) err << "warning: " << result.warning << '\n';
    return exit_code::ok;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const auto config = sweep_config(o, s_grid(o));
    const auto result = sweep(config, dyadic_path(o));
    bool ok = true;
    for (const auto& row : result.rows) ok = ok && row.passes == row.trials;

    const auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    if (o.plot_data) {
        out << "s,gamma\n";
        for (const auto& row : result.rows) out << csv_line({row.s, row.gamma}) << '\n';
        out << "\ns,min_product\n";
        for (const auto& row : result.rows) {
            if (row.min_product) out << csv_line({row.s, *row.min_product}) << '\n';
        }
    } else if (o.format == "json") {
        Json rows = Json::array();
        for (const auto& row : result.rows) {
            Json j = {{"s", row.s}, {"gamma", row.gamma}};
            j["minProduct"] = row.min_product ? Json(*row.min_product) : Json(nullptr);
            j["minSlack"] = row.min_slack ? Json(*row.min_slack) : Json(nullptr);
            j["passes"] = row.passes;
            j["trials"] = row.trials;
            rows.push_back(std::move(j));
        }
        out << Json{{"rows", std::move(rows)}, {"pass", ok}}.dump(2) << '\n';
    } else {
        out << "s,gamma,min_product,min_slack,passes,trials\n";
        for (const auto& row : result.rows) {
            out << format_real(row.s) << ',' << format_real(row.gamma) << ',' << opt(row.min_product) << ','
                << opt(row.min_slack) << ',' << row.passes << ',' << row.trials << '\n';
        }
    }
    return ok ? exit_code::ok : exit_code::verification_failed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Dyadic and Euclidean fractional uncertainty: constants, identities, inequalities."};
    app.name(args.empty() ? "dyfrac" : args.front());
    app.require_subcommand(1);
    const std::vector<std::string> formats{"csv", "json"};

    auto* gamma_table = app.add_subcommand("gamma-table", "Table of gamma_1, gamma_2, gamma and the Haar products");
    gamma_table->add_option("--s-min", o.s_min, "Smallest s")->capture_default_str();
    gamma_table->add_option("--s-max", o.s_max, "Largest s")->capture_default_str();
    gamma_table->add_option("--steps", o.steps, "Number of s values")->capture_default_str();

    auto* verify = app.add_subcommand("verify-lemmas", "Closed form / exact evaluator / oracle agreement suite");
    verify->add_option("--s", o.s, "Form order")->capture_default_str();
    verify->add_option("--levels", o.levels, "Haar levels j_min..j_max (default -3..3)");
    verify->add_option("--tolerance", o.tolerance, "Relative tolerance for exact checks (default 1e-10)");
    verify->add_option("--inject-fault", o.fault, "Test hook: corrupt a constant")->check(CLI::IsMember({"gamma2"}));

    auto* inequality = app.add_subcommand("verify-inequality", "Uncertainty inequality on seeded random functions");
    inequality->add_option("--s", o.s, "Form order")->capture_default_str();
    inequality->add_option("--trials", o.trials, "Number of random functions")->capture_default_str();
    inequality->add_option("--seed", o.seed, "Base seed")->capture_default_str();
    inequality->add_option("--levels", o.levels, "Haar levels j_min..j_max (default -4..6)");
    inequality->add_option("--max-coefficients", o.max_coefficients, "Coefficients per expansion")->capture_default_str();
    inequality->add_flag("--single-haar", o.single_haar, "Use single Haar functions (equality case)");
    inequality->add_option("--theorem", o.theorem, "dyadic, euclid or both")
        ->check(CLI::IsMember({"dyadic", "euclid", "both"}))
        ->capture_default_str();
    inequality->add_option("--method", o.method, "Dyadic evaluation path: spectral or direct")
        ->check(CLI::IsMember({"spectral", "direct"}));

    auto* eval = app.add_subcommand("eval-form", "Evaluate one form on a serialized function");
    eval->add_option("--input", o.input, "Step function or Haar expansion JSON file")->required();
    eval->add_option("--form", o.form, "Qdelta, Edelta, Qeuclid, Eeuclid or variance")
        ->required()
        ->check(CLI::IsMember({"Qdelta", "Edelta", "Qeuclid", "Eeuclid", "variance"}));
    eval->add_option("--s", o.s, "Form order")->capture_default_str();
    eval->add_option("--method", o.method, "direct, spectral or oracle (default direct)")
        ->check(CLI::IsMember({"direct", "spectral", "oracle"}));
    eval->add_option("--seed", o.seed, "Monte Carlo seed for the dyadic oracle")->capture_default_str();
    eval->add_option("--samples", o.samples, "Monte Carlo samples for the dyadic oracle")->capture_default_str();
    eval->add_option("--tolerance", o.tolerance, "Relative tolerance of the Euclidean oracle");

    auto* sweep_cmd = app.add_subcommand("sweep", "Minimum uncertainty product over an s grid");
    sweep_cmd->add_option("--s-min", o.s_min, "Smallest s")->capture_default_str();
    sweep_cmd->add_option("--s-max", o.s_max, "Largest s")->capture_default_str();
    sweep_cmd->add_option("--steps", o.steps, "Number of s values")->capture_default_str();
    sweep_cmd->add_option("--trials", o.trials, "Random functions per s")->capture_default_str();
    sweep_cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
    sweep_cmd->add_option("--levels", o.levels, "Haar levels j_min..j_max (default -4..6)");
    sweep_cmd->add_option("--max-coefficients", o.max_coefficients, "Coefficients per expansion")->capture_default_str();
    sweep_cmd->add_flag("--single-haar", o.single_haar, "Use single Haar functions");
    sweep_cmd->add_option("--method", o.method, "spectral or direct")->check(CLI::IsMember({"spectral", "direct"}));

    for (auto* sub : {gamma_table, verify, inequality, eval, sweep_cmd}) {
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats))->capture_default_str();
        sub->add_option("--output", o.output, "Write to this file instead of stdout");
        if (sub == gamma_table || sub == sweep_cmd) sub->add_flag("--plot-data", o.plot_data, "Two-column series");
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    }

    std::ostringstream buffer;
    std::ostream& sink = o.output.empty() ? out : buffer;
    int code = exit_code::ok;
    try {
        if (gamma_table->parsed()) code = cmd_gamma_table(o, sink);
        if (verify->parsed()) code = cmd_verify_lemmas(o, sink, err);
        if (inequality->parsed()) code = cmd_verify_inequality(o, sink);
        if (eval->parsed()) code = cmd_eval_form(o, sink, err);
        if (sweep_cmd->parsed()) code = cmd_sweep(o, sink);
    } catch (const ParseError& e) {
        err << "parse error";
        if (e.position() != ParseError::npos) err << " at byte " << e.position();
        err << ": " << e.what() << '\n';
        return exit_code::usage;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::verification_failed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }

    if (!o.output.empty()) {
        std::ofstream file(o.output, std::ios::binary);
        if (!(file << buffer.str())) {
            err << "error: cannot write " << o.output << '\n';
            return exit_code::usage;
        }
    }
    return code;
}

}  // namespace dyfrac
