#include "rankalloc/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rankalloc/allocator.hpp"
#include "rankalloc/mc.hpp"
#include "rankalloc/orderstats.hpp"
#include "rankalloc/riskaverse.hpp"

namespace rankalloc::cli {
namespace {

constexpr double kOracleSigmas = 4.0;

OutputFormat parse_format(const std::string& text) {
    if (text == "table") return OutputFormat::Table;
    if (text == "csv") return OutputFormat::Csv;
    if (text == "jsonl" || text == "json-lines") return OutputFormat::JsonLines;
    throw ConfigError(fmt::format("unknown format '{}', expected table, csv or jsonl", text));
}

std::optional<double> parse_nu(const std::string& text) {
    if (text == "unknown") return std::nullopt;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError(fmt::format("--nu expects a number or 'unknown', got '{}'", text));
    return value;
}

// Shortest round-trip-friendly rendering for grid coordinates (0.5 -> "0.5", 1 -> "1").
std::string coord(double x) { return fmt::format("{:.10g}", x); }
std::string csv_num(double x) { return fmt::format("{:.6f}", x); }
std::string table_num(double x) { return fmt::format("{:.4f}", x); }

void check_common(const RunConfig& c) {
    if (c.n < 1) throw ConfigError(fmt::format("n must be >= 1, got {}", c.n));
    if (c.nu && !(*c.nu >= 0.0 && *c.nu <= 1.0)) throw ConfigError(fmt::format("nu must lie in [0, 1], got {}", *c.nu));
    if (!(c.a > 0.0)) throw ConfigError(fmt::format("a must be > 0, got {}", c.a));
    if (!(c.b >= 0.0)) throw ConfigError(fmt::format("b must be >= 0, got {}", c.b));
    if (!(c.c0 > 0.0)) throw ConfigError(fmt::format("c0 must be > 0, got {}", c.c0));
    if (!c.labels.empty() && c.labels.size() != static_cast<std::size_t>(c.n)) {
        throw ConfigError(fmt::format("{} labels given for n = {}", c.labels.size(), c.n));
    }
}

double require_nu(const RunConfig& c, const char* command) {
    if (!c.nu) throw ConfigError(fmt::format("'{}' needs a numeric nu; 'unknown' is only accepted by allocate", command));
    return *c.nu;
}

ModelParams to_params(const RunConfig& c, double nu) {
    ModelParams p;
    p.n = c.n;
    p.nu = nu;
    p.a = c.a;
    p.b = c.b;
    p.c0 = c.c0;
    return p;
}

std::vector<std::string> column_names(const RunConfig& c, const char* prefix) {
    std::vector<std::string> names;
    for (int i = 1; i <= c.n; ++i) {
        names.push_back(c.labels.empty() ? fmt::format("{}_{}", prefix, i) : c.labels[static_cast<std::size_t>(i - 1)]);
    }
    return names;
}

struct AllocationRow {
    Method method;
    WeightVector weights;
    std::optional<double> expected_output;
    std::optional<double> variance;
    std::optional<double> utility;
};

AllocationRow full_row(const WeightVector& w, const ModelParams& params, const MomentMatrix& cov, Method method) {
    const AllocationReport r = make_report(w, params, cov, method);
    return {method, r.weights, r.expected_output, r.variance, r.utility};
}

void render_allocation(const RunConfig& c, const std::vector<AllocationRow>& rows, std::optional<double> gap,
                       const std::string& note, std::ostream& out) {
    const auto names = column_names(c, "omega");
    const OutputFormat format = c.format.value_or(OutputFormat::Table);
    auto opt = [](const std::optional<double>& v, auto fmt_fn) { return v ? fmt_fn(*v) : std::string(); };

    if (format == OutputFormat::Csv) {
        out << "method";
        for (const auto& name : names) out << ',' << name;
        out << ",expected_output,variance,utility\n";
        for (const auto& row : rows) {
            out << to_string(row.method);
            for (double w : row.weights) out << ',' << csv_num(w);
            out << ',' << opt(row.expected_output, csv_num) << ',' << opt(row.variance, csv_num) << ','
                << opt(row.utility, csv_num) << '\n';
        }
        return;
    }
    if (format == OutputFormat::JsonLines) {
        for (const auto& row : rows) {
            nlohmann::ordered_json j;
            j["method"] = to_string(row.method);
            j["weights"] = row.weights.values();
            if (!c.labels.empty()) j["labels"] = c.labels;
            j["expected_output"] = row.expected_output ? nlohmann::ordered_json(*row.expected_output) : nullptr;
            j["variance"] = row.variance ? nlohmann::ordered_json(*row.variance) : nullptr;
            j["utility"] = row.utility ? nlohmann::ordered_json(*row.utility) : nullptr;
            out << j.dump() << '\n';
        }
        if (gap) out << nlohmann::ordered_json{{"dominance_gap", *gap}}.dump() << '\n';
        return;
    }

    fmt::print(out, "n = {}, nu = {}, a = {}, b = {}, c0 = {}\n", c.n, c.nu ? coord(*c.nu) : "unknown", coord(c.a),
               coord(c.b), coord(c.c0));
    std::size_t width = 9;
    for (const auto& name : names) width = std::max(width, name.size() + 2);
    fmt::print(out, "{:<15}", "method");
    for (const auto& name : names) fmt::print(out, "{:>{}}", name, width);
    fmt::print(out, "{:>17}{:>11}{:>11}\n", "expected_output", "variance", "utility");
    for (const auto& row : rows) {
        fmt::print(out, "{:<15}", to_string(row.method));
        for (double w : row.weights) fmt::print(out, "{:>{}}", table_num(w), width);
        fmt::print(out, "{:>17}{:>11}{:>11}\n", opt(row.expected_output, table_num), opt(row.variance, table_num),
                   opt(row.utility, table_num));
    }
    if (c.c0 != 1.0) {
        for (const auto& row : rows) {
            fmt::print(out, "{:<15}", fmt::format("{} capital", to_string(row.method)));
            for (double w : row.weights) fmt::print(out, "{:>{}}", table_num(w * c.c0), width);
            out << '\n';
        }
    }
    if (gap) fmt::print(out, "dominance gap B2 - B1 = {:.6g}\n", *gap);
    if (!note.empty()) out << "note: " << note << '\n';
}

void write_matrix_rows(const char* name, const MomentMatrix& m, std::string (*num)(double), std::ostream& out) {
    for (std::size_t r = 0; r < m.size(); ++r) {
        out << name << ',' << r + 1;
        for (std::size_t col = 0; col < m.size(); ++col) out << ',' << num(m(r, col));
        out << '\n';
    }
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ConfigError(fmt::format("bad grid component '{}' in '{}'", item, text));
        parts.push_back(value);
    }
    GridSpec g;
    if (parts.size() == 1) {
        g.start = g.stop = parts[0];
        g.step = 1.0;
    } else if (parts.size() == 3) {
        g.start = parts[0];
        g.stop = parts[1];
        g.step = parts[2];
    } else {
        throw ConfigError(fmt::format("grid '{}' must be <value> or <start:stop:step>", text));
    }
    if (!(g.step > 0.0)) throw ConfigError("grid step must be positive");
    if (!(g.start <= g.stop)) throw ConfigError("grid start must not exceed stop");
    return g;
}

std::vector<double> GridSpec::points() const {
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) {
        // Round away the representation noise of start + k * step.
        const double x = start + static_cast<double>(k) * step;
        out.push_back(std::stod(fmt::format("{:.12g}", x)));
    }
    return out;
}

void apply_config_json(const std::string& json_text, RunConfig& config) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "n") config.n = value.get<int>();
            else if (key == "nu") config.nu = value.is_string() ? parse_nu(value.get<std::string>()) : value.get<double>();
            else if (key == "a") config.a = value.get<double>();
            else if (key == "b") config.b = value.get<double>();
            else if (key == "c0") config.c0 = value.get<double>();
            else if (key == "labels") config.labels = value.get<std::vector<std::string>>();
            else if (key == "format") config.format = parse_format(value.get<std::string>());
            else if (key == "trials") config.trials = value.get<std::uint64_t>();
            else if (key == "seed") config.seed = value.get<std::uint64_t>();
            else if (key == "grid") config.grid = value.get<std::string>();
            else if (key == "points") config.points = value.get<int>();
            else if (key == "threads") config.threads = value.get<unsigned>();
            else if (key == "out") config.out_path = value.get<std::string>();
            else throw ConfigError(fmt::format("unknown config key '{}'", key));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("bad config value: {}", e.what()));
    }
}

int cmd_allocate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    check_common(c);
    std::vector<AllocationRow> rows;

    if (!c.nu) {
        const std::string note = "nu unknown: rule-of-thumb weights 2i/(n(n+1)), the nu = 1 sorted portfolio";
        err << "note: " << note << '\n';
        if (c.b > 0.0) err << "warning: b is ignored when nu is unknown\n";
        rows.push_back({Method::EWP, ewp_weights(c.n), {}, {}, {}});
        rows.push_back({Method::RuleOfThumb, rule_of_thumb_weights(c.n), {}, {}, {}});
        render_allocation(c, rows, std::nullopt, note, out);
        return exit_code::kOk;
    }

    const ModelParams params = to_params(c, *c.nu);
    const MomentMatrix cov = covariance_matrix(c.n, *c.nu);

    AllocationRow ewp = full_row(ewp_weights(c.n), params, cov, Method::EWP);
    // EWP has no ranking to exploit; its expected output is the unsorted one.
    ewp.expected_output = expected_output(ewp.weights, params, Pairing::Unsorted);
    ewp.utility = *ewp.expected_output - 0.5 * c.b * *ewp.variance;
    rows.push_back(ewp);
    rows.push_back(full_row(swp_weights(c.n, *c.nu), params, cov, Method::SWP));

    int code = exit_code::kOk;
    if (c.b > 0.0) {
        if (*c.nu == 0.0) {
            err << "note: output variance vanishes at nu = 0, so the SWP is already mean-variance optimal\n";
        } else {
            const OptimizationOutcome result = optimize_mean_variance(params);
            rows.push_back({Method::MeanVariance, result.report.weights, result.report.expected_output,
                            result.report.variance, result.report.utility});
            if (!result.converged) {
                err << fmt::format("error: mean-variance solver did not converge (stationarity {:.3g} after {} iterations)\n",
                                   result.stationarity, result.iterations);
                code = exit_code::kSolver;
            }
        }
    }
    const std::optional<double> gap = c.n > 1 ? std::optional<double>(dominance_gap(params)) : std::nullopt;
    render_allocation(c, rows, gap, "", out);
    return code;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream&) {
    check_common(c);
    require_nu(c, "sweep");  // the grid supplies nu; 'unknown' is still refused
    const std::vector<double> grid = GridSpec::parse(c.grid).points();
    for (double nu : grid) {
        if (!(nu >= 0.0 && nu <= 1.0)) throw ConfigError(fmt::format("grid point {} outside [0, 1]", nu));
    }
    const OutputFormat format = c.format.value_or(OutputFormat::Csv);
    const auto names = column_names(c, "omega");
    if (format == OutputFormat::JsonLines) {
        for (double nu : grid) {
            nlohmann::ordered_json j{{"nu", nu}, {"weights", swp_weights(c.n, nu).values()}};
            out << j.dump() << '\n';
        }
        return exit_code::kOk;
    }
    const bool csv = format == OutputFormat::Csv;
    out << (csv ? "nu" : fmt::format("{:>8}", "nu"));
    for (const auto& name : names) out << (csv ? "," + name : fmt::format("{:>10}", name));
    out << '\n';
    for (double nu : grid) {
        const WeightVector w = swp_weights(c.n, nu);
        out << (csv ? coord(nu) : fmt::format("{:>8}", coord(nu)));
        for (double x : w) out << (csv ? "," + csv_num(x) : fmt::format("{:>10}", table_num(x)));
        out << '\n';
    }
    return exit_code::kOk;
}

int cmd_covariance(const RunConfig& c, std::ostream& out, std::ostream&) {
    check_common(c);
    const double nu = require_nu(c, "covariance");
    if (nu == 0.0) {
        throw ConfigError(
            "covariance needs nu > 0: at nu = 0 every x^0 equals 1, the covariance matrix is zero and correlations "
            "cannot be evaluated");
    }
    const MomentMatrix cov = covariance_matrix(c.n, nu);
    const MomentMatrix rho = correlation_from_covariance(cov);
    const OutputFormat format = c.format.value_or(OutputFormat::Csv);

    if (format == OutputFormat::JsonLines) {
        auto rows = [](const MomentMatrix& m) {
            std::vector<std::vector<double>> v(m.size(), std::vector<double>(m.size()));
            for (std::size_t r = 0; r < m.size(); ++r)
                for (std::size_t col = 0; col < m.size(); ++col) v[r][col] = m(r, col);
            return v;
        };
        out << nlohmann::ordered_json{{"matrix", "covariance"}, {"nu", nu}, {"values", rows(cov)}}.dump() << '\n';
        out << nlohmann::ordered_json{{"matrix", "correlation"}, {"nu", nu}, {"values", rows(rho)}}.dump() << '\n';
        return exit_code::kOk;
    }
    if (format == OutputFormat::Csv) {
        out << "matrix,row";
        for (int i = 1; i <= c.n; ++i) out << ",col_" << i;
        out << '\n';
        write_matrix_rows("covariance", cov, csv_num, out);
        write_matrix_rows("correlation", rho, csv_num, out);
        return exit_code::kOk;
    }
    auto print = [&](const char* title, const MomentMatrix& m, std::string (*num)(double)) {
        fmt::print(out, "{} (n = {}, nu = {})\n", title, c.n, coord(nu));
        for (std::size_t r = 0; r < m.size(); ++r) {
            for (std::size_t col = 0; col < m.size(); ++col) fmt::print(out, "{:>12}", num(m(r, col)));
            out << '\n';
        }
    };
    print("covariance V", cov, [](double x) { return fmt::format("{:.4e}", x); });
    print("correlation rho", rho, table_num);
    return exit_code::kOk;
}

int cmd_density(const RunConfig& c, std::ostream& out, std::ostream&) {
    check_common(c);
    require_nu(c, "density");
    if (c.points < 2) throw ConfigError(fmt::format("density needs at least 2 points, got {}", c.points));
    const OutputFormat format = c.format.value_or(OutputFormat::Csv);
    const auto names = column_names(c, "rho");
    const bool csv = format != OutputFormat::Table;
    if (format == OutputFormat::JsonLines) {
        for (int k = 0; k < c.points; ++k) {
            const double x = static_cast<double>(k) / (c.points - 1);
            std::vector<double> d;
            for (int i = 1; i <= c.n; ++i) d.push_back(order_statistic_pdf(x, RankIndex{i}, c.n));
            out << nlohmann::ordered_json{{"x", x}, {"density", d}}.dump() << '\n';
        }
        return exit_code::kOk;
    }
    out << (csv ? "x" : fmt::format("{:>8}", "x"));
    for (const auto& name : names) out << (csv ? "," + name : fmt::format("{:>10}", name));
    out << '\n';
    for (int k = 0; k < c.points; ++k) {
        const double x = static_cast<double>(k) / (c.points - 1);
        out << (csv ? coord(x) : fmt::format("{:>8}", coord(x)));
        for (int i = 1; i <= c.n; ++i) {
            const double d = order_statistic_pdf(x, RankIndex{i}, c.n);
            out << (csv ? "," + csv_num(d) : fmt::format("{:>10}", table_num(d)));
        }
        out << '\n';
    }
    return exit_code::kOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    check_common(c);
    const double nu = require_nu(c, "simulate");
    if (c.trials < 1) throw ConfigError("trials must be >= 1");
    const ModelParams params = to_params(c, nu);
    const SimulationSpec spec{c.trials, c.seed, params};

    const double b1 = max_output_case1(params);
    const double b2 = max_output_case2(params);
    const EmpiricalSummary ewp = simulate_payoffs(ewp_weights(c.n), spec, Pairing::Unsorted, c.threads);
    const EmpiricalSummary swp = simulate_payoffs(swp_weights(c.n, nu), spec, Pairing::Sorted, c.threads);
    const double gap_se = std::hypot(ewp.standard_error, swp.standard_error);

    auto z = [](double empirical, double analytic, double se) {
        return se > 0.0 ? (empirical - analytic) / se : (empirical == analytic ? 0.0 : INFINITY);
    };
    const double z_ewp = z(ewp.mean, b1, ewp.standard_error);
    const double z_swp = z(swp.mean, b2, swp.standard_error);
    const bool agree = std::abs(z_ewp) <= kOracleSigmas && std::abs(z_swp) <= kOracleSigmas;

    struct Line {
        const char* quantity;
        double analytic;
        double empirical;
        double se;
    };
    const Line lines[] = {
        {"ewp_output", b1, ewp.mean, ewp.standard_error},
        {"swp_output", b2, swp.mean, swp.standard_error},
        {"gap", b2 - b1, swp.mean - ewp.mean, gap_se},
    };

    const OutputFormat format = c.format.value_or(OutputFormat::Table);
    if (format == OutputFormat::Csv) {
        out << "quantity,analytic,empirical,standard_error\n";
        for (const auto& l : lines) out << l.quantity << ',' << csv_num(l.analytic) << ',' << csv_num(l.empirical) << ',' << csv_num(l.se) << '\n';
    } else if (format == OutputFormat::JsonLines) {
        for (const auto& l : lines) {
            out << nlohmann::ordered_json{{"quantity", l.quantity}, {"analytic", l.analytic}, {"empirical", l.empirical},
                                          {"standard_error", l.se}}
                       .dump()
                << '\n';
        }
    } else {
        fmt::print(out, "n = {}, nu = {}, a = {}, trials = {}, seed = {}\n", c.n, coord(nu), coord(c.a), c.trials, c.seed);
        fmt::print(out, "{:<12}{:>12}{:>12}{:>12}{:>9}\n", "quantity", "analytic", "empirical", "std_error", "z");
        for (const auto& l : lines) {
            fmt::print(out, "{:<12}{:>12.6f}{:>12.6f}{:>12.6f}{:>9.2f}\n", l.quantity, l.analytic, l.empirical, l.se,
                       z(l.empirical, l.analytic, l.se));
        }
        fmt::print(out, "agreement within {} standard errors: {}\n", kOracleSigmas, agree ? "yes" : "no");
    }
    if (!agree) {
        err << fmt::format("error: Monte Carlo disagrees with the closed form (z_ewp = {:.2f}, z_swp = {:.2f})\n", z_ewp, z_swp);
        return exit_code::kOracle;
    }
    return exit_code::kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Capital allocation across ordinally ranked alternatives"};
    app.require_subcommand(1);

    struct Raw {
        int n = 0;
        std::string nu, format, config, out, grid;
        double a = 0, b = 0, c0 = 0;
        std::uint64_t trials = 0, seed = 0;
        int points = 0;
        unsigned threads = 0;
        std::vector<std::string> labels;
    } raw;
    struct Handles {
        CLI::Option *n, *nu, *a, *b, *c0, *labels, *format, *trials, *seed, *grid, *points, *threads, *config, *out;
    };

    auto add_common = [&](CLI::App* sub) {
        Handles h{};
        h.n = sub->add_option("--n", raw.n, "number of alternatives");
        h.nu = sub->add_option("--nu", raw.nu, "elasticity in [0, 1], or 'unknown' (allocate only)");
        h.a = sub->add_option("--a", raw.a, "output scale a > 0");
        h.b = sub->add_option("--b", raw.b, "risk aversion b >= 0");
        h.c0 = sub->add_option("--c0", raw.c0, "total budget c0 > 0");
        h.labels = sub->add_option("--labels", raw.labels, "alternative names, ascending rank")->delimiter(',');
        h.format = sub->add_option("--format", raw.format, "table, csv or jsonl");
        h.trials = sub->add_option("--trials", raw.trials, "Monte Carlo trials");
        h.seed = sub->add_option("--seed", raw.seed, "Monte Carlo seed (default 42)");
        h.grid = sub->add_option("--grid", raw.grid, "nu grid start:stop:step or a single value");
        h.points = sub->add_option("--points", raw.points, "density grid points");
        h.threads = sub->add_option("--threads", raw.threads, "worker threads, 0 = all cores");
        h.config = sub->add_option("--config", raw.config, "JSON configuration file");
        h.out = sub->add_option("--out", raw.out, "write data to this file instead of stdout");
        return h;
    };

    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
        CLI::App* app = nullptr;
        Handles handles{};
    };
    std::vector<Command> commands = {
        {"allocate", "EWP, SWP and (b > 0) mean-variance weights", cmd_allocate},
        {"sweep", "SWP weights across a grid of nu (CSV)", cmd_sweep},
        {"covariance", "covariance and correlation of powered order statistics", cmd_covariance},
        {"density", "order-statistic densities on [0, 1] (CSV)", cmd_density},
        {"simulate", "Monte Carlo check of the maximum expected outputs", cmd_simulate},
    };
    for (auto& cmd : commands) {
        cmd.app = app.add_subcommand(cmd.name, cmd.help);
        cmd.handles = add_common(cmd.app);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kConfig;
    }

    const auto selected = std::find_if(commands.begin(), commands.end(), [](const Command& c) { return c.app->parsed(); });
    const Handles& h = selected->handles;

    RunConfig config;
    try {
        if (h.config->count()) {
            std::ifstream file(raw.config);
            if (!file) throw ConfigError(fmt::format("cannot read config file '{}'", raw.config));
            std::stringstream text;
            text << file.rdbuf();
            apply_config_json(text.str(), config);
        }
        if (h.n->count()) config.n = raw.n;
        if (h.nu->count()) config.nu = parse_nu(raw.nu);
        if (h.a->count()) config.a = raw.a;
        if (h.b->count()) config.b = raw.b;
        if (h.c0->count()) config.c0 = raw.c0;
        if (h.labels->count()) config.labels = raw.labels;
        if (h.format->count()) config.format = parse_format(raw.format);
        if (h.trials->count()) config.trials = raw.trials;
        if (h.seed->count()) config.seed = raw.seed;
        if (h.grid->count()) config.grid = raw.grid;
        if (h.points->count()) config.points = raw.points;
        if (h.threads->count()) config.threads = raw.threads;
        if (h.out->count()) config.out_path = raw.out;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kConfig;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.out_path.empty()) {
        file.open(config.out_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << fmt::format("error: cannot write '{}'\n", config.out_path);
            return exit_code::kConfig;
        }
        sink = &file;
    }

    try {
        return selected->fn(config, *sink, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kConfig;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kSolver;
    }
}

}  // namespace rankalloc::cli
