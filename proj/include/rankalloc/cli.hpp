#pragma once
// Command-line front end: configuration, dispatch, and report rendering.
//
// stdout (or --out) carries data only; diagnostics go to the error stream.

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rankalloc::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;
inline constexpr int kSolver = 3;
inline constexpr int kOracle = 4;
}  // namespace exit_code

enum class OutputFormat { Table, Csv, JsonLines };

// Inclusive grid start:stop:step, or a single value.
struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    double step = 0.01;

    static GridSpec parse(const std::string& text);
    std::vector<double> points() const;
};

struct RunConfig {
    int n = 2;
    std::optional<double> nu = 0.5;  // empty means "unknown"
    double a = 1.0;
    double b = 0.0;
    double c0 = 1.0;
    std::vector<std::string> labels;
    std::optional<OutputFormat> format;  // each command has its own default
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 42;
    std::string grid = "0:1:0.01";
    int points = 101;
    unsigned threads = 0;
    std::string out_path;
};

// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::exception {
public:
    explicit ConfigError(std::string message) : message_(std::move(message)) {}
    const char* what() const noexcept override { return message_.c_str(); }

private:
    std::string message_;
};

// Reads a JSON object with any of the RunConfig keys into `config`.
void apply_config_json(const std::string& json_text, RunConfig& config);

int cmd_allocate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_covariance(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_density(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full entry point; args excludes the program name. Flags override keys of
// the JSON file named by --config.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankalloc::cli
