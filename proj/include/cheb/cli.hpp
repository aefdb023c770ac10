#pragma once

// Command-line front end: builds family samples over a range of r and emits
// CSV or JSON tables.
//
// Exit codes: 0 success, 2 usage error, 3 resource guard, 4 I/O failure,
// 1 any other failure.

#include "cheb/bounds.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cheb::cli {

enum class Command { dihedral, cyclotomic, falsify, serre, sieve_check };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitIo = 4;

// Largest sieve bound any configuration may request.
inline constexpr std::uint64_t kResourceLimit = std::uint64_t{1} << 40;
// sieve-check also materializes a plain reference sieve, one bit per integer.
inline constexpr std::uint64_t kReferenceSieveLimit = std::uint64_t{1} << 32;

struct RunConfig {
    Command command = Command::dihedral;
    // Unset bounds take per-command defaults (see default_r_range).
    std::optional<int> r_min;
    std::optional<int> r_max;
    double alpha = 0.5;
    // Unset: alpha for the cyclotomic family, 0.5 otherwise.
    std::optional<double> range_alpha;
    Family family = Family::dihedral;  // falsify only
    BoundFamily bound;
    std::string output_path;  // empty or "-" for stdout
    Format format = Format::csv;
    unsigned workers = 1;
};

std::pair<int, int> default_r_range(const RunConfig& cfg);

// Highest sieve bound the configuration needs, for the resource guard.
std::uint64_t sieve_limit(const RunConfig& cfg, int r_max);

using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;
};

// Formats a double with 17 significant digits (lossless round trip).
std::string format_double(double v);

// CSV: header line, one line per row, then "# key=value" summary lines.
std::string to_csv(const Table& t);
// JSON object {"command", "columns", "rows": [{col: value}], "summary": {...}}.
std::string to_json(const Table& t);

// Validates cfg and computes the table. Throws UsageError / ResourceError or
// library errors.
Table build_table(const RunConfig& cfg);

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs a configuration, writing output to cfg.output_path (or out) and
// diagnostics to err. Returns an exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv and runs. Returns an exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cheb::cli
