#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace spectral::cli {

using Value = std::variant<std::monostate, bool, long long, double, std::string>;

/// Flat table with a fixed column order.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    /// Cell of `row` under `column`, or nullptr when the column is absent.
    const Value* find(std::size_t row, const std::string& column) const;
};

enum class Format { json, csv };

/// Rounds to 12 significant digits.
double round12(double v);

/// CSV: header row plus one line per row. JSON: a flat object for a single
/// row, otherwise an array of flat objects. Output ends with a newline.
std::string emit_table(const Table& table, Format format);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int usage = 2;
} // namespace exit_code

struct CommandResult {
    int exit_code = exit_code::ok;
    Table table;
    std::string output;   // rendered table
    std::string message;  // diagnostics for stderr
};

/// Runs one subcommand invocation (without the program name). Never throws.
/// `run-suite` is rejected here; use run_suite.
CommandResult run_command(const std::vector<std::string>& args);

struct SuiteSummary {
    int runs = 0;
    int passed = 0;
    int failed = 0;
    std::vector<std::string> report; // one line per run, in file order
};

/// Suite format: one invocation per line, '#' comments and blank lines skipped.
/// Assertions follow the command, separated by ';':
///   bound --domain square --p 2 ; expect value >= 4 ; expect exit == 0
/// Operators: < <= > >= == != and "~= value tol". A field assertion must hold
/// on every row that carries the field. Without an explicit exit assertion the
/// run must exit 0. Lines run concurrently on up to `threads` workers.
SuiteSummary run_suite(std::istream& in, unsigned threads);

/// Parallelism cap from SPECTRAL_BOUNDS_THREADS, else the hardware count.
unsigned suite_threads();

/// Full program entry: parses argv, runs, writes output. Returns the exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace spectral::cli
