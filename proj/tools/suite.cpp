#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <optional>
#include <sstream>
#include <thread>

namespace spectral::cli {

namespace {

std::vector<std::string> split_words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    for (std::string w; in >> w;) {
        words.push_back(w);
    }
    return words;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

struct Expectation {
    std::string field;
    std::string op;
    std::string value;
    double tolerance = 0.0;
};

struct SuiteLine {
    int line_number = 0;
    std::string text;
    std::vector<std::string> args;
    std::vector<Expectation> expectations;
    std::string parse_error;
};

bool parse_number(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end != s.c_str() && *end == '\0';
}

bool compare_numbers(double lhs, const std::string& op, double rhs, double tol) {
    if (op == "<") return lhs < rhs;
    if (op == "<=") return lhs <= rhs;
    if (op == ">") return lhs > rhs;
    if (op == ">=") return lhs >= rhs;
    if (op == "==") return lhs == rhs;
    if (op == "!=") return lhs != rhs;
    return std::abs(lhs - rhs) <= tol;
}

std::string cell_text(const Value& v) {
    if (const auto* b = std::get_if<bool>(&v)) {
        return *b ? "true" : "false";
    }
    if (const auto* s = std::get_if<std::string>(&v)) {
        return *s;
    }
    return "";
}

std::optional<double> cell_number(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) {
        return *d;
    }
    if (const auto* i = std::get_if<long long>(&v)) {
        return static_cast<double>(*i);
    }
    return std::nullopt;
}

SuiteLine parse_line(int number, const std::string& text) {
    SuiteLine line;
    line.line_number = number;
    line.text = text;
    const auto parts = split_on(text, ';');
    line.args = split_words(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto words = split_words(parts[i]);
        if (words.empty()) {
            continue;
        }
        static const std::vector<std::string> ops{"<", "<=", ">", ">=", "==", "!=", "~="};
        const bool approx = words.size() == 5 && words[2] == "~=";
        if (words[0] != "expect" || !(words.size() == 4 || approx) ||
            std::find(ops.begin(), ops.end(), words[2]) == ops.end()) {
            line.parse_error = "malformed assertion '" + parts[i] + "'";
            return line;
        }
        Expectation e{words[1], words[2], words[3], 0.0};
        if (approx && !parse_number(words[4], e.tolerance)) {
            line.parse_error = "bad tolerance in '" + parts[i] + "'";
            return line;
        }
        line.expectations.push_back(e);
    }
    if (line.args.empty()) {
        line.parse_error = "assertion without a command";
    }
    return line;
}

// Empty string on success, else the reason.
std::string evaluate(const SuiteLine& line, const CommandResult& result) {
    bool exit_checked = false;
    for (const auto& e : line.expectations) {
        if (e.field == "exit") {
            exit_checked = true;
            double want = 0.0;
            if (!parse_number(e.value, want) ||
                !compare_numbers(result.exit_code, e.op, want, e.tolerance)) {
                return "exit " + std::to_string(result.exit_code) + " fails " + e.op + " " + e.value;
            }
        }
    }
    if (!exit_checked && result.exit_code != exit_code::ok) {
        return "exit " + std::to_string(result.exit_code) + (result.message.empty() ? "" : ": " + result.message);
    }
    for (const auto& e : line.expectations) {
        if (e.field == "exit") {
            continue;
        }
        int seen = 0;
        for (std::size_t row = 0; row < result.table.rows.size(); ++row) {
            const Value* cell = result.table.find(row, e.field);
            if (cell == nullptr || std::holds_alternative<std::monostate>(*cell)) {
                continue;
            }
            ++seen;
            double want = 0.0;
            const auto have = cell_number(*cell);
            bool ok = false;
            if (have && parse_number(e.value, want)) {
                ok = compare_numbers(*have, e.op, want, e.tolerance);
            } else if (e.op == "==" || e.op == "!=") {
                ok = (cell_text(*cell) == e.value) == (e.op == "==");
            }
            if (!ok) {
                return e.field + " fails " + e.op + " " + e.value + " on row " + std::to_string(row);
            }
        }
        if (seen == 0) {
            return "no value for field '" + e.field + "'";
        }
    }
    return "";
}

} // namespace

unsigned suite_threads() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPECTRAL_BOUNDS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            threads = static_cast<unsigned>(v);
        }
    }
    return threads;
}

SuiteSummary run_suite(std::istream& in, unsigned threads) {
    std::vector<SuiteLine> lines;
    int number = 0;
    for (std::string text; std::getline(in, text);) {
        ++number;
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos || text[first] == '#') {
            continue;
        }
        if (text.back() == '\r') {
            text.pop_back();
        }
        lines.push_back(parse_line(number, text.substr(first)));
    }

    std::vector<std::string> outcome(lines.size());
    std::vector<char> passed(lines.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < lines.size(); i = next++) {
            const SuiteLine& line = lines[i];
            std::string reason = line.parse_error;
            if (reason.empty()) {
                if (line.args.front() == "run-suite") {
                    reason = "nested run-suite is not allowed";
                } else {
                    reason = evaluate(line, run_command(line.args));
                }
            }
            passed[i] = reason.empty();
            outcome[i] = (reason.empty() ? "PASS line " : "FAIL line ") + std::to_string(line.line_number) + ": " +
                         line.text + (reason.empty() ? "" : "  [" + reason + "]");
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lines.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < count; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    SuiteSummary summary;
    summary.runs = static_cast<int>(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        summary.passed += passed[i];
        summary.report.push_back(outcome[i]);
    }
    summary.failed = summary.runs - summary.passed;
    return summary;
}

} // namespace spectral::cli
