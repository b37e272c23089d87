#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace spectral::cli;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

} // namespace

TEST_CASE("CSV output") {
    Table table;
    table.columns = {"name", "value", "flag"};
    CHECK(emit_table(table, Format::csv) == "name,value,flag\n");
    table.rows.push_back({std::string("a"), 1.0 / 3.0, true});
    table.rows.push_back({std::string("b"), std::monostate{}, false});
    const auto lines = split_lines(emit_table(table, Format::csv));
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] == "a,0.333333333333,true");
    CHECK(lines[2] == "b,,false");
}

TEST_CASE("JSON output") {
    Table table;
    table.columns = {"x", "count", "label", "missing"};
    table.rows.push_back({3.14159265358979, 7LL, std::string("rhombus_m8"), std::monostate{}});
    const auto parsed = nlohmann::json::parse(emit_table(table, Format::json));
    REQUIRE(parsed.is_object());
    CHECK(parsed["x"].get<double>() == round12(3.14159265358979));
    CHECK(parsed["count"].get<long long>() == 7);
    CHECK(parsed["label"] == "rhombus_m8");
    CHECK(parsed["missing"].is_null());
    std::vector<std::string> keys;
    for (auto it = parsed.begin(); it != parsed.end(); ++it) {
        keys.push_back(it.key());
    }
    CHECK(keys.size() == 4);

    table.rows.push_back(table.rows.front());
    const auto many = nlohmann::json::parse(emit_table(table, Format::json));
    REQUIRE(many.is_array());
    CHECK(many.size() == 2);

    for (double v : {1.0 / 7.0, 6.02214076e23, -2.5e-17, 5.783185962946784}) {
        const double r = round12(v);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        CHECK(r == std::stod(buf));
        CHECK(round12(r) == r);
    }
}

TEST_CASE("psi subcommand") {
    const CommandResult result = run_command({"psi", "--p", "2", "--n", "2"});
    REQUIRE(result.exit_code == exit_code::ok);
    const auto lines = split_lines(result.output);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "p,n,lambda1_ball,psi");
    const auto comma = lines[1].rfind(',');
    CHECK(std::stod(lines[1].substr(comma + 1)) == doctest::Approx(2.40482556).epsilon(1e-9));

    const CommandResult grid = run_command({"psi", "--p", "2,3", "--n", "2,3", "--format", "json"});
    REQUIRE(grid.exit_code == exit_code::ok);
    CHECK(nlohmann::json::parse(grid.output).size() == 4);
}

TEST_CASE("determinism") {
    const std::vector<std::string> args{"compare-bounds", "--domain", "rhombus", "--m", "8", "--level", "3"};
    const CommandResult a = run_command(args);
    const CommandResult b = run_command(args);
    CHECK(a.exit_code == exit_code::ok);
    CHECK(a.output == b.output);
    CHECK_FALSE(a.output.empty());
}

TEST_CASE("verify-rhombus") {
    const CommandResult result = run_command({"verify-rhombus", "--m", "8", "--level", "4"});
    REQUIRE(result.exit_code == exit_code::ok);
    const auto parsed = nlohmann::json::parse(result.output);
    CHECK(parsed["r_m"].get<double>() > 2.0);
    CHECK(parsed["m"] == 8);
    CHECK(parsed["sandwich_ok"] == true);
}

TEST_CASE("bound, sturm, chiti and rholder") {
    const CommandResult bound = run_command({"bound", "--domain", "square", "--format", "json"});
    REQUIRE(bound.exit_code == exit_code::ok);
    const auto rows = nlohmann::json::parse(bound.output);
    bool saw_am = false;
    for (const auto& row : rows) {
        if (row["bound"] == "ashbaugh_mercado") {
            saw_am = true;
            CHECK(row["value"].get<double>() == doctest::Approx(4.0));
        }
    }
    CHECK(saw_am);

    const CommandResult sturm = run_command({"sturm", "--gamma", "2", "--beta", "1", "--A", "3.14159265358979",
                                             "--N", "1024", "--format", "json"});
    REQUIRE(sturm.exit_code == exit_code::ok);
    const auto s = nlohmann::json::parse(sturm.output);
    CHECK(s["sigma1"].get<double>() == doctest::Approx(0.46022).epsilon(1e-4));
    CHECK(s["hardy_ok"] == true);

    const CommandResult chiti = run_command({"chiti", "--domain", "square", "--q", "2", "--level", "4"});
    REQUIRE(chiti.exit_code == exit_code::ok);
    CHECK(nlohmann::json::parse(chiti.output)["max_violation"].get<double>() <= 1e-3);

    const CommandResult rholder = run_command({"rholder", "--domain", "square", "--level", "4"});
    REQUIRE(rholder.exit_code == exit_code::ok);
    CHECK(nlohmann::json::parse(rholder.output)["ok"] == true);
}

TEST_CASE("usage errors") {
    const CommandResult p3 = run_command({"compare-bounds", "--domain", "square", "--p", "3"});
    CHECK(p3.exit_code == exit_code::usage);
    CHECK(p3.message.find("FEM μ₁ unavailable for p≠2") != std::string::npos);

    const CommandResult unknown = run_command({"bogus"});
    CHECK(unknown.exit_code == exit_code::usage);
    CHECK(unknown.message.find("unknown subcommand") != std::string::npos);

    CHECK(run_command({}).exit_code == exit_code::usage);
    CHECK(run_command({""}).exit_code == exit_code::usage);
    CHECK(run_command({"psi", "--bogus-flag"}).exit_code == exit_code::usage);
    CHECK(run_command({"bound", "--domain", "polygon", "--k", "5"}).exit_code == exit_code::usage);
    CHECK(run_command({"sturm", "--beta", "5"}).exit_code == exit_code::usage);
    CHECK(run_command({"psi", "--format", "xml"}).exit_code == exit_code::usage);
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "spectral_cli_test_output.csv";
    std::filesystem::remove(path);
    const CommandResult result = run_command({"psi", "--output", path.string()});
    REQUIRE(result.exit_code == exit_code::ok);
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str().rfind("p,n,lambda1_ball,psi\n", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("suites") {
    std::istringstream empty("# nothing here\n\n");
    const SuiteSummary none = run_suite(empty, 2);
    CHECK(none.runs == 0);
    CHECK(none.failed == 0);

    std::istringstream mixed("psi --p 2 --n 2 ; expect psi ~= 2.404825557 1e-8\n"
                             "bound --domain square ; expect value > 100\n"
                             "compare-bounds --domain square --p 3 ; expect exit == 2\n"
                             "psi ; expect nonexistent == 1\n"
                             "run-suite x\n"
                             "psi ; expect psi <\n");
    const SuiteSummary summary = run_suite(mixed, 3);
    CHECK(summary.runs == 6);
    CHECK(summary.passed == 2);
    CHECK(summary.failed == 4);
    REQUIRE(summary.report.size() == 6);
    CHECK(summary.report[0].rfind("PASS line 1", 0) == 0);
    CHECK(summary.report[1].rfind("FAIL line 2", 0) == 0);
    CHECK(summary.report[2].rfind("PASS line 3", 0) == 0);

    std::istringstream forced("psi ; expect psi < 0\n");
    CHECK(run_suite(forced, 1).failed == 1);

    std::ostringstream out, err;
    CHECK(dispatch({"run-suite", "/nonexistent/suite/file"}, out, err) == exit_code::usage);
    CHECK(dispatch({"run-suite"}, out, err) == exit_code::usage);

    const auto path = std::filesystem::temp_directory_path() / "spectral_cli_forced_fail.suite";
    {
        std::ofstream f(path);
        f << "psi --p 2 --n 2\npsi ; expect psi > 1000\n";
    }
    std::ostringstream sout;
    CHECK(dispatch({"run-suite", path.string()}, sout, err) == exit_code::failure);
    CHECK(sout.str().find("runs 2, passed 1, failed 1") != std::string::npos);
    std::filesystem::remove(path);

    std::ostringstream dout;
    CHECK(dispatch({"psi"}, dout, err) == exit_code::ok);
    CHECK(dout.str() == run_command({"psi"}).output);
}
