#include "cli.hpp"

#include "spectral/bounds.hpp"
#include "spectral/errors.hpp"
#include "spectral/fem.hpp"
#include "spectral/rearrangement.hpp"
#include "spectral/special.hpp"
#include "spectral/sturm1d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace spectral::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_cell(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(x);
            } else if (x.find_first_of(",\"\n") == std::string::npos) {
                return x;
            } else {
                std::string quoted = "\"";
                for (char c : x) {
                    quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
                }
                return quoted + "\"";
            }
        },
        v);
}

nlohmann::ordered_json json_cell(const Value& v) {
    return std::visit(
        [](const auto& x) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(x)) {
                    return nullptr;
                }
                return round12(x);
            } else {
                return x;
            }
        },
        v);
}

Value opt(const std::optional<double>& v) { return v ? Value{*v} : Value{}; }

// --- domain flags ---------------------------------------------------------

struct DomainFlags {
    std::string domain = "square";
    int m = 8;
    double a = 2.0;
    double b = 1.0;
    int k = 64;
    double radius = 1.0;
};

void add_domain_flags(CLI::App* sub, DomainFlags& d) {
    sub->add_option("--domain", d.domain, "square | rectangle | rhombus | polygon")
        ->check(CLI::IsMember({"square", "rectangle", "rhombus", "polygon"}))
        ->capture_default_str();
    sub->add_option("--m", d.m, "rhombus angle index, angle 2 pi / m")->capture_default_str();
    sub->add_option("--a", d.a, "rectangle long side")->capture_default_str();
    sub->add_option("--b", d.b, "rectangle short side")->capture_default_str();
    sub->add_option("--k", d.k, "polygon vertex count")->capture_default_str();
    sub->add_option("--R", d.radius, "polygon circumradius")->capture_default_str();
}

DomainSpec make_domain(const DomainFlags& d) {
    if (d.domain == "square") {
        return make_rectangle(1.0, 1.0);
    }
    if (d.domain == "rectangle") {
        return make_rectangle(d.a, d.b);
    }
    if (d.domain == "rhombus") {
        return make_rhombus(d.m);
    }
    return make_regular_polygon(d.k, d.radius);
}

void require_fem_p(double p) {
    if (p != 2.0) {
        throw UsageError("FEM μ₁ unavailable for p≠2");
    }
}

void require_level(int level) {
    if (level < 1 || level > 9) {
        throw UsageError("--level must lie in [1, 9]");
    }
}

struct FemData {
    DomainSpec spec;
    Mesh mesh;
    EigenPair pair;
    double k_const = 0.0;
};

FemData neumann_data(const DomainFlags& flags, int level) {
    FemData data;
    data.spec = make_domain(flags);
    data.k_const = kn_lookup(data.spec).value;
    data.mesh = triangulate(data.spec, level);
    data.pair = solve_neumann_mu1(data.mesh);
    return data;
}

// --- subcommands ----------------------------------------------------------

struct Common {
    std::string format;
    std::string output;
};

struct Command {
    CLI::App* app = nullptr;
    std::string default_format;
    std::function<int(Table&)> run;
};

} // namespace

const Value* Table::find(std::size_t row, const std::string& column) const {
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end() || row >= rows.size()) {
        return nullptr;
    }
    return &rows[row][static_cast<std::size_t>(it - columns.begin())];
}

double round12(double v) {
    if (!std::isfinite(v) || v == 0.0) {
        return v;
    }
    return std::stod(format_double(v));
}

std::string emit_table(const Table& table, Format format) {
    if (format == Format::csv) {
        std::string out;
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out += (c ? "," : "") + table.columns[c];
        }
        out += '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out += (c ? "," : "") + csv_cell(row[c]);
            }
            out += '\n';
        }
        return out;
    }
    auto object = [&](const std::vector<Value>& row) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            o[table.columns[c]] = json_cell(row[c]);
        }
        return o;
    };
    nlohmann::ordered_json doc;
    if (table.rows.size() == 1) {
        doc = object(table.rows.front());
    } else {
        doc = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            doc.push_back(object(row));
        }
    }
    return doc.dump(2) + "\n";
}

CommandResult run_command(const std::vector<std::string>& args) {
    CommandResult result;
    CLI::App app{"Lower bounds for the first nontrivial Neumann eigenvalue of the p-Laplacian", "spectral-bounds"};
    app.require_subcommand(1);
    Common common;
    std::vector<Command> commands;
    commands.reserve(8);

    auto add = [&](const std::string& name, const std::string& help, const std::string& default_format) {
        Command cmd;
        cmd.app = app.add_subcommand(name, help);
        cmd.default_format = default_format;
        cmd.app->add_option("--format", common.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
        cmd.app->add_option("--output", common.output, "write the table to this file");
        commands.push_back(cmd);
        return &commands.back();
    };

    // psi
    std::vector<double> psi_p{2.0};
    std::vector<int> psi_n{2};
    {
        Command* c = add("psi", "radial profile zero psi_p and ball eigenvalue psi_p^p", "csv");
        c->app->add_option("--p", psi_p, "exponents, comma separated")->delimiter(',');
        c->app->add_option("--n", psi_n, "dimensions, comma separated")->delimiter(',');
        c->run = [&](Table& t) {
            t.columns = {"p", "n", "lambda1_ball", "psi"};
            for (double p : psi_p) {
                for (int n : psi_n) {
                    const RadialProfile& profile = cached_psi_profile(p, n);
                    t.rows.push_back({p, static_cast<long long>(n), lambda1_ball(profile, 1.0), profile.first_zero()});
                }
            }
            return exit_code::ok;
        };
    }

    // bound
    DomainFlags bound_domain;
    double bound_p = 2.0;
    {
        Command* c = add("bound", "formula lower bounds for a domain, any p >= 2", "csv");
        add_domain_flags(c->app, bound_domain);
        c->app->add_option("--p", bound_p, "exponent p >= 2")->capture_default_str();
        c->run = [&](Table& t) {
            const DomainSpec spec = make_domain(bound_domain);
            const KnEntry kn = kn_lookup(spec);
            t.columns = {"domain", "p", "n", "k2", "bound", "value", "applicable"};
            for (const auto& e : bound_entries(spec, bound_p)) {
                t.rows.push_back({spec.name(), bound_p, 2LL, kn.value, e.name, e.value, e.applicable});
            }
            return exit_code::ok;
        };
    }

    // compare-bounds
    DomainFlags cmp_domain;
    double cmp_p = 2.0;
    int cmp_level = 5;
    {
        Command* c = add("compare-bounds", "all bounds against the FEM eigenvalue (p = 2)", "json");
        add_domain_flags(c->app, cmp_domain);
        c->app->add_option("--p", cmp_p, "exponent; FEM requires p = 2")->capture_default_str();
        c->app->add_option("--level", cmp_level, "mesh refinement level")->capture_default_str();
        c->run = [&](Table& t) {
            require_fem_p(cmp_p);
            require_level(cmp_level);
            const BoundReport report = compare_report(make_domain(cmp_domain), cmp_p, cmp_level);
            t.columns = {"domain", "p", "level", "bound", "value", "applicable", "ratio", "mu1", "mu1_coarse",
                         "mu1_richardson", "valid"};
            for (const auto& e : report.entries) {
                t.rows.push_back({report.domain, report.p, static_cast<long long>(report.level), e.name, e.value,
                                  e.applicable, opt(e.ratio), opt(report.mu1), opt(report.mu1_coarse),
                                  opt(report.mu1_richardson), report.valid});
            }
            return report.valid ? exit_code::ok : exit_code::failure;
        };
    }

    // verify-rhombus
    std::vector<int> rh_m{8, 16, 32, 64};
    int rh_level = 5;
    {
        Command* c = add("verify-rhombus", "sharpness study on the rhombus sequence", "json");
        c->app->add_option("--m", rh_m, "rhombus indices, comma separated")->delimiter(',');
        c->app->add_option("--level", rh_level, "mesh refinement level")->capture_default_str();
        c->run = [&](Table& t) {
            require_level(rh_level);
            const RhombusStudy study = verify_rhombus(rh_m, rh_level);
            t.columns = {"m", "beta", "alpha", "lambda_sharp", "mu1", "mu1_richardson", "r_m", "lambda_dn",
                         "lambda_dn_richardson", "sandwich_low", "sandwich_high", "sandwich_ok", "decreasing",
                         "mesh_level"};
            bool ok = study.decreasing;
            for (const auto& r : study.rows) {
                ok = ok && r.sandwich_ok;
                t.rows.push_back({static_cast<long long>(r.m), r.beta, r.alpha, r.lambda_sharp, r.mu1,
                                  r.mu1_richardson, r.r_m, r.lambda_dn, r.lambda_dn_richardson, r.sandwich_low,
                                  r.sandwich_high, r.sandwich_ok, study.decreasing,
                                  static_cast<long long>(rh_level)});
            }
            return ok ? exit_code::ok : exit_code::failure;
        };
    }

    // chiti
    DomainFlags chiti_domain;
    double chiti_p = 2.0;
    double chiti_q = 1.0;
    int chiti_level = 5;
    int chiti_grid = 2000;
    double chiti_tol = 1e-3;
    {
        Command* c = add("chiti", "cumulative comparison of the rearranged eigenfunction with the ball", "json");
        add_domain_flags(c->app, chiti_domain);
        c->app->add_option("--p", chiti_p, "exponent; FEM requires p = 2")->capture_default_str();
        c->app->add_option("--q", chiti_q, "power q > 0")->capture_default_str();
        c->app->add_option("--level", chiti_level, "mesh refinement level")->capture_default_str();
        c->app->add_option("--grid", chiti_grid, "comparison grid size")->capture_default_str();
        c->app->add_option("--tol", chiti_tol, "allowed normalized violation")->capture_default_str();
        c->run = [&](Table& t) {
            require_fem_p(chiti_p);
            require_level(chiti_level);
            const FemData data = neumann_data(chiti_domain, chiti_level);
            const RearrangedProfile profile = rearrange_eigenfunction(data.mesh, data.pair.eigenvector);
            const double length = isoperimetric_length(2.0, 2, data.k_const, data.pair.eigenvalue);
            const ChitiReport r =
                chiti_check(profile, cached_psi_profile(2.0, 2), chiti_q, length, chiti_grid, chiti_tol);
            t.columns = {"domain", "p", "q", "r", "lhs", "rhs", "max_violation", "mesh_level", "s_at_max", "length",
                         "s_tilde", "length_violation"};
            t.rows.push_back({data.spec.name(), chiti_p, chiti_q, Value{}, r.u_at_max, r.v_at_max, r.max_violation,
                              static_cast<long long>(chiti_level), r.s_at_max, r.length, r.s_tilde,
                              r.length_violation});
            return r.max_violation <= chiti_tol && !r.length_violation ? exit_code::ok : exit_code::failure;
        };
    }

    // rholder
    DomainFlags rh_domain;
    double rho_p = 2.0;
    double rho_q = 2.0;
    double rho_r = 1.0;
    int rho_level = 5;
    double rho_tol = 1e-3;
    {
        Command* c = add("rholder", "reverse Hoelder inequality for the positive part", "json");
        add_domain_flags(c->app, rh_domain);
        c->app->add_option("--p", rho_p, "exponent; FEM requires p = 2")->capture_default_str();
        c->app->add_option("--q", rho_q, "upper exponent")->capture_default_str();
        c->app->add_option("--r", rho_r, "lower exponent, 0 < r < q")->capture_default_str();
        c->app->add_option("--level", rho_level, "mesh refinement level")->capture_default_str();
        c->app->add_option("--tol", rho_tol, "additive tolerance")->capture_default_str();
        c->run = [&](Table& t) {
            require_fem_p(rho_p);
            require_level(rho_level);
            const FemData data = neumann_data(rh_domain, rho_level);
            const RearrangedProfile profile = rearrange_eigenfunction(data.mesh, data.pair.eigenvector);
            const ReverseHolderReport r = reverse_holder_check(profile, cached_psi_profile(2.0, 2), data.k_const,
                                                               data.pair.eigenvalue, rho_q, rho_r, rho_tol);
            t.columns = {"domain", "p", "q", "r", "lhs", "rhs", "max_violation", "mesh_level", "radius", "ok"};
            t.rows.push_back({data.spec.name(), rho_p, rho_q, rho_r, r.lhs, r.rhs, r.lhs - r.rhs,
                              static_cast<long long>(rho_level), r.radius, r.ok});
            return r.ok ? exit_code::ok : exit_code::failure;
        };
    }

    // sturm
    double st_gamma = 2.0;
    double st_beta = 1.0;
    double st_length = 1.0;
    int st_intervals = 4096;
    {
        Command* c = add("sturm", "first eigenvalue of the weighted one-dimensional problem", "csv");
        c->app->add_option("--gamma", st_gamma, "gamma > 1")->capture_default_str();
        c->app->add_option("--beta", st_beta, "beta in (0, gamma)")->capture_default_str();
        c->app->add_option("--A", st_length, "interval length")->capture_default_str();
        c->app->add_option("--N", st_intervals, "grid intervals")->capture_default_str();
        c->run = [&](Table& t) {
            const SturmProblem problem{st_gamma, st_beta, st_length, st_intervals};
            const SturmSolution sol = sturm_solve(problem);
            const double hardy = hardy_lower_bound(problem);
            const bool ok = sol.sigma >= hardy;
            t.columns = {"gamma", "beta", "A", "N", "sigma1", "hardy_bound", "iterations", "hardy_ok"};
            t.rows.push_back({st_gamma, st_beta, st_length, static_cast<long long>(st_intervals), sol.sigma, hardy,
                              static_cast<long long>(sol.iterations), ok});
            return ok ? exit_code::ok : exit_code::failure;
        };
    }

    app.add_subcommand("run-suite", "run a suite file")->allow_extras();

    if (!args.empty() && (args.front().empty() || args.front().front() != '-') && app.get_subcommand_no_throw(args.front()) == nullptr) {
        result.exit_code = exit_code::usage;
        result.message = "unknown subcommand '" + args.front() + "'";
        return result;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        result.output = app.help();
        for (const auto* sub : app.get_subcommands()) {
            result.output = sub->help();
        }
        return result;
    } catch (const CLI::ParseError& e) {
        result.exit_code = exit_code::usage;
        result.message = e.what();
        return result;
    }

    for (const Command& cmd : commands) {
        if (!cmd.app->parsed()) {
            continue;
        }
        const Format format = (common.format.empty() ? cmd.default_format : common.format) == "csv" ? Format::csv
                                                                                                    : Format::json;
        try {
            result.exit_code = cmd.run(result.table);
            result.output = emit_table(result.table, format);
        } catch (const UsageError& e) {
            result.exit_code = exit_code::usage;
            result.message = e.what();
            return result;
        } catch (const ParameterError& e) {
            result.exit_code = exit_code::usage;
            result.message = e.what();
            return result;
        } catch (const std::exception& e) {
            result.exit_code = exit_code::failure;
            result.message = e.what();
            return result;
        }
        if (!common.output.empty()) {
            std::ofstream file(common.output, std::ios::binary);
            if (!file) {
                result.exit_code = exit_code::usage;
                result.message = "cannot write " + common.output;
                return result;
            }
            file << result.output;
            result.output.clear();
        }
        if (result.exit_code != exit_code::ok && result.message.empty()) {
            result.message = "check failed";
        }
        return result;
    }
    result.exit_code = exit_code::usage;
    result.message = "run-suite is only available at the top level";
    return result;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (!args.empty() && args.front() == "run-suite") {
        if (args.size() != 2) {
            err << "usage: spectral-bounds run-suite FILE\n";
            return exit_code::usage;
        }
        std::ifstream in(args[1]);
        if (!in) {
            err << "cannot read suite file " << args[1] << "\n";
            return exit_code::usage;
        }
        const SuiteSummary summary = run_suite(in, suite_threads());
        for (const auto& line : summary.report) {
            out << line << "\n";
        }
        out << "runs " << summary.runs << ", passed " << summary.passed << ", failed " << summary.failed << "\n";
        return summary.failed > 0 ? exit_code::failure : exit_code::ok;
    }
    const CommandResult result = run_command(args);
    out << result.output;
    if (!result.message.empty()) {
        err << result.message << "\n";
    }
    return result.exit_code;
}

} // namespace spectral::cli
