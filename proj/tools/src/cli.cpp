#include "skln_cli/cli.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "skln/cylinder.hpp"
#include "skln/errors.hpp"
#include "skln/profile.hpp"
#include "skln/quadrature.hpp"
#include "skln/rootfind.hpp"
#include "skln/verification.hpp"
#include "skln_cli/io.hpp"

namespace skln::cli {

ProblemSpec RunConfig::spec() const {
    if (infinite) {
        if (c1 || c2) {
            throw ArgumentError("--infinite cannot be combined with --c1/--c2");
        }
        return ProblemSpec::infinite(n, k, a, b);
    }
    if (!c1 || !c2) {
        throw ArgumentError("finite boundary data needs both --c1 and --c2 (or pass --infinite)");
    }
    return ProblemSpec::finite(n, k, a, b, *c1, *c2);
}

ClassifyOptions RunConfig::classify_options() const {
    ClassifyOptions o;
    o.tau_c = tau_c;
    o.tol = tol;
    return o;
}

GridControl RunConfig::grid() const {
    GridControl g;
    g.points_per_branch = points_per_branch;
    g.xi_floor = xi_floor;
    g.tol = grid_tol;
    return g;
}

nlohmann::json to_json(const RunConfig& c) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    return {
        {"subcommand", c.subcommand},
        {"n", c.n},
        {"k", c.k},
        {"a", c.a},
        {"b", c.b},
        {"infinite", c.infinite},
        {"c1", opt(c.c1)},
        {"c2", opt(c.c2)},
        {"tau_c", c.tau_c},
        {"tol", c.tol},
        {"points_per_branch", c.points_per_branch},
        {"xi_floor", c.xi_floor},
        {"grid_tol", c.grid_tol},
        {"out", c.out},
        {"out_profile", c.out_profile},
        {"out_report", c.out_report},
        {"profile", c.profile},
        {"format", c.format},
        {"xi_min", c.xi_min},
        {"xi_max", c.xi_max},
        {"q_min", c.q_min},
        {"q_max", c.q_max},
        {"nx", c.nx},
        {"nq", c.nq},
        {"c1_min", c.c1_min},
        {"c1_max", c.c1_max},
        {"c2_min", c.c2_min},
        {"c2_max", c.c2_max},
        {"steps", c.steps},
        {"threads", c.threads},
        {"audit", c.audit},
    };
}

ContourGrid contour_grid(int n, int k, double xi_min, double xi_max, double q_min, double q_max,
                         int nx, int nq) {
    if (nx < 2 || nq < 2 || nx > kMaxContourResolution || nq > kMaxContourResolution) {
        throw ArgumentError("contour resolution must lie in [2, 4096] along each axis");
    }
    if (!(xi_min < xi_max) || !(q_min < q_max)) {
        throw ArgumentError("contour ranges must be non-empty");
    }
    if (n < 3 || k < 2 || k > n) {
        throw ArgumentError("contours: invalid (n, k)");
    }
    ContourGrid g;
    g.n = n;
    g.k = k;
    g.xi.resize(nx);
    g.q.resize(nq);
    for (int i = 0; i < nx; ++i) g.xi[i] = xi_min + (xi_max - xi_min) * i / (nx - 1);
    for (int j = 0; j < nq; ++j) g.q[j] = q_min + (q_max - q_min) * j / (nq - 1);
    g.H.resize(static_cast<std::size_t>(nx) * nq);
    g.mask.resize(g.H.size());
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nq; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * nq + j;
            g.H[idx] = first_integral(g.xi[i], g.q[j], n, k);
            g.mask[idx] = std::abs(g.q[j]) < 1.0 ? 1 : 0;
        }
    }
    return g;
}

namespace {

double geometric(double lo, double hi, int i, int steps) {
    if (steps == 1) return lo;
    return lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1));
}

SweepCell sweep_cell(const RunConfig& cfg, int i, int j) {
    SweepCell cell;
    cell.i = i;
    cell.j = j;
    cell.c1 = geometric(cfg.c1_min, cfg.c1_max, i, cfg.steps);
    cell.c2 = geometric(cfg.c2_min, cfg.c2_max, j, cfg.steps);
    try {
        const ProblemSpec spec = ProblemSpec::finite(cfg.n, cfg.k, cfg.a, cfg.b, cell.c1, cell.c2);
        const Regime regime = classify(spec, cfg.classify_options());
        cell.regime = std::string(to_string(regime.tag));
        cell.margin = spec.log_ratio() - 2.0 * regime.T_bc.value_or(0.0);
        const CylinderProfile profile = build_profile(spec, regime, cfg.grid());
        cell.jump = profile.has_jump();
        cell.inner_slope = profile.xi_p().front();
        cell.outer_slope = profile.xi_p().back();
        if (cfg.audit) {
            cell.audit_passed = audit(profile, spec).passed;
        }
    } catch (const Error& e) {
        cell.regime = "error";
        cell.error = e.what();
    }
    return cell;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.out.empty()) {
        out << text;
    } else {
        write_file(cfg.out, text);
    }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json scalars(const ProblemSpec& spec, const Regime& regime) {
    nlohmann::json s;
    s["T"] = spec.half_width();
    s["T_bc"] = regime.T_bc ? nlohmann::json(*regime.T_bc) : nlohmann::json(nullptr);
    if (spec.is_infinite()) {
        s["p_a"] = nullptr;
        s["p_b"] = nullptr;
    } else {
        s["p_a"] = spec.p_a();
        s["p_b"] = spec.p_b();
    }
    if (regime.t_m) {
        s["m"] = spec.center_radius() * std::exp(*regime.t_m);
    } else {
        s["m"] = nullptr;
    }
    return s;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const ProblemSpec spec = cfg.spec();
    const Regime regime = classify(spec, cfg.classify_options());
    nlohmann::json j = scalars(spec, regime);
    j["regime"] = std::string(to_string(regime.tag));
    j["details"] = to_json(regime);
    j["config"] = to_json(cfg);
    emit(cfg, out, dump(j));
    return kExitPass;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const ProblemSpec spec = cfg.spec();
    const Regime regime = classify(spec, cfg.classify_options());
    const CylinderProfile profile = build_profile(spec, regime, cfg.grid());
    const VerificationReport report = audit(profile, spec);
    if (!cfg.out_profile.empty()) {
        std::ostringstream csv;
        write_profile_csv(csv, profile, spec);
        write_file(cfg.out_profile, csv.str());
    }
    nlohmann::json j;
    j["config"] = to_json(cfg);
    j["regime"] = to_json(regime);
    j["scalars"] = scalars(spec, regime);
    j["report"] = to_json(report);
    if (cfg.out_report.empty()) {
        out << dump(j);
    } else {
        write_file(cfg.out_report, dump(j));
    }
    return report.passed ? kExitPass : kExitAuditFail;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const ProblemSpec spec = cfg.spec();
    std::istringstream in(read_file(cfg.profile));
    const ProfileColumns cols = read_profile_csv(in);
    const Regime regime = classify(spec, cfg.classify_options());
    CylinderProfile profile;
    try {
        profile = CylinderProfile::from_samples(spec.n(), spec.k(), spec.half_width(), regime,
                                                cols.t, cols.xi, cols.xi_p, cols.branch);
    } catch (const ArgumentError& e) {
        // Row numbers from the library are 0-based data rows; the file has a header.
        throw ParseError(std::string(e.what()) + " (file line = row + 2)");
    }
    const VerificationReport report = audit(profile, spec);
    nlohmann::json j;
    j["config"] = to_json(cfg);
    j["report"] = to_json(report);
    if (cfg.out_report.empty()) {
        out << dump(j);
    } else {
        write_file(cfg.out_report, dump(j));
    }
    return report.passed ? kExitPass : kExitAuditFail;
}

int cmd_contours(const RunConfig& cfg, std::ostream& out) {
    const ContourGrid g =
        contour_grid(cfg.n, cfg.k, cfg.xi_min, cfg.xi_max, cfg.q_min, cfg.q_max, cfg.nx, cfg.nq);
    std::string text;
    if (cfg.format == "json") {
        nlohmann::json H = nlohmann::json::array();
        nlohmann::json mask = nlohmann::json::array();
        for (std::size_t i = 0; i < g.xi.size(); ++i) {
            nlohmann::json hr = nlohmann::json::array();
            nlohmann::json mr = nlohmann::json::array();
            for (std::size_t j = 0; j < g.q.size(); ++j) {
                hr.push_back(g.at(i, j));
                mr.push_back(g.masked(i, j));
            }
            H.push_back(std::move(hr));
            mask.push_back(std::move(mr));
        }
        nlohmann::json j{{"n", g.n}, {"k", g.k}, {"xi", g.xi}, {"q", g.q},
                         {"H", H},   {"mask", mask}, {"config", to_json(cfg)}};
        text = j.dump() + "\n";
    } else {
        std::string s = "xi,q,H,mask\n";
        s.reserve(g.H.size() * 64);
        for (std::size_t i = 0; i < g.xi.size(); ++i) {
            for (std::size_t j = 0; j < g.q.size(); ++j) {
                s += format_number(g.xi[i]);
                s += ',';
                s += format_number(g.q[j]);
                s += ',';
                s += format_number(g.at(i, j));
                s += g.masked(i, j) ? ",1\n" : ",0\n";
            }
        }
        text = std::move(s);
    }
    emit(cfg, out, text);
    return kExitPass;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const auto cells = run_sweep(cfg);
    bool all_ok = true;
    for (const auto& c : cells) {
        if (!c.error.empty() || (c.audit_passed && !*c.audit_passed)) all_ok = false;
    }
    std::string text;
    if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& c : cells) {
            rows.push_back({{"i", c.i},
                            {"j", c.j},
                            {"c1", c.c1},
                            {"c2", c.c2},
                            {"regime", c.regime},
                            {"margin", c.margin},
                            {"jump", c.jump},
                            {"inner_slope", c.inner_slope},
                            {"outer_slope", c.outer_slope},
                            {"audit", c.audit_passed ? nlohmann::json(*c.audit_passed)
                                                     : nlohmann::json(nullptr)},
                            {"error", c.error}});
        }
        text = dump({{"config", to_json(cfg)}, {"cells", rows}});
    } else {
        std::string s = "i,j,c1,c2,regime,margin,jump,inner_slope,outer_slope,audit\n";
        for (const auto& c : cells) {
            s += std::to_string(c.i) + ',' + std::to_string(c.j) + ',' + format_number(c.c1) + ',' +
                 format_number(c.c2) + ',' + c.regime + ',' + format_number(c.margin) + ',' +
                 (c.jump ? "1" : "0") + ',' + format_number(c.inner_slope) + ',' +
                 format_number(c.outer_slope) + ',' +
                 (c.audit_passed ? (*c.audit_passed ? "pass" : "fail") : "") + '\n';
        }
        text = std::move(s);
    }
    emit(cfg, out, text);
    return all_ok ? kExitPass : kExitAuditFail;
}

void add_problem_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--n", cfg.n, "Dimension n >= 3")->required();
    sub->add_option("--k", cfg.k, "Order 2 <= k <= n")->required();
    sub->add_option("--a", cfg.a, "Inner radius")->required();
    sub->add_option("--b", cfg.b, "Outer radius")->required();
    sub->add_flag("--infinite", cfg.infinite, "Infinite boundary data");
    sub->add_option("--c1", cfg.c1, "Boundary value on |x| = a");
    sub->add_option("--c2", cfg.c2, "Boundary value on |x| = b");
    sub->add_option("--tau-c", cfg.tau_c, "Half-width of the classification frontier band");
    sub->add_option("--tol", cfg.tol, "Tolerance for T_bc and the root solves");
}

void add_grid_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--points", cfg.points_per_branch, "Samples per monotone branch")
        ->check(CLI::Range(5, 1000000));
    sub->add_option("--xi-floor", cfg.xi_floor, "Truncation ordinate for infinite data");
    sub->add_option("--grid-tol", cfg.grid_tol, "Quadrature tolerance per grid segment");
}

}  // namespace

std::vector<SweepCell> run_sweep(const RunConfig& cfg) {
    if (cfg.steps < 1 || cfg.steps > 1000) {
        throw ArgumentError("--steps must lie in [1, 1000]");
    }
    if (!(cfg.c1_min > 0.0 && cfg.c1_max >= cfg.c1_min && cfg.c2_min > 0.0 &&
          cfg.c2_max >= cfg.c2_min)) {
        throw ArgumentError("sweep ranges need 0 < min <= max");
    }
    const int total = cfg.steps * cfg.steps;
    std::vector<SweepCell> cells(total);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int idx = next++; idx < total; idx = next++) {
            cells[idx] = sweep_cell(cfg, idx / cfg.steps, idx % cfg.steps);
        }
    };
    const int threads = std::max(1, std::min(cfg.threads, total));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return cells;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Radial solutions of the sigma_k Loewner-Nirenberg problem on annuli", "skln"};
    app.require_subcommand(1);

    auto* classify_cmd = app.add_subcommand("classify", "Classify boundary data");
    add_problem_options(classify_cmd, cfg);
    classify_cmd->add_option("--out", cfg.out, "Write JSON here instead of stdout");

    auto* solve_cmd = app.add_subcommand("solve", "Build and audit the profile");
    add_problem_options(solve_cmd, cfg);
    add_grid_options(solve_cmd, cfg);
    solve_cmd->add_option("--out-profile", cfg.out_profile, "Profile CSV path");
    solve_cmd->add_option("--out-report", cfg.out_report, "Report JSON path (default stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "Audit a profile CSV");
    add_problem_options(verify_cmd, cfg);
    verify_cmd->add_option("--profile", cfg.profile, "Profile CSV to audit")->required();
    verify_cmd->add_option("--out-report", cfg.out_report, "Report JSON path (default stdout)");

    auto* contours_cmd = app.add_subcommand("contours", "Export H on a (xi, xi') grid");
    contours_cmd->add_option("--n", cfg.n, "Dimension (default 7)");
    contours_cmd->add_option("--k", cfg.k, "Order (default 2)");
    contours_cmd->add_option("--xi-min", cfg.xi_min);
    contours_cmd->add_option("--xi-max", cfg.xi_max);
    contours_cmd->add_option("--q-min", cfg.q_min);
    contours_cmd->add_option("--q-max", cfg.q_max);
    contours_cmd->add_option("--nx", cfg.nx, "Samples along xi");
    contours_cmd->add_option("--nq", cfg.nq, "Samples along xi'");
    contours_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
    contours_cmd->add_option("--out", cfg.out, "Output path (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Classify and build a (c1, c2) grid");
    sweep_cmd->add_option("--n", cfg.n)->required();
    sweep_cmd->add_option("--k", cfg.k)->required();
    sweep_cmd->add_option("--a", cfg.a)->required();
    sweep_cmd->add_option("--b", cfg.b)->required();
    sweep_cmd->add_option("--tau-c", cfg.tau_c);
    sweep_cmd->add_option("--tol", cfg.tol);
    add_grid_options(sweep_cmd, cfg);
    sweep_cmd->add_option("--c1-min", cfg.c1_min);
    sweep_cmd->add_option("--c1-max", cfg.c1_max);
    sweep_cmd->add_option("--c2-min", cfg.c2_min);
    sweep_cmd->add_option("--c2-max", cfg.c2_max);
    sweep_cmd->add_option("--steps", cfg.steps, "Grid points per axis (geometric spacing)");
    sweep_cmd->add_option("--threads", cfg.threads)->check(CLI::Range(1, 256));
    sweep_cmd->add_flag("--audit", cfg.audit, "Audit every profile");
    sweep_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--out", cfg.out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

    try {
        if (cfg.subcommand == "classify") return cmd_classify(cfg, out);
        if (cfg.subcommand == "solve") return cmd_solve(cfg, out);
        if (cfg.subcommand == "verify") return cmd_verify(cfg, out);
        if (cfg.subcommand == "contours") return cmd_contours(cfg, out);
        if (cfg.subcommand == "sweep") return cmd_sweep(cfg, out);
    } catch (const ParseError& e) {
        err << "skln: parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "skln: " << e.what() << '\n';
        return kExitIo;
    } catch (const InconsistentDataError& e) {
        err << "skln: inconsistent data: " << e.what() << '\n';
        return kExitInconsistent;
    } catch (const ArgumentError& e) {
        err << "skln: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "skln: " << e.what() << '\n';
        return kExitAuditFail;
    }
    return kExitUsage;
}

}  // namespace skln::cli
