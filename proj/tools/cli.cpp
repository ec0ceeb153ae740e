#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellbill/actions.hpp"
#include "ellbill/billiard.hpp"
#include "ellbill/cauchy.hpp"
#include "ellbill/config.hpp"
#include "ellbill/error.hpp"
#include "ellbill/mathieu.hpp"
#include "ellbill/oracle2d.hpp"
#include "ellbill/parallel.hpp"
#include "ellbill/rigidity.hpp"
#include "ellbill/spectrum.hpp"
#include "ellbill/symbol.hpp"

namespace ellbill::cli {

namespace {

using json = nlohmann::json;
using Params = std::map<std::string, std::string>;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string option_help(const std::string& key) {
    static const std::map<std::string, std::string> help = {
        {"alpha", "level I = alpha"},
        {"alpha-grid", "levels lo:hi:count (empty: equally spaced inside the branch)"},
        {"basis", "number of cos(2k theta) basis functions"},
        {"bc", "dirichlet or neumann"},
        {"branch", "inside or outside"},
        {"class", "symmetry class ee, eo, oe or oo (x parity first)"},
        {"cluster-tol", "relative gap below which neighbours are grouped"},
        {"f", "test function of u"},
        {"family", "a (even) or b (odd) angular values, A or B radial values"},
        {"h", "grid spacing"},
        {"hbar-grid", "hbar values lo:hi:count"},
        {"index", "mode index"},
        {"k", "number of eigenvalues"},
        {"lambda-max", "largest eigenvalue"},
        {"m", "radial index"},
        {"n", "angular index, or a comma-separated list for ladders"},
        {"rule", "round (m = round(r0 n)) or shifted (nearest leading-order level)"},
        {"steps", "number of reflections"},
        {"symbol", "expression in theta"},
        {"theta0", "starting boundary angle"},
        {"u-grid", "points lo:hi:count"},
    };
    const auto it = help.find(key);
    return it == help.end() ? std::string() : it->second;
}

/// A leaf command: its option storage and the routine that produces output.
struct Command {
    std::string path;
    CLI::App* app = nullptr;
    Params params;
    void (*body)(const RunConfig&, std::ostream&) = nullptr;
};

const std::string& param(const RunConfig& c, const std::string& key) {
    if (!c.params.contains(key) || !c.params.at(key).is_string() || c.params.at(key).get_ref<const std::string&>().empty())
        throw UsageError("missing --" + key);
    return c.params.at(key).get_ref<const std::string&>();
}

bool has_param(const RunConfig& c, const std::string& key) {
    return c.params.contains(key) && c.params.at(key).is_string() && !c.params.at(key).get_ref<const std::string&>().empty();
}

double param_double(const RunConfig& c, const std::string& key) {
    const std::string& s = param(c, key);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || used == 0) throw UsageError("--" + key + " expects a number, got '" + s + "'");
    return v;
}

int param_int(const RunConfig& c, const std::string& key) {
    const double v = param_double(c, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("--" + key + " expects an integer");
    return static_cast<int>(v);
}

BoundaryCondition param_bc(const RunConfig& c) {
    const std::string& s = param(c, "bc");
    if (s == "dirichlet") return BoundaryCondition::Dirichlet;
    if (s == "neumann") return BoundaryCondition::Neumann;
    throw UsageError("--bc must be dirichlet or neumann");
}

Branch param_branch(const RunConfig& c) {
    const std::string& s = param(c, "branch");
    if (s == "inside") return Branch::Inside;
    if (s == "outside") return Branch::Outside;
    throw UsageError("--branch must be inside or outside");
}

SymmetryClass param_class(const RunConfig& c) {
    try {
        return parse_class(param(c, "class"));
    } catch (const Error&) {
        throw UsageError("--class must be one of ee, eo, oe, oo");
    }
}

std::vector<double> param_grid(const RunConfig& c, const std::string& key) {
    try {
        return parse_grid(param(c, key));
    } catch (const Error& e) {
        throw UsageError("--" + key + ": " + e.what());
    }
}

std::vector<int> param_ints(const RunConfig& c, const std::string& key) {
    try {
        return parse_int_list(param(c, key));
    } catch (const Error& e) {
        throw UsageError("--" + key + ": " + e.what());
    }
}

EllipseGeometry geometry(const RunConfig& c) { return make_ellipse(c.a, c.b); }

std::vector<std::string> metadata(const RunConfig& c, const std::string& command) {
    const EllipseGeometry g = geometry(c);
    const RotationCalibration cal = calibrate_rotation(g, 2000, c.tol.eps_sep);
    json echo = c;
    echo.erase("out");
    echo.erase("threads");
    return {"ellbill " + std::string(kVersion) + " " + command,
            "config_hash " + config_hash(c),
            "config " + echo.dump(),
            "rotation_kappa_outside " + format_number(cal.kappa_outside),
            "rotation_kappa_inside " + format_number(cal.kappa_inside)};
}

std::string fmt(double v) { return format_number(v); }

// ---------------------------------------------------------------- billiard

void billiard_orbit(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const double alpha = param_double(c, "alpha");
    const int steps = param_int(c, "steps");
    if (steps < 0) throw UsageError("--steps must be nonnegative");
    const double theta0 = param_double(c, "theta0");
    level_branch(g, alpha, c.tol.eps_sep);
    const Orbit orbit = iterate_billiard(g, on_level(g, alpha, theta0), static_cast<std::size_t>(steps));
    auto meta = metadata(c, "billiard orbit");
    CsvWriter w(os, meta, {"theta", "p_theta", "eta", "s", "alpha"});
    for (const auto& p : orbit.points) {
        const double th = wrap_angle(p.theta);
        w.row({th, p.p_theta, eta(g, p), arclength(g, th, c.tol.quad_tol), action_I(g, p)});
    }
}

void billiard_rotation(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const auto alphas = param_grid(c, "alpha-grid");
    const int steps = param_int(c, "steps");
    if (steps < 1) throw UsageError("--steps must be positive");
    const RotationCalibration cal = calibrate_rotation(g, 2000, c.tol.eps_sep);
    std::vector<std::vector<double>> rows(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) {
        const double a = alphas[i];
        const Branch br = level_branch(g, a, c.tol.eps_sep);
        const double formula = rotation_number(g, a, c.tol.eps_sep);
        const EmpiricalRotation emp = empirical_rotation(g, a, static_cast<std::size_t>(steps), c.tol.eps_sep);
        const double kappa = br == Branch::Outside ? cal.kappa_outside : cal.kappa_inside;
        const double r_emp = kappa * emp.mean_advance;
        rows[i] = {a, formula, r_emp, formula - r_emp, kappa * emp.std_advance, emp.max_action_drift};
    });
    CsvWriter w(os, metadata(c, "billiard rotation"),
                {"alpha", "r_formula", "r_empirical", "delta", "r_empirical_std", "alpha_drift"});
    for (const auto& r : rows) w.row(r);
}

// ---------------------------------------------------------------- actions

void actions_table(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const Branch branch = param_branch(c);
    std::vector<double> alphas;
    if (has_param(c, "alpha-grid")) {
        alphas = param_grid(c, "alpha-grid");
    } else {
        alphas = level_grid(g, branch, 21, c.tol.eps_sep);
    }
    for (double a : alphas)
        if (level_branch(g, a, c.tol.eps_sep) != branch)
            fail(ErrorCode::OutOfActionInterval, "alpha " + fmt(a) + " is not on the " + std::string(branch_name(branch)) + " branch");
    std::vector<std::vector<double>> rows(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) {
        const double a = alphas[i];
        const double ir = action_radial(g, a, c.tol.quad_tol);
        const double it = action_angular(g, a, c.tol.quad_tol);
        rows[i] = {a, ir, it, ir / it};
    });
    CsvWriter w(os, metadata(c, "actions table"), {"alpha", "I_rho", "I_theta", "A0"});
    for (const auto& r : rows) w.row(r);
}

// ---------------------------------------------------------------- mathieu

void mathieu_curves(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const std::string& family = param(c, "family");
    if (family != "a" && family != "b" && family != "A" && family != "B")
        throw UsageError("--family must be one of a, b, A, B");
    const int index = param_int(c, "index");
    const auto hbars = param_grid(c, "hbar-grid");
    for (double h : hbars)
        if (!(h > 0)) throw UsageError("--hbar-grid must be positive");
    const bool angular = family == "a" || family == "b";
    const Parity parity = (family == "a" || family == "A") ? Parity::Even : Parity::Odd;
    const int lowest = parity == Parity::Even ? 0 : 1;
    if (index < lowest) fail(ErrorCode::OutOfRange, "index below the first mode of the family");
    const BoundaryCondition bc = angular ? BoundaryCondition::Dirichlet : param_bc(c);
    std::vector<std::vector<double>> rows(hbars.size());
    parallel_for(hbars.size(), [&](std::size_t i) {
        if (angular) {
            TruncationInfo info;
            const double a = angular_characteristic(g, hbars[i], AngularMode{parity, index}, &info);
            rows[i] = {hbars[i], a, info.last_change};
        } else {
            const double a = radial_characteristic(g, hbars[i], RadialMode{parity, index, bc});
            rows[i] = {hbars[i], a, 1e-14 * std::max(1.0, std::abs(a))};
        }
    });
    CsvWriter w(os, metadata(c, "mathieu curves"), {"hbar", "alpha", "alpha_error"});
    for (const auto& r : rows) w.row(r);
}

// ---------------------------------------------------------------- spectrum

SolveOptions solve_options(const RunConfig& c) {
    SolveOptions opt;
    opt.hbar_rel_tol = c.tol.root_tol;
    opt.eps_sep = c.tol.eps_sep;
    return opt;
}

double lambda_error(const EigenvalueRecord& r) { return r.lambda * r.hbar_error / r.hbar; }

json record_json(const EigenvalueRecord& r) {
    return json{{"m", r.m},
                {"n", r.n},
                {"class", class_name(r.cls)},
                {"bc", std::string(bc_name(r.bc))},
                {"branch", std::string(branch_name(r.branch))},
                {"hbar", r.hbar},
                {"hbar_error", r.hbar_error},
                {"lambda", r.lambda},
                {"lambda_error", lambda_error(r)},
                {"alpha", r.alpha},
                {"gap", r.gap},
                {"hbar_seed", r.hbar_seed},
                {"bracket_expansions", r.bracket_expansions}};
}

void spectrum_solve(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const EigenvalueRecord r =
        solve_intersection(g, param_int(c, "m"), param_int(c, "n"), param_class(c), param_bc(c), solve_options(c));
    json out = record_json(r);
    out["config_hash"] = config_hash(c);
    out["version"] = kVersion;
    os << out.dump(2) << '\n';
}

LadderRule param_rule(const RunConfig& c) {
    const std::string& s = param(c, "rule");
    if (s == "round") return LadderRule::Round;
    if (s == "shifted") return LadderRule::Shifted;
    throw UsageError("--rule must be round or shifted");
}

void spectrum_ladder(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const Ladder ladder = build_ladder(g, param_double(c, "alpha"), param_class(c), param_bc(c), param_ints(c, "n"),
                                      solve_options(c), param_rule(c));
    const AsymptoticReport rep = asymptotic_check(g, ladder, c.tol.eps_sep);
    auto meta = metadata(c, "spectrum ladder");
    meta.push_back("branch " + std::string(branch_name(ladder.branch)));
    meta.push_back("e_j_slope " + fmt(rep.fit.slope) + " ci95 " + fmt(rep.fit.ci_halfwidth));
    CsvWriter w(os, meta, {"m", "n", "hbar", "lambda", "alpha", "e_j", "lambda_error"});
    for (std::size_t i = 0; i < ladder.entries.size(); ++i) {
        const auto& r = ladder.entries[i];
        w.row({double(r.m), double(r.n), r.hbar, r.lambda, r.alpha, rep.e[i], lambda_error(r)});
    }
}

void spectrum_table(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const double lambda_max = param_double(c, "lambda-max");
    const double tol = param_double(c, "cluster-tol");
    const SpacingReport rep = spacing_report(g, param_bc(c), lambda_max, tol, solve_options(c));
    auto meta = metadata(c, "spectrum table");
    meta.push_back("clusters_of_size_two " + std::to_string(rep.clusters_of_size_two));
    meta.push_back("clusters_of_size_three_or_more " + std::to_string(rep.clusters_of_size_three_or_more));
    CsvWriter w(os, meta,
                {"class", "m", "n", "lambda", "lambda_error", "hbar", "alpha", "branch", "gap_to_next", "cluster"});
    for (const auto& row : rep.rows) {
        const auto& r = row.record;
        w.row({class_name(r.cls), std::to_string(r.m), std::to_string(r.n), fmt(r.lambda), fmt(lambda_error(r)),
               fmt(r.hbar), fmt(r.alpha), std::string(branch_name(r.branch)), fmt(row.gap_to_next),
               std::to_string(row.cluster)});
    }
}

// ---------------------------------------------------------------- quantum limit

void quantum_limit(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const std::string text = param(c, "symbol");
    Expression expr = [&] {
        try {
            return Expression(text, "theta");
        } catch (const Error& e) {
            throw UsageError(std::string("--symbol: ") + e.what());
        }
    }();
    const Ladder ladder = build_ladder(g, param_double(c, "alpha"), param_class(c), param_bc(c), param_ints(c, "n"),
                                      solve_options(c), param_rule(c));
    const QuantumLimitReport rep = convergence_study(g, ladder, expr, text);
    auto meta = metadata(c, "quantum-limit");
    meta.push_back("log_error_slope " + fmt(rep.fit.slope) + " ci95 " + fmt(rep.fit.ci_halfwidth));
    meta.push_back(std::string("decreasing ") + (rep.decreasing ? "true" : "false"));
    CsvWriter w(os, meta, {"n", "m", "lambda", "matrix_element", "limit", "rel_error", "alpha_j", "lambda_error"});
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        w.row({double(r.n), double(r.m), r.lambda, r.matrix_element, r.limit, r.rel_error, r.alpha,
               lambda_error(ladder.entries[i])});
    }
}

// ---------------------------------------------------------------- rigidity

void rigidity_scan(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const int K = param_int(c, "basis");
    if (K < 1) throw UsageError("--basis must be positive");
    const Branch branch = param_branch(c);
    const std::vector<double> alphas =
        has_param(c, "alpha-grid") ? param_grid(c, "alpha-grid") : level_grid(g, branch, 2 * K, c.tol.eps_sep);
    const KernelReport rep = kernel_test(g, K, alphas, branch, [](double u) { return 1 - u; }, c.tol.eps_sep);
    auto meta = metadata(c, "rigidity scan");
    meta.push_back("sigma_min " + fmt(rep.sigma_min));
    meta.push_back("condition " + fmt(rep.condition));
    std::string sv = "singular_values";
    for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i) sv += " " + fmt(rep.singular_values[i]);
    meta.push_back(sv);
    std::vector<std::string> cols{"alpha"};
    for (int j = 0; j < K; ++j) cols.push_back("T" + std::to_string(j));
    CsvWriter w(os, meta, cols);
    for (std::size_t i = 0; i < rep.alphas.size(); ++i) {
        std::vector<double> row{rep.alphas[i]};
        for (int j = 0; j < K; ++j) row.push_back(rep.T(static_cast<Eigen::Index>(i), j));
        w.row(row);
    }
}

void rigidity_abel_roundtrip(const RunConfig& c, std::ostream& os) {
    const std::string text = param(c, "f");
    Expression f = [&] {
        try {
            return Expression(text, "u");
        } catch (const Error& e) {
            throw UsageError(std::string("--f: ") + e.what());
        }
    }();
    const auto us = param_grid(c, "u-grid");
    for (double u : us)
        if (!(u > 0) || u > 1) throw UsageError("--u-grid must lie in (0, 1]");
    auto forward = [&](double x) { return abel_forward(f, x, c.tol.quad_tol); };
    std::vector<std::vector<double>> rows(us.size());
    parallel_for(us.size(), [&](std::size_t i) {
        const double back = abel_inverse(forward, us[i]);
        rows[i] = {us[i], f(us[i]), forward(us[i]), back, std::abs(back - f(us[i]))};
    });
    CsvWriter w(os, metadata(c, "rigidity abel-roundtrip"), {"u", "f", "abel_f", "roundtrip", "error"});
    for (const auto& r : rows) w.row(r);
}

// ---------------------------------------------------------------- oracle2d

void oracle2d(const RunConfig& c, std::ostream& os) {
    const EllipseGeometry g = geometry(c);
    const double h = param_double(c, "h");
    const int k = param_int(c, "k");
    if (!(h > 0) || k < 1) throw UsageError("--h and --k must be positive");
    const FdResult res = fd_eigenvalues(g, h, k);
    auto meta = metadata(c, "oracle2d");
    meta.push_back("unknowns " + std::to_string(res.unknowns));
    meta.push_back("iterations " + std::to_string(res.iterations));
    CsvWriter w(os, meta, {"index", "lambda2", "lambda", "residual", "parity_x", "parity_y"});
    for (std::size_t i = 0; i < res.pairs.size(); ++i) {
        const auto& p = res.pairs[i];
        w.row({double(i), p.lambda2, std::sqrt(p.lambda2), p.residual, double(p.parity_x), double(p.parity_y)});
    }
}

// ---------------------------------------------------------------- wiring

Command& add_command(std::vector<Command>& cmds, CLI::App* app, const std::string& path,
                     void (*body)(const RunConfig&, std::ostream&),
                     std::initializer_list<std::pair<std::string, std::string>> options) {
    cmds.push_back(Command{path, app, {}, body});
    Command& cmd = cmds.back();
    for (const auto& [name, def] : options) cmd.params[name] = def;
    return cmd;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Elliptic billiards, Mathieu spectra and boundary quantum limits", "ellbill"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    double a = 1.4142135623730951, b = 1.0;
    double quad_tol = 1e-12, root_tol = 1e-13, eps_sep = kDefaultEpsSep;
    unsigned threads = 0;
    std::string out_path, config_path;
    app.add_option("--a", a, "semi-major axis")->capture_default_str();
    app.add_option("--b", b, "semi-minor axis")->capture_default_str();
    app.add_option("--quad-tol", quad_tol, "quadrature tolerance")->capture_default_str();
    app.add_option("--root-tol", root_tol, "relative root tolerance")->capture_default_str();
    app.add_option("--eps-sep", eps_sep, "separatrix exclusion width")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--config", config_path, "JSON run configuration; its values override flags");

    // Leaf commands are stored in a list whose elements must not move once options bind to them.
    std::vector<Command> cmds;
    cmds.reserve(16);
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& path, const std::string& help,
                    void (*body)(const RunConfig&, std::ostream&),
                    std::initializer_list<std::pair<std::string, std::string>> options) {
        CLI::App* sub = parent->add_subcommand(name, help);
        sub->set_help_flag("--help", "Print this help message and exit");
        Command& cmd = add_command(cmds, sub, path, body, options);
        for (auto& [key, value] : cmd.params) sub->add_option("--" + key, value, option_help(key))->capture_default_str();
    };

    CLI::App* billiard = app.add_subcommand("billiard", "billiard map orbits and rotation numbers");
    billiard->require_subcommand(1);
    leaf(billiard, "orbit", "billiard orbit", "iterate the billiard map on one level", billiard_orbit,
         {{"alpha", "1.2"}, {"steps", "1000"}, {"theta0", "1.5707963267948966"}});
    leaf(billiard, "rotation", "billiard rotation", "rotation number formula against iteration", billiard_rotation,
         {{"alpha-grid", "1.1:1.9:9"}, {"steps", "2000"}});

    CLI::App* actions = app.add_subcommand("actions", "classical action variables");
    actions->require_subcommand(1);
    leaf(actions, "table", "actions table", "I_rho, I_theta and their ratio", actions_table,
         {{"alpha-grid", ""}, {"branch", "outside"}});

    CLI::App* mathieu = app.add_subcommand("mathieu", "Mathieu characteristic values");
    mathieu->require_subcommand(1);
    leaf(mathieu, "curves", "mathieu curves", "characteristic value against hbar", mathieu_curves,
         {{"family", "a"}, {"index", "0"}, {"hbar-grid", "0.05:1:20"}, {"bc", "dirichlet"}});

    CLI::App* spectrum = app.add_subcommand("spectrum", "separable eigenvalues");
    spectrum->require_subcommand(1);
    leaf(spectrum, "solve", "spectrum solve", "one eigenvalue as a JSON record", spectrum_solve,
         {{"m", ""}, {"n", ""}, {"class", "ee"}, {"bc", "dirichlet"}});
    leaf(spectrum, "ladder", "spectrum ladder", "eigenvalues along the ray of one level", spectrum_ladder,
         {{"alpha", "1.2"}, {"class", "ee"}, {"bc", "dirichlet"}, {"n", "10,20,40,80"}, {"rule", "round"}});
    leaf(spectrum, "table", "spectrum table", "merged spectrum of all classes", spectrum_table,
         {{"lambda-max", "6"}, {"bc", "dirichlet"}, {"cluster-tol", "1e-6"}});

    leaf(&app, "quantum-limit", "quantum-limit", "boundary matrix elements against the limit measure", quantum_limit,
         {{"alpha", "1.2"}, {"symbol", "cos(2*theta)"}, {"class", "ee"}, {"bc", "dirichlet"}, {"n", "10,20,40,80"},
          {"rule", "round"}});

    CLI::App* rigidity = app.add_subcommand("rigidity", "Radon-Leray transform and Abel inversion");
    rigidity->require_subcommand(1);
    leaf(rigidity, "scan", "rigidity scan", "transform matrix on a cosine basis", rigidity_scan,
         {{"basis", "8"}, {"alpha-grid", ""}, {"branch", "inside"}});
    leaf(rigidity, "abel-roundtrip", "rigidity abel-roundtrip", "inverse Abel of the forward Abel transform",
         rigidity_abel_roundtrip, {{"f", "1-u"}, {"u-grid", "0.05:0.95:19"}});

    leaf(&app, "oracle2d", "oracle2d", "finite-difference Dirichlet eigenvalues of the ellipse", oracle2d,
         {{"h", "0.02"}, {"k", "8"}});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const Command* chosen = nullptr;
    for (const auto& cmd : cmds)
        if (cmd.app->parsed()) chosen = &cmd;
    if (!chosen) {
        err << "error: no command selected\n";
        return 2;
    }

    RunConfig cfg;
    cfg.a = a;
    cfg.b = b;
    cfg.tol = Tolerances{quad_tol, root_tol, eps_sep};
    cfg.out = out_path;
    cfg.threads = threads;
    for (const auto& [key, value] : chosen->params) cfg.params[key] = value;

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            err << "error: cannot read config " << config_path << '\n';
            return 2;
        }
        try {
            const json j = json::parse(in);
            const json overridden_params = j.value("params", json::object());
            json merged = cfg;
            merged.merge_patch(j);
            merged["params"] = cfg.params;
            for (const auto& [key, value] : overridden_params.items())
                merged["params"][key] = value.is_string() ? value.get<std::string>() : value.dump();
            cfg = merged.get<RunConfig>();
        } catch (const json::exception& e) {
            err << "error: ParseError: config " << config_path << ": " << e.what() << '\n';
            return 2;
        }
    }

    try {
        cfg.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    worker_count() = cfg.threads;

    std::ostringstream buffer;
    try {
        chosen->body(cfg, buffer);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ParseError ? 2 : 1;
    }

    if (cfg.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        file << buffer.str();
        if (!file) {
            err << "error: cannot write " << cfg.out << '\n';
            return 1;
        }
    }
    return 0;
}

}  // namespace ellbill::cli
