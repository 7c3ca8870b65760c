#include "divexp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "divexp/moments.hpp"
#include "divexp/montecarlo.hpp"
#include "divexp/oracle.hpp"
#include "divexp/pricing.hpp"
#include "divexp/serialize.hpp"

namespace divexp::cli {

namespace {

struct Output {
    std::string format = "json";
    std::string path;
};

struct Params {
    double r = 0.05;
    double sigma = 0.2;
    double T = 1.0;

    GbmParams build() const { return {r, sigma, T}; }
};

struct McFlags {
    std::size_t paths = 100000;
    std::size_t steps = 1000;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
    std::string averaging = "trapezoid";

    McConfig build() const {
        McConfig cfg;
        cfg.paths = paths;
        cfg.steps = steps;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.averaging = averaging == "left" ? Averaging::LeftRiemann : Averaging::Trapezoid;
        return cfg;
    }
};

std::uint64_t default_seed() {
    const char* env = std::getenv("DIVEXP_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw std::invalid_argument("DIVEXP_SEED must be an unsigned integer");
    return v;
}

void add_output(CLI::App* sub, Output& o) {
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.path, "write the report here instead of stdout");
}

void add_params(CLI::App* sub, Params& p) {
    sub->add_option("--r", p.r, "drift rate");
    sub->add_option("--sigma", p.sigma, "volatility");
    sub->add_option("--T", p.T, "horizon");
}

void add_mc(CLI::App* sub, McFlags& m) {
    sub->add_option("--paths", m.paths);
    sub->add_option("--steps", m.steps);
    sub->add_option("--seed", m.seed);
    sub->add_option("--threads", m.threads);
    sub->add_option("--averaging", m.averaging)->check(CLI::IsMember({"trapezoid", "left"}));
}

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// --- subcommands -----------------------------------------------------------

void cmd_moments(std::ostream& out, const Output& o, const Params& in, std::size_t max_m) {
    const GbmParams p = in.build();
    if (o.format == "csv") {
        out << "m,value\n" << std::setprecision(17);
        for (std::size_t m = 0; m <= max_m; ++m) out << m << ',' << moment_A(p, m) << '\n';
        return;
    }
    Json rows = Json::array();
    for (std::size_t m = 0; m <= max_m; ++m) rows.push_back({{"m", m}, {"value", moment_A(p, m)}});
    emit_json(out, {{"params", to_json(p)}, {"moments", rows}});
}

void cmd_corr(std::ostream& out, const Output& o, const Params& in) {
    const GbmParams p = in.build();
    const CorrelationReport c = correlation(p);
    if (o.format == "csv") {
        out << "r,sigma,T,R,covariance,var_S,var_A,s_statistic\n" << std::setprecision(17) << p.r() << ','
            << p.sigma() << ',' << p.T() << ',' << c.R << ',' << c.covariance << ',' << c.var_S << ',' << c.var_A
            << ',' << c.s_statistic << '\n';
        return;
    }
    Json j = {{"params", to_json(p)}};
    j.update(to_json(c));
    emit_json(out, j);
}

void cmd_scan(std::ostream& out, std::ostream& err, const Output& o, const GridSpec& spec) {
    const GridResult g = grid_scan(spec);
    if (o.format == "csv") {
        write_csv(out, g);
        err << std::setprecision(17) << "min_S=" << g.min_S << " at r=" << g.argmin.r << " a=" << g.argmin.a
            << " cells=" << g.cells.size() << " monotonicity_violations=" << g.monotonicity_violations << '\n';
        return;
    }
    Json cells = Json::array();
    for (const GridCell& c : g.cells) cells.push_back(to_json(c));
    emit_json(out, {{"grid",
                     {{"a_min", spec.a_min},
                      {"a_max", spec.a_max},
                      {"na", spec.na},
                      {"r_min", spec.r_min},
                      {"r_max", spec.r_max},
                      {"nr", spec.nr}}},
                    {"min_S", g.min_S},
                    {"argmin", to_json(g.argmin)},
                    {"monotonicity_violations", g.monotonicity_violations},
                    {"cells", cells}});
}

struct Comparison {
    std::string name;
    double analytic;
    McEstimate estimate;
};

double z_score(const Comparison& c) { return (c.estimate.value - c.analytic) / c.estimate.std_error; }

void cmd_mc(std::ostream& out, const Output& o, const Params& in, const McFlags& flags, std::size_t max_m) {
    const GbmParams p = in.build();
    const McConfig cfg = flags.build();
    const McSummary s = run_summary(p, cfg, max_m);

    std::vector<Comparison> rows{{"mean_S", mean_S(p), s.mean_S},
                                 {"mean_A", mean_A(p), s.mean_A},
                                 {"second_moment_A", second_moment_A(p), s.second_moment_A},
                                 {"cross_moment_SA", cross_moment_SA(p), s.cross_moment_SA}};
    if (p.sigma() > 0.0) rows.push_back({"R", correlation(p).R, s.correlation});
    for (std::size_t m = 3; m <= max_m; ++m) rows.push_back({"moment_A_" + std::to_string(m), moment_A(p, m), s.moments_A[m]});

    if (o.format == "csv") {
        out << "name,analytic,estimate,stderr,z\n" << std::setprecision(17);
        for (const auto& c : rows) {
            out << c.name << ',' << c.analytic << ',' << c.estimate.value << ',' << c.estimate.std_error << ','
                << z_score(c) << '\n';
        }
        return;
    }
    Json list = Json::array();
    double worst = 0.0;
    for (const auto& c : rows) {
        const double z = z_score(c);
        // A zero stderr (sigma = 0) makes z meaningless rather than infinite.
        if (std::isfinite(z)) worst = std::max(worst, std::abs(z));
        list.push_back({{"name", c.name}, {"analytic", c.analytic}, {"estimate", to_json(c.estimate, cfg)}, {"z", z}});
    }
    emit_json(out, {{"params", to_json(p)}, {"config", to_json(cfg)}, {"comparisons", list}, {"max_abs_z", worst}});
}

void cmd_price(std::ostream& out, const Output& o, const Params& in, const std::string& style, double K,
               const McFlags& flags, std::size_t mc_paths) {
    const GbmParams p = in.build();
    const bool floating = style == "floating";
    const PriceQuote q = floating ? floating_strike_asian_approx(p) : fixed_strike_asian_approx(p, K);

    std::optional<McEstimate> mc;
    McConfig cfg = flags.build();
    if (mc_paths > 0) {
        cfg.paths = mc_paths;
        mc = estimate_payoff(p, cfg, floating ? Payoff::floating_strike() : Payoff::fixed_strike(K));
    }

    if (o.format == "csv") {
        out << "style,method,value,mc_value,mc_stderr\n" << std::setprecision(17) << style << ','
            << to_string(q.method) << ',' << q.value << ',';
        if (mc) out << mc->value << ',' << mc->std_error;
        else out << ',';
        out << '\n';
        return;
    }
    Json j = {{"style", style}, {"quote", to_json(q)}};
    if (mc) {
        j["mc"] = to_json(*mc, cfg);
        j["relative_gap"] = (q.value - mc->value) / mc->value;
        j["z"] = (q.value - mc->value) / mc->std_error;
    }
    emit_json(out, j);
}

int cmd_oracle(std::ostream& out, const Output& o, const OracleOptions& opt) {
    const std::vector<OracleCheck> checks = run_oracle_suite(opt);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
    if (o.format == "csv") {
        out << "name,passed,worst,tolerance,cases\n" << std::setprecision(17);
        for (const auto& c : checks) {
            out << '"' << c.name << "\"," << (c.passed ? "true" : "false") << ',' << c.worst << ',' << c.tolerance
                << ',' << c.cases << '\n';
        }
    } else {
        Json list = Json::array();
        for (const auto& c : checks) {
            list.push_back({{"name", c.name},
                            {"passed", c.passed},
                            {"worst", c.worst},
                            {"tolerance", c.tolerance},
                            {"cases", c.cases}});
        }
        emit_json(out, {{"seed", opt.seed}, {"checks", list}, {"passed", ok}});
    }
    return ok ? kOk : kOracleFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential divided differences for Brownian-motion averages"};
    app.name("divexp");
    app.require_subcommand(1, 1);

    Output output;
    Params params;
    McFlags mc;
    GridSpec grid;
    std::size_t max_m = 4;
    std::size_t mc_max_m = 2;
    std::string style = "floating";
    double strike = 1.0;
    std::size_t price_paths = 0;
    OracleOptions oracle;

    try {
        mc.seed = default_seed();
        oracle.seed = mc.seed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    auto* moments = app.add_subcommand("moments", "E A(T)^m for m = 0..max-m");
    add_params(moments, params);
    add_output(moments, output);
    moments->add_option("--max-m", max_m);

    auto* corr = app.add_subcommand("corr", "correlation of S(T) and A(T)");
    add_params(corr, params);
    add_output(corr, output);

    auto* scan = app.add_subcommand("scan", "S(r, a) on a grid");
    add_output(scan, output);
    scan->add_option("--a-min", grid.a_min);
    scan->add_option("--a-max", grid.a_max);
    scan->add_option("--na", grid.na);
    scan->add_option("--r-min", grid.r_min);
    scan->add_option("--r-max", grid.r_max);
    scan->add_option("--nr", grid.nr);

    auto* mcsub = app.add_subcommand("mc", "Monte Carlo estimates against closed forms");
    add_params(mcsub, params);
    add_output(mcsub, output);
    add_mc(mcsub, mc);
    mcsub->add_option("--m", mc_max_m, "highest moment of A to compare");

    auto* price = app.add_subcommand("price", "Asian call approximation");
    add_params(price, params);
    add_output(price, output);
    add_mc(price, mc);
    price->add_option("--style", style)->check(CLI::IsMember({"floating", "fixed"}));
    price->add_option("--K", strike, "fixed strike");
    price->add_option("--mc-paths", price_paths, "paths for an optional Monte Carlo comparison (0 = none)");

    auto* oracle_sub = app.add_subcommand("oracle", "cross-check suite");
    add_output(oracle_sub, output);
    oracle_sub->add_option("--seed", oracle.seed);
    oracle_sub->add_option("--samples", oracle.hg_samples, "Hermite-Genocchi samples per case");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    // csv is the natural default for the grid
    if (scan->parsed() && scan->count("--format") == 0) output.format = "csv";

    std::ofstream file;
    if (!output.path.empty()) {
        file.open(output.path);
        if (!file) {
            err << "error: cannot open " << output.path << '\n';
            return kUsage;
        }
    }
    std::ostream& sink = output.path.empty() ? out : file;

    try {
        if (moments->parsed()) cmd_moments(sink, output, params, max_m);
        else if (corr->parsed()) cmd_corr(sink, output, params);
        else if (scan->parsed()) cmd_scan(sink, err, output, grid);
        else if (mcsub->parsed()) cmd_mc(sink, output, params, mc, mc_max_m);
        else if (price->parsed()) cmd_price(sink, output, params, style, strike, mc, price_paths);
        else if (oracle_sub->parsed()) return cmd_oracle(sink, output, oracle);
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}

}  // namespace divexp::cli
