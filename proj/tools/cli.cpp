#include "cli.hpp"

#include "ngi/closedform.hpp"
#include "ngi/concentration.hpp"
#include "ngi/export.hpp"
#include "ngi/feescan.hpp"
#include "ngi/mdp.hpp"
#include "ngi/model.hpp"
#include "ngi/simulator.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

namespace ngi::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_number(const std::string& text)
{
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
        throw UsageError("not a number: '" + text + "'");
    }
    return x;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty()) throw UsageError("empty grid");
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw UsageError("grid '" + t + "' is not of the form start:stop:step");
        const double a = parse_number(parts[0]);
        const double b = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        if (!(step > 0.0)) throw UsageError("grid step must be positive in '" + t + "'");
        if (b < a) throw UsageError("grid stop is below start in '" + t + "'");
        const double n = std::floor((b - a) / step + 1e-9) + 1.0;
        if (n > 1e6) throw UsageError("grid '" + t + "' has too many points");
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            // Snap to 12 decimals so 0.1 + 2*0.1 prints as 0.3.
            out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
        }
        return out;
    }
    for (const std::string& p : split(t, ',')) out.push_back(parse_number(p));
    return out;
}

std::uint64_t parse_count(const std::string& text)
{
    const std::string t = trim(text);
    std::uint64_t n = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
    if (!t.empty() && ec == std::errc() && ptr == t.data() + t.size()) return n;
    const double x = parse_number(t);
    if (x < 0.0 || x != std::floor(x) || x > 1e18) throw UsageError("not a non-negative integer: '" + t + "'");
    return static_cast<std::uint64_t>(x);
}

namespace {

struct Global {
    std::string format = "json";
    std::string out;
    std::string config;
};

/// Protocol flags shared by several subcommands. Grids are kept as text and
/// resolved against the config file once parsing is done.
struct ParamFlags {
    std::string alpha;
    std::string r;
    double gamma = 0.5;
    CLI::Option* gamma_opt = nullptr;

    void add_to(CLI::App* sub, bool with_r = true)
    {
        sub->add_option("--alpha,--alpha-grid", alpha, "selfish mining share: value, list or a:b:step");
        if (with_r) sub->add_option("--r,--r-grid", r, "split ratio: value, list or a:b:step");
        gamma_opt = sub->add_option("--gamma", gamma, "tie-breaking share of honest miners (default 0.5)");
    }
};

struct Resolved {
    ProtocolParams base;
    std::vector<double> alphas;
    std::vector<double> rs;
};

Resolved resolve(const ParamFlags& f, const Global& g)
{
    Resolved res;
    if (!g.config.empty()) {
        std::ifstream in(g.config);
        if (!in) throw std::runtime_error("cannot open config file " + g.config);
        res.base = read_params_config(in);
    }
    if (f.gamma_opt && f.gamma_opt->count() > 0) res.base.gamma = f.gamma;
    if (!f.alpha.empty()) res.alphas = parse_grid(f.alpha);
    else if (!g.config.empty()) res.alphas = {res.base.alpha};
    else throw UsageError("--alpha is required");
    res.rs = f.r.empty() ? std::vector<double>{res.base.split_ratio} : parse_grid(f.r);
    // Validate every grid point up front so errors are usage errors, not partial output.
    for (double a : res.alphas) {
        for (double r : res.rs) {
            ProtocolParams p = res.base;
            p.alpha = a;
            p.split_ratio = r;
            validate(p);
        }
    }
    return res;
}

ProtocolParams at(const Resolved& res, double alpha, double r)
{
    ProtocolParams p = res.base;
    p.alpha = alpha;
    p.split_ratio = r;
    return p;
}

nlohmann::ordered_json param_json(const Resolved& res, const ParamFlags& f)
{
    return {{"alpha", f.alpha.empty() ? format_double(res.base.alpha) : f.alpha},
            {"r", f.r.empty() ? format_double(res.base.split_ratio) : f.r},
            {"gamma", res.base.gamma}};
}

std::vector<Regime> parse_regimes(const std::string& text)
{
    if (trim(text) == "all") return {Regime::fee, Regime::equal, Regime::key};
    std::vector<Regime> out;
    for (const std::string& p : split(text, ',')) out.push_back(parse_regime(p));
    if (out.empty()) throw UsageError("empty regime list");
    return out;
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

// ---------------------------------------------------------------------------

struct BoundsFlags {
    std::string alpha;
    std::string cls = "all";
};

OutputEnvelope cmd_bounds(const BoundsFlags& f)
{
    if (f.alpha.empty()) throw UsageError("--alpha is required");
    const auto grid = parse_grid(f.alpha);
    const closedform::TxClass cls = closedform::parse_tx_class(f.cls);
    for (double a : grid) {
        if (!(a >= 0.0 && a < 0.5)) throw UsageError("alpha grid must lie in [0, 0.5)");
    }
    OutputEnvelope env;
    env.command = "bounds";
    env.parameters = {{"alpha", f.alpha}, {"class", f.cls}};
    Table& t = env.table("bounds", {"alpha", "inclusion_bound_original", "inclusion_bound_yin", "extension_bound",
                                    "capacity_lower", "capacity_upper", "feasible_lower", "feasible_upper", "empty"});
    for (double a : grid) {
        const auto b = closedform::ratio_bounds(a);
        const auto iv = closedform::feasible_interval(a, cls);
        t.add({a, b.inclusion_lower_v1, b.inclusion_lower_v2, b.extension_upper, b.capacity_lower, b.capacity_upper,
               iv.lower, iv.upper, iv.empty});
    }
    return env;
}

// ---------------------------------------------------------------------------

struct RevenueFlags {
    ParamFlags params;
    std::string rho = "0:1:0.1";
    std::string attack = "both";
};

OutputEnvelope cmd_revenue(const RevenueFlags& f, const Global& g)
{
    const Resolved res = resolve(f.params, g);
    const auto rhos = parse_grid(f.rho);
    std::vector<std::string> attacks;
    if (f.attack == "both") attacks = {"inclusion", "extension"};
    else if (f.attack == "inclusion" || f.attack == "extension") attacks = {f.attack};
    else throw UsageError("attack must be inclusion, extension or both");
    for (double rho : rhos) {
        if (!(rho >= 0.0 && rho <= 1.0)) throw UsageError("rho out of [0,1]");
    }

    OutputEnvelope env;
    env.command = "revenue";
    env.parameters = param_json(res, f.params);
    env.parameters["rho"] = f.rho;
    env.parameters["attack"] = f.attack;
    Table& curve = env.table("revenue", {"attack", "alpha", "r", "rho", "revenue"});
    Table& best = env.table("optimal", {"attack", "alpha", "r", "revenue", "rho"});
    for (const std::string& attack : attacks) {
        const bool inclusion = attack == "inclusion";
        for (double a : res.alphas) {
            for (double r : res.rs) {
                for (double rho : rhos) {
                    const double u = inclusion ? closedform::inclusion_attack_revenue(a, r, rho)
                                               : closedform::extension_attack_revenue(a, r, rho);
                    curve.add({attack, a, r, rho, u});
                }
                const auto opt = inclusion ? closedform::optimal_inclusion_revenue(a, r)
                                           : closedform::optimal_extension_revenue(a, r);
                best.add({attack, a, r, opt.revenue, opt.rho});
            }
        }
    }
    return env;
}

// ---------------------------------------------------------------------------

struct MdpFlags {
    ParamFlags params;
    std::string regime = "all";
    int truncation = 20;
    double eps_inner = 1e-9;
    double eps_outer = 1e-7;
    std::uint64_t max_inner_iterations = 2'000'000;
    std::string accounting = "fee_conserving";
    std::string policy_out;
};

mdp::FeeAccounting parse_accounting(const std::string& text)
{
    if (text == "fee_conserving") return mdp::FeeAccounting::fee_conserving;
    if (text == "as_published") return mdp::FeeAccounting::as_published;
    throw UsageError("accounting must be fee_conserving or as_published");
}

struct MdpPoint {
    Regime regime;
    double alpha;
    double r;
};

OutputEnvelope cmd_mdp(const MdpFlags& f, const Global& g)
{
    const Resolved res = resolve(f.params, g);
    const auto regimes = parse_regimes(f.regime);
    const auto accounting = parse_accounting(f.accounting);
    if (f.truncation < 2) throw UsageError("--L must be at least 2");

    std::vector<MdpPoint> points;
    for (Regime reg : regimes) {
        for (double a : res.alphas) {
            for (double r : res.rs) points.push_back({reg, a, r});
        }
    }
    if (!f.policy_out.empty() && points.size() != 1) {
        throw UsageError("--policy-out needs a single (alpha, r, regime) point");
    }

    mdp::SolveOptions opt;
    opt.eps_inner = f.eps_inner;
    opt.eps_outer = f.eps_outer;
    opt.max_inner_iterations = f.max_inner_iterations;
    // One level of parallelism: across grid points when there are several.
    opt.parallel = points.size() == 1;

    const auto n = static_cast<std::int64_t>(points.size());
    std::vector<std::optional<mdp::SolveResult>> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(dynamic) if (n > 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const MdpPoint& p = points[static_cast<std::size_t>(i)];
        try {
            const auto table = mdp::build_transitions(at(res, p.alpha, p.r), f.truncation, accounting);
            results[static_cast<std::size_t>(i)] = mdp::solve(table, weights_for(p.regime), opt);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const mdp::SolverError& e) {
            std::ostringstream os;
            os << e.what() << " [alpha=" << points[i].alpha << " r=" << points[i].r
               << " regime=" << to_string(points[i].regime) << " L=" << f.truncation << "]";
            throw mdp::SolverError(os.str(), e.w(), e.iterations(), e.span());
        }
    }

    OutputEnvelope env;
    env.command = "mdp";
    env.parameters = param_json(res, f.params);
    env.parameters["regime"] = f.regime;
    env.parameters["L"] = f.truncation;
    env.parameters["eps_inner"] = f.eps_inner;
    env.parameters["eps_outer"] = f.eps_outer;
    env.parameters["accounting"] = f.accounting;
    Table& t = env.table("revenue", {"alpha", "regime", "r", "gamma", "L", "revenue", "outer_iterations",
                                     "inner_iterations"});
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& s = *results[i];
        t.add({points[i].alpha, std::string(to_string(points[i].regime)), points[i].r, res.base.gamma,
               std::int64_t{f.truncation}, s.revenue, std::int64_t{s.outer_iterations}, as_int(s.inner_iterations)});
    }
    if (!f.policy_out.empty()) {
        std::ofstream pout(f.policy_out);
        if (!pout) throw std::runtime_error("cannot write " + f.policy_out);
        pout << io::policy_to_json(*results.front()).dump(1) << '\n';
    }
    return env;
}

// ---------------------------------------------------------------------------

struct SimulateFlags {
    ParamFlags params;
    std::string strategy = "honest";
    std::string rho = "1";
    std::string m = "1000000";
    std::uint64_t seed = 1;
    std::string interval = "exponential";
    std::string regime = "fee";
    std::uint32_t batches = 100;
    int truncation = 20;
};

OutputEnvelope cmd_simulate(const SimulateFlags& f, const Global& g)
{
    const Resolved res = resolve(f.params, g);
    const auto rhos = parse_grid(f.rho);
    const std::uint64_t horizon = parse_count(f.m);
    const Regime regime = parse_regime(f.regime);
    const auto mode = sim::parse_interval_mode(f.interval);
    if (f.strategy != "honest" && f.strategy != "inclusion" && f.strategy != "extension" && f.strategy != "mdp") {
        throw UsageError("strategy must be honest, inclusion, extension or mdp");
    }
    const bool uses_rho = f.strategy == "inclusion" || f.strategy == "extension";
    const std::vector<double> rho_grid = uses_rho ? rhos : std::vector<double>{0.0};

    std::vector<sim::SimConfig> configs;
    std::vector<double> rho_of;
    for (double a : res.alphas) {
        for (double r : res.rs) {
            std::shared_ptr<const mdp::SolveResult> solution;
            if (f.strategy == "mdp") {
                const auto table = mdp::build_transitions(at(res, a, r), f.truncation);
                solution = std::make_shared<const mdp::SolveResult>(mdp::solve(table, weights_for(regime)));
            }
            for (double rho : rho_grid) {
                sim::SimConfig c;
                c.params = at(res, a, r);
                c.horizon_keyblocks = horizon;
                c.seed = f.seed;
                c.interval_mode = mode;
                c.weights = weights_for(regime);
                c.batches = f.batches;
                if (f.strategy == "inclusion") c.strategy = sim::Inclusion{rho};
                else if (f.strategy == "extension") c.strategy = sim::Extension{rho};
                else if (f.strategy == "mdp") c.strategy = sim::MdpPolicy{solution};
                configs.push_back(std::move(c));
                rho_of.push_back(rho);
            }
        }
    }
    std::vector<sim::SimReport> reports;
    try {
        reports = sim::sweep(configs);
    } catch (const sim::SweepError& e) {
        throw UsageError(e.what());
    }

    OutputEnvelope env;
    env.command = "simulate";
    env.seeds = {f.seed};
    env.parameters = param_json(res, f.params);
    env.parameters["strategy"] = f.strategy;
    env.parameters["rho"] = f.rho;
    env.parameters["m"] = horizon;
    env.parameters["interval"] = f.interval;
    env.parameters["regime"] = f.regime;
    env.parameters["batches"] = f.batches;
    if (f.strategy == "mdp") env.parameters["L"] = f.truncation;
    Table& t = env.table("simulation",
                         {"strategy", "alpha", "r", "rho", "seed", "relative_revenue", "std_error",
                          "selfish_key_rewards", "honest_key_rewards", "selfish_fees", "honest_fees",
                          "orphaned_fee_units", "generated_fee_units", "settled_blocks", "boundary_visits"});
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        t.add({f.strategy, configs[i].params.alpha, configs[i].params.split_ratio, rho_of[i], as_int(rep.seed),
               rep.relative_revenue, rep.std_error, as_int(rep.selfish_key_rewards), as_int(rep.honest_key_rewards),
               rep.selfish_fees, rep.honest_fees, rep.orphaned_fee_units, rep.generated_fee_units,
               as_int(rep.settled_blocks), as_int(rep.boundary_visits)});
    }
    return env;
}

// ---------------------------------------------------------------------------

struct PairsFlags {
    std::string alpha;
    std::string m = "10001";
    std::string delta = "0.1";
    std::string trials = "10000";
    std::uint64_t seed = 1;
    std::string kind = "z";
};

OutputEnvelope cmd_pairs(const PairsFlags& f)
{
    if (f.alpha.empty()) throw UsageError("--alpha is required");
    const auto alphas = parse_grid(f.alpha);
    const auto deltas = parse_grid(f.delta);
    std::vector<std::uint64_t> ms;
    for (const std::string& p : split(f.m, ',')) ms.push_back(parse_count(p));
    const std::uint64_t trials = parse_count(f.trials);
    if (trials == 0) throw UsageError("--trials must be positive");
    concentration::PairKind kind;
    if (f.kind == "z") kind = concentration::PairKind::selfish_honest;
    else if (f.kind == "k") kind = concentration::PairKind::honest_selfish;
    else throw UsageError("kind must be z or k");
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw UsageError("alpha out of [0,1]");
    }
    for (double d : deltas) {
        if (!(d > 0.0)) throw UsageError("delta must be positive");
    }
    for (std::uint64_t m : ms) {
        if (m < 2) throw UsageError("m must be at least 2");
    }

    OutputEnvelope env;
    env.command = "pairs";
    env.seeds = {f.seed};
    env.parameters = {{"alpha", f.alpha}, {"m", f.m}, {"delta", f.delta},
                      {"trials", trials}, {"kind", f.kind}};
    Table& t = env.table("pairs", {"alpha", "m", "delta", "kind", "trials", "empirical", "std_error", "bound",
                                   "mean_count", "expected_count"});
    for (double a : alphas) {
        for (std::uint64_t m : ms) {
            for (double d : deltas) {
                const auto est = concentration::empirical_pair_deviation(a, m, d, trials, f.seed, kind);
                t.add({a, as_int(m), d, f.kind, as_int(est.trials), est.probability, est.std_error,
                       concentration::pair_deviation_bound(a, m, d), est.mean_count, est.expected_count});
            }
        }
    }
    return env;
}

// ---------------------------------------------------------------------------

struct FeesFlags {
    std::string input;
    std::string edges = "0,0.00001,0.00005,0.0001,0.0002,0.0005,0.001,0.01";
    double whale_threshold = 0.0005;
};

OutputEnvelope cmd_fees(const FeesFlags& f, std::ostream& err)
{
    const auto edges = parse_grid(f.edges);
    std::ifstream in(f.input);
    if (!in) throw std::runtime_error("cannot open " + f.input);
    const auto parsed = fees::parse_fees(in);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) err << f.input << ':' << e.line << ": " << e.message << '\n';
        throw std::runtime_error(std::to_string(parsed.errors.size()) + " malformed line(s) in " + f.input);
    }
    if (parsed.records.empty()) throw std::runtime_error("no fee records in " + f.input);
    const auto dist = fees::distribution(parsed.records, edges);
    const auto classes = fees::classify(parsed.records, f.whale_threshold);

    OutputEnvelope env;
    env.command = "fees";
    env.parameters = {{"input", f.input}, {"edges", f.edges}, {"whale_threshold", f.whale_threshold}};
    Table& hist = env.table("histogram", {"lower", "upper", "count"});
    for (std::size_t i = 0; i < dist.bucket_counts().size(); ++i) {
        hist.add({dist.edges()[i], dist.edges()[i + 1], as_int(dist.bucket_counts()[i])});
    }
    Table& cdf = env.table("cdf", {"threshold", "fraction_below"});
    for (double e : dist.edges()) cdf.add({e, dist.cdf_at(e)});
    Table& summary = env.table("summary", {"count", "underflow", "overflow", "whale_threshold", "regular_count",
                                           "whale_count", "regular_fraction", "mean_regular_fee", "mean_whale_fee",
                                           "mean_fee"});
    summary.add({as_int(dist.count()), as_int(dist.underflow()), as_int(dist.overflow()), f.whale_threshold,
                 as_int(classes.regular_count), as_int(classes.whale_count), classes.regular_fraction,
                 classes.mean_regular_fee, classes.mean_whale_fee, classes.mean_fee});
    return env;
}

void apply_thread_cap()
{
    const char* env = std::getenv("NG_INCENTIVES_THREADS");
    if (!env || !*env) return;
    const std::uint64_t n = parse_count(env);
    if (n == 0 || n > 4096) throw UsageError("NG_INCENTIVES_THREADS must be a positive thread count");
    omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bitcoin-NG incentive analysis: attack bounds, selfish-mining MDP and simulation",
                 tool_name()};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_name()) + " " + tool_version());

    Global g;
    app.add_option("--format", g.format, "output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", g.out, "write output to this file instead of stdout");
    app.add_option("--config", g.config, "flat name = value file with protocol parameters");

    BoundsFlags bounds;
    auto* s_bounds = app.add_subcommand("bounds", "split-ratio bounds and feasible interval per alpha");
    s_bounds->add_option("--alpha,--alpha-grid", bounds.alpha, "alpha value, list or a:b:step in [0, 0.5)");
    s_bounds->add_option("--class", bounds.cls, "whale, regular or all");

    RevenueFlags revenue;
    auto* s_revenue = app.add_subcommand("revenue", "closed-form revenue of the microblock attacks");
    revenue.params.add_to(s_revenue);
    s_revenue->add_option("--rho", revenue.rho, "withholding fraction: value, list or a:b:step");
    s_revenue->add_option("--attack", revenue.attack, "inclusion, extension or both");

    MdpFlags mdpf;
    auto* s_mdp = app.add_subcommand("mdp", "optimal selfish-mining revenue from the decision process");
    mdpf.params.add_to(s_mdp);
    s_mdp->add_option("--regime", mdpf.regime, "fee, equal, key, a comma list or all");
    s_mdp->add_option("--L", mdpf.truncation, "truncation length (default 20)");
    s_mdp->add_option("--eps-inner", mdpf.eps_inner, "span tolerance of value iteration");
    s_mdp->add_option("--eps-outer", mdpf.eps_outer, "bisection tolerance on the revenue");
    s_mdp->add_option("--max-inner-iterations", mdpf.max_inner_iterations, "sweep cap per bisection step");
    s_mdp->add_option("--accounting", mdpf.accounting, "fee_conserving or as_published");
    s_mdp->add_option("--policy-out", mdpf.policy_out, "write the solved policy as JSON");

    SimulateFlags simf;
    auto* s_sim = app.add_subcommand("simulate", "Monte Carlo mining simulation");
    simf.params.add_to(s_sim);
    s_sim->add_option("--strategy", simf.strategy, "honest, inclusion, extension or mdp");
    s_sim->add_option("--rho", simf.rho, "withholding fraction for the attacks");
    s_sim->add_option("--m", simf.m, "key blocks to simulate");
    s_sim->add_option("--seed", simf.seed, "random seed");
    s_sim->add_option("--interval", simf.interval, "exponential or deterministic fee intervals");
    s_sim->add_option("--regime", simf.regime, "reward weighting: fee, equal or key");
    s_sim->add_option("--batches", simf.batches, "batches for the standard error");
    s_sim->add_option("--L", simf.truncation, "truncation for the mdp strategy");

    PairsFlags pairs;
    auto* s_pairs = app.add_subcommand("pairs", "adjacent-pair deviation probability versus its bound");
    s_pairs->add_option("--alpha,--alpha-grid", pairs.alpha, "alpha value, list or a:b:step");
    s_pairs->add_option("--m", pairs.m, "sequence length(s), comma separated");
    s_pairs->add_option("--delta", pairs.delta, "relative deviation: value, list or a:b:step");
    s_pairs->add_option("--trials", pairs.trials, "Monte Carlo trials");
    s_pairs->add_option("--seed", pairs.seed, "random seed");
    s_pairs->add_option("--kind", pairs.kind, "z for (selfish, honest) pairs, k for (honest, selfish)");

    FeesFlags feesf;
    auto* s_fees = app.add_subcommand("fees", "fee histogram, cdf and whale split of a fee file");
    s_fees->add_option("--input", feesf.input, "fee file: one fee or height,fee per line")->required();
    s_fees->add_option("--edges", feesf.edges, "histogram edges: list or a:b:step");
    s_fees->add_option("--whale-threshold", feesf.whale_threshold, "fees at or above this are whales");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        std::ostringstream es;
        const int code = app.exit(e, os, es);
        out << os.str();
        err << es.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        apply_thread_cap();
        const Format format = parse_format(g.format);
        OutputEnvelope env;
        if (*s_bounds) env = cmd_bounds(bounds);
        else if (*s_revenue) env = cmd_revenue(revenue, g);
        else if (*s_mdp) env = cmd_mdp(mdpf, g);
        else if (*s_sim) env = cmd_simulate(simf, g);
        else if (*s_pairs) env = cmd_pairs(pairs);
        else env = cmd_fees(feesf, err);

        if (g.out.empty()) {
            write(out, env, format);
        } else {
            std::ofstream file(g.out);
            if (!file) throw std::runtime_error("cannot write " + g.out);
            write(file, env, format);
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << tool_name() << ": usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {  // ValidationError
        err << tool_name() << ": usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {  // DomainError
        err << tool_name() << ": usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const mdp::SolverError& e) {
        err << tool_name() << ": solver did not converge: " << e.what() << " (last span " << e.span() << ")\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << tool_name() << ": error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace ngi::cli
