#include "ngi/closedform.hpp"
#include "ngi/mdp.hpp"
#include "ngi/simulator.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

using namespace ngi;
using namespace ngi::sim;
using oracle::Attack;

namespace {

SimConfig config(double alpha, double r, Strategy strategy, std::uint64_t m = 200'000, std::uint64_t seed = 3)
{
    SimConfig c;
    c.params.alpha = alpha;
    c.params.split_ratio = r;
    c.strategy = std::move(strategy);
    c.horizon_keyblocks = m;
    c.seed = seed;
    return c;
}

void check_conservation(const SimReport& rep)
{
    const double accounted = rep.selfish_fees + rep.honest_fees + rep.orphaned_fee_units;
    CHECK(std::fabs(accounted - rep.generated_fee_units) <= 1e-9 * std::max(1.0, rep.generated_fee_units));
    CHECK(rep.selfish_key_rewards + rep.honest_key_rewards == rep.settled_blocks);
    const auto& w = rep.weights;
    const double selfish = w.key_weight * rep.selfish_key_rewards + w.fee_weight * rep.selfish_fees;
    const double total = selfish + w.key_weight * rep.honest_key_rewards + w.fee_weight * rep.honest_fees;
    CHECK(std::fabs(rep.relative_revenue - selfish / total) <= 1e-12);
    CHECK(rep.relative_revenue >= 0.0);
    CHECK(rep.relative_revenue <= 1.0);
}

std::shared_ptr<const mdp::SolveResult> solved(double alpha, Regime regime, int L = 20)
{
    ProtocolParams p;
    p.alpha = alpha;
    return std::make_shared<const mdp::SolveResult>(mdp::solve(mdp::build_transitions(p, L), weights_for(regime)));
}

}  // namespace

TEST_SUITE("simulator")
{
    TEST_CASE("honest mining earns the fair share")
    {
        for (double a : {0.1, 0.2, 0.3}) {
            const auto rep = run(config(a, 0.4, Honest{}, 400'000));
            CHECK(std::fabs(rep.relative_revenue - a) <= std::max(0.005, 4 * rep.std_error));
            CHECK(rep.orphaned_fee_units == 0.0);
            check_conservation(rep);
        }
    }

    TEST_CASE("microblock attacks converge to the pair oracle")
    {
        for (double a : {0.1, 0.3}) {
            for (double r : {0.2, 0.8}) {
                for (double rho : {0.5, 1.0}) {
                    for (auto mode : {IntervalMode::exponential, IntervalMode::deterministic}) {
                        auto inc = config(a, r, Inclusion{rho});
                        inc.interval_mode = mode;
                        auto ext = config(a, r, Extension{rho});
                        ext.interval_mode = mode;
                        const auto ri = run(inc);
                        const auto re = run(ext);
                        INFO("alpha " << a << " r " << r << " rho " << rho << " mode " << to_string(mode));
                        CHECK(std::fabs(ri.relative_revenue - oracle::pair_attack_limit(a, r, rho, Attack::inclusion)) <=
                              std::max(0.005, 4 * ri.std_error));
                        CHECK(std::fabs(re.relative_revenue - oracle::pair_attack_limit(a, r, rho, Attack::extension)) <=
                              std::max(0.005, 4 * re.std_error));
                        check_conservation(ri);
                        check_conservation(re);
                    }
                }
            }
        }
    }

    TEST_CASE("reference attack points within three standard errors")
    {
        const auto inc = run(config(0.3, 0.2, Inclusion{1.0}, 1'000'000, 7));
        CHECK(std::fabs(inc.relative_revenue - 0.326582278) <= 3 * inc.std_error);
        const auto ext = run(config(0.3, 0.8, Extension{1.0}, 1'000'000, 7));
        CHECK(std::fabs(ext.relative_revenue - 0.326582278) <= 3 * ext.std_error);
    }

    TEST_CASE("standard error reflects the spread across seeds")
    {
        std::vector<double> xs;
        double se = 0.0;
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            const auto rep = run(config(0.3, 0.2, Inclusion{1.0}, 20'000, seed));
            xs.push_back(rep.relative_revenue);
            se += rep.std_error / 30.0;
        }
        double mean = 0.0;
        for (double x : xs) mean += x / 30.0;
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean) / 29.0;
        const double sd = std::sqrt(var);
        CHECK(se > 0.5 * sd);
        CHECK(se < 2.0 * sd);
    }

    TEST_CASE("interval mode does not move the limit")
    {
        auto a = config(0.3, 0.2, Inclusion{1.0}, 1'000'000, 5);
        auto b = a;
        b.interval_mode = IntervalMode::deterministic;
        CHECK(std::fabs(run(a).relative_revenue - run(b).relative_revenue) <= 0.005);
    }

    TEST_CASE("inclusion revenue nondecreasing in rho below alpha")
    {
        std::vector<SimConfig> cfgs;
        for (double rho : {0.0, 0.5, 1.0}) cfgs.push_back(config(0.3, 0.2, Inclusion{rho}, 400'000, 9));
        const auto reps = sweep(cfgs);
        // Common random numbers keep the ordering sharp.
        CHECK(reps[0].relative_revenue <= reps[1].relative_revenue);
        CHECK(reps[1].relative_revenue <= reps[2].relative_revenue);
    }

    TEST_CASE("runs are reproducible and seed dependent")
    {
        const auto x = run(config(0.3, 0.2, Inclusion{0.5}, 50'000, 11));
        const auto y = run(config(0.3, 0.2, Inclusion{0.5}, 50'000, 11));
        const auto z = run(config(0.3, 0.2, Inclusion{0.5}, 50'000, 12));
        CHECK(x.relative_revenue == y.relative_revenue);
        CHECK(x.selfish_fees == y.selfish_fees);
        CHECK(x.pair_counts == y.pair_counts);
        CHECK(x.relative_revenue != z.relative_revenue);
        CHECK(x.seed == 11);
    }

    TEST_CASE("pair counts follow the ownership process")
    {
        const auto rep = run(config(0.3, 0.4, Honest{}, 100'001, 2));
        CHECK(rep.pair_counts.m == 100'001);
        const double mu = 0.21 * 100'000;
        CHECK(std::fabs(static_cast<double>(rep.pair_counts.z) - mu) <= 0.1 * mu);
        CHECK(std::fabs(static_cast<double>(rep.pair_counts.k) - mu) <= 0.1 * mu);
    }

    TEST_CASE("policy rollout matches the solved revenue")
    {
        for (Regime reg : {Regime::fee, Regime::equal, Regime::key}) {
            const auto sol = solved(0.35, reg);
            auto cfg = config(0.35, 0.4, MdpPolicy{sol}, 300'000, 4);
            cfg.weights = weights_for(reg);
            const auto rep = run(cfg);
            INFO("regime " << to_string(reg));
            CHECK(std::fabs(rep.relative_revenue - sol->revenue) <= std::max(0.006, 4 * rep.std_error));
            check_conservation(rep);
        }
    }

    TEST_CASE("honest policy rollout")
    {
        ProtocolParams p;
        p.alpha = 0.3;
        const auto table = mdp::build_transitions(p, 10);
        auto sol = std::make_shared<mdp::SolveResult>(mdp::solve(table, RewardWeights::equal()));
        sol->policy = oracle::honest_policy(table);
        auto cfg = config(0.3, 0.4, MdpPolicy{sol}, 200'000, 8);
        cfg.weights = RewardWeights::equal();
        const auto rep = run(cfg);
        CHECK(std::fabs(rep.relative_revenue - 0.3) <= std::max(0.005, 4 * rep.std_error));
        CHECK(rep.orphaned_fee_units == 0.0);
        check_conservation(rep);
    }

    TEST_CASE("boundary visits are counted at small truncation")
    {
        const auto sol = solved(0.45, Regime::fee, 3);
        auto cfg = config(0.45, 0.4, MdpPolicy{sol}, 100'000, 6);
        const auto rep = run(cfg);
        CHECK(rep.boundary_visits > 0);
        check_conservation(rep);
    }

    TEST_CASE("sweep keeps input order and reports the failing index")
    {
        std::vector<SimConfig> cfgs{config(0.1, 0.4, Honest{}, 20'000), config(0.2, 0.4, Honest{}, 20'000),
                                    config(0.3, 0.4, Honest{}, 20'000)};
        const auto reps = sweep(cfgs);
        REQUIRE(reps.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) CHECK(reps[i].relative_revenue == run(cfgs[i]).relative_revenue);

        cfgs[1].strategy = Inclusion{1.5};
        try {
            sweep(cfgs);
            FAIL("expected a sweep error");
        } catch (const SweepError& e) {
            CHECK(e.index() == 1);
        }
        CHECK_THROWS_AS(sweep({}), ValidationError);
    }

    TEST_CASE("config validation")
    {
        auto c = config(0.3, 0.4, Honest{}, 1);
        CHECK_THROWS_AS(run(c), ValidationError);
        c = config(0.3, 0.4, MdpPolicy{nullptr});
        CHECK_THROWS_AS(run(c), ValidationError);
        c = config(1.3, 0.4, Honest{});
        CHECK_THROWS_AS(run(c), ValidationError);
        CHECK(parse_interval_mode("deterministic") == IntervalMode::deterministic);
        CHECK_THROWS_AS(parse_interval_mode("poisson"), ValidationError);
    }

    TEST_CASE("degenerate shares")
    {
        CHECK(run(config(0.0, 0.4, Inclusion{1.0}, 10'000)).relative_revenue == 0.0);
        CHECK(run(config(1.0, 0.4, Honest{}, 10'000)).relative_revenue == doctest::Approx(1.0).epsilon(1e-3));
    }
}
