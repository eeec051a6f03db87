#include "golden_table.hpp"
#include "ngi/mdp.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace ngi;
using namespace ngi::mdp;
using LM = LastMicro;

namespace {

constexpr double kAlpha = 0.3;
constexpr double kGamma = 0.45;
constexpr double kR = 0.4;
constexpr int kL = 7;
constexpr golden::Setup kSetup{kAlpha, kGamma, kR, kL};

ProtocolParams params()
{
    ProtocolParams p;
    p.alpha = kAlpha;
    p.gamma = kGamma;
    p.split_ratio = kR;
    return p;
}

}  // namespace

TEST_SUITE("mdp_table")
{
    TEST_CASE("state space")
    {
        const StateSpace space(20);
        CHECK(space.size() == 3444);
        for (std::size_t i = 0; i < space.size(); ++i) CHECK(*space.index_of(space.state(i)) == i);
        CHECK_FALSE(space.contains({2, 0, Fork::tie, LM::honest_included}));
        CHECK_FALSE(space.contains({1, 2, Fork::tie, LM::honest_included}));
        CHECK_FALSE(space.contains({21, 0, Fork::no_tie, LM::honest_included}));
        CHECK(space.contains({2, 2, Fork::tie_prime, LM::selfish_hidden}));
        CHECK_THROWS_AS(StateSpace(1), ValidationError);
    }

    TEST_CASE("printed table reproduced row for row")
    {
        const auto table = build_transitions(params(), kL, FeeAccounting::as_published);
        std::size_t rows = 0;
        for (std::size_t i = 0; i < table.space().size(); ++i) {
            const MdpState& s = table.space().state(i);
            std::set<Action> got;
            for (const Choice& c : table.choices(i)) {
                got.insert(c.action);
                const auto want = golden::expected_rows(kSetup, s, c.action);
                INFO("state " << to_string(s) << " action " << to_string(c.action));
                REQUIRE(c.outcomes.size() == want.size());
                for (std::size_t k = 0; k < want.size(); ++k) {
                    CHECK(c.outcomes[k].next == want[k].next);
                    CHECK(c.outcomes[k].probability == doctest::Approx(want[k].probability).epsilon(1e-15));
                    CHECK(golden::same(c.outcomes[k].reward, want[k].reward));
                }
                ++rows;
            }
            INFO("state " << to_string(s));
            CHECK(got == golden::expected_actions(kSetup, s));
        }
        CHECK(rows == table.choice_count());
    }

    TEST_CASE("reference rows")
    {
        const auto table = build_transitions(params(), kL, FeeAccounting::as_published);
        const Choice* c = table.find({2, 1, Fork::no_tie, LM::honest_included}, Action::override_publish);
        REQUIRE(c);
        CHECK(c->outcomes[0].next == MdpState{1, 0, Fork::no_tie, LM::selfish_published});
        CHECK(c->outcomes[1].next == MdpState{0, 1, Fork::no_tie, LM::selfish_published});
        CHECK(golden::same(c->outcomes[0].reward, {0, kR, 2, 1 + (1 - kR)}));

        c = table.find({1, 1, Fork::no_tie, LM::selfish_published}, Action::match);
        REQUIRE(c);
        CHECK(c->outcomes.size() == 3);
        CHECK(golden::same(c->outcomes[1].reward, {0, 0, 1, 1}));

        // Adopting needs at least one public block.
        CHECK(table.find({1, 0, Fork::no_tie, LM::selfish_hidden}, Action::adopt) == nullptr);
        CHECK(table.find({1, 0, Fork::no_tie, LM::selfish_hidden}, Action::revert) != nullptr);
    }

    TEST_CASE("fee conserving variant differs only in the swapped cells")
    {
        const auto printed = build_transitions(params(), kL, FeeAccounting::as_published);
        const auto fixed = build_transitions(params(), kL, FeeAccounting::fee_conserving);
        REQUIRE(printed.choice_count() == fixed.choice_count());
        for (std::size_t i = 0; i < printed.space().size(); ++i) {
            const MdpState& s = printed.space().state(i);
            const auto a = printed.choices(i);
            const auto b = fixed.choices(i);
            REQUIRE(a.size() == b.size());
            for (std::size_t k = 0; k < a.size(); ++k) {
                CHECK(a[k].action == b[k].action);
                for (std::size_t o = 0; o < a[k].outcomes.size(); ++o) {
                    const auto& x = a[k].outcomes[o];
                    const auto& y = b[k].outcomes[o];
                    CHECK(x.next == y.next);
                    CHECK(x.probability == y.probability);
                    RewardTuple want = x.reward;
                    const bool adopt = a[k].action == Action::adopt || a[k].action == Action::adopt_exclude;
                    const bool over = a[k].action == Action::override_publish || a[k].action == Action::override_hide;
                    const double lh = s.l_h;
                    if (adopt && s.last_micro == LM::selfish_hidden) want.t_h = lh - 1;
                    if (adopt && !is_selfish(s.last_micro)) want.t_h = lh;
                    if (over && s.last_micro == LM::honest_excluded) want.t_a = lh;
                    if (over && is_selfish(s.last_micro)) want.t_a = lh + 1;
                    INFO("state " << to_string(s) << " action " << to_string(a[k].action));
                    CHECK(golden::same(y.reward, want));
                }
            }
        }
    }

    TEST_CASE("probabilities sum to one and use the allowed values")
    {
        for (auto acc : {FeeAccounting::as_published, FeeAccounting::fee_conserving}) {
            for (double g : {0.0, 0.5, 1.0}) {
                ProtocolParams p = params();
                p.gamma = g;
                const auto table = build_transitions(p, 10, acc);
                const std::vector<double> allowed{kAlpha, 1 - kAlpha, g * (1 - kAlpha), (1 - g) * (1 - kAlpha), 1.0};
                for (std::size_t i = 0; i < table.space().size(); ++i) {
                    for (const Choice& c : table.choices(i)) {
                        double sum = 0.0;
                        for (const Outcome& o : c.outcomes) {
                            sum += o.probability;
                            bool ok = false;
                            for (double v : allowed) ok = ok || o.probability == v;
                            CHECK(ok);
                            CHECK(table.space().contains(o.next));
                        }
                        CHECK(std::fabs(sum - 1.0) <= 1e-12);
                    }
                }
            }
        }
    }

    TEST_CASE("each row settles one fee total across its outcomes")
    {
        for (auto acc : {FeeAccounting::as_published, FeeAccounting::fee_conserving}) {
            const auto table = build_transitions(params(), kL, acc);
            for (std::size_t i = 0; i < table.space().size(); ++i) {
                const MdpState& s = table.space().state(i);
                for (const Choice& c : table.choices(i)) {
                    std::set<double> totals;
                    for (const Outcome& o : c.outcomes) {
                        const RewardTuple& t = o.reward;
                        CHECK(t.r_h >= 0);
                        CHECK(t.t_h >= -1e-12);
                        CHECK(t.r_a >= 0);
                        CHECK(t.t_a >= -1e-12);
                        if (t == RewardTuple{}) continue;
                        const double fees = t.t_h + t.t_a;
                        totals.insert(std::round(fees * 1e9) / 1e9);
                        const bool allowed = std::fabs(fees - (s.l_h - 1)) < 1e-12 || std::fabs(fees - s.l_h) < 1e-12 ||
                                             std::fabs(fees - (s.l_h + 1)) < 1e-12;
                        CHECK(allowed);
                    }
                    CHECK(totals.size() <= 1);
                }
            }
        }
    }

    TEST_CASE("fee conserving rows pay one unit per settled interval")
    {
        // The ancestor's fees survive iff the winning branch built on its
        // microblocks: the public chain never saw hidden ones, the attacker's
        // branch skipped excluded ones.
        const auto table = build_transitions(params(), kL, FeeAccounting::fee_conserving);
        for (std::size_t i = 0; i < table.space().size(); ++i) {
            const MdpState& s = table.space().state(i);
            for (const Choice& c : table.choices(i)) {
                const bool adopt = c.action == Action::adopt || c.action == Action::adopt_exclude;
                const bool ancestor_lost = adopt ? s.last_micro == LM::selfish_hidden
                                                 : s.last_micro == LM::honest_excluded;
                for (const Outcome& o : c.outcomes) {
                    if (o.reward == RewardTuple{}) continue;
                    const double keys = o.reward.r_a + o.reward.r_h;
                    const double fees = o.reward.t_a + o.reward.t_h;
                    INFO("state " << to_string(s) << " action " << to_string(c.action));
                    CHECK(fees == doctest::Approx(keys - (ancestor_lost ? 1.0 : 0.0)).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("scalarize")
    {
        const RewardTuple t{0, kR, 2, 1 + (1 - kR)};
        auto v = scalarize(t, RewardWeights::key_dominated());
        CHECK(v.selfish == 2.0);
        CHECK(v.total == 2.0);
        v = scalarize(t, RewardWeights::fee_dominated());
        CHECK(v.selfish == doctest::Approx(1.6));
        CHECK(v.total == doctest::Approx(2.0));
        v = scalarize({}, RewardWeights::equal());
        CHECK(v.selfish == 0.0);
        CHECK(v.total == 0.0);
    }

    TEST_CASE("names round trip")
    {
        for (int i = 0; i < kActionCount; ++i) {
            const auto a = static_cast<Action>(i);
            CHECK(parse_action(to_string(a)) == a);
        }
        CHECK(parse_fork("tiePrime") == Fork::tie_prime);
        CHECK(parse_last_micro("S_h") == LM::selfish_hidden);
        CHECK_THROWS_AS(parse_action("publish"), ValidationError);
        CHECK(to_string(MdpState{2, 1, Fork::no_tie, LM::honest_included}) == "(2,1,noTie,H_in)");
    }
}
