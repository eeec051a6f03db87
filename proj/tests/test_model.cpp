#include "ngi/model.hpp"

#include <doctest.h>

#include <sstream>

using namespace ngi;

TEST_SUITE("model")
{
    TEST_CASE("defaults validate and beta is the complement")
    {
        ProtocolParams p;
        CHECK_NOTHROW(validate(p));
        for (double a : {0.0, 0.1, 0.3, 0.45, 1.0}) {
            p.alpha = a;
            CHECK(p.beta() == 1.0 - a);
        }
    }

    TEST_CASE("validation names the offending field")
    {
        ProtocolParams p;
        p.alpha = 1.2;
        CHECK_THROWS_WITH_AS(validate(p), "alpha out of [0,1]", ValidationError);
        p = {};
        p.key_rate = 0.0;
        CHECK_THROWS_WITH_AS(validate(p), "key_rate must be positive", ValidationError);
        p = {};
        p.gamma = -0.1;
        CHECK_THROWS_AS(validate(p), ValidationError);
        p = {};
        p.split_ratio = 1.5;
        CHECK_THROWS_AS(validate(p), ValidationError);
    }

    TEST_CASE("interval fee ratio")
    {
        ProtocolParams p;
        p.key_block_reward = 12.5;
        p.microblock_fee = 2.5;
        p.key_rate = 0.01;
        p.micro_rate = 0.05;
        CHECK(interval_fee_ratio(p) == doctest::Approx(1.0).epsilon(1e-12));
        p.micro_rate = 0.1;
        CHECK(interval_fee_ratio(p) == doctest::Approx(0.5).epsilon(1e-12));
        p.micro_rate = 0.05;
        p.expected_microblock_fee = 5.0;
        CHECK(interval_fee_ratio(p) == doctest::Approx(0.5).epsilon(1e-12));
    }

    TEST_CASE("interval fee ratio is homogeneous in the reward scale")
    {
        ProtocolParams p;
        const double base = interval_fee_ratio(p);
        p.key_block_reward *= 7.0;
        p.microblock_fee *= 7.0;
        CHECK(interval_fee_ratio(p) == doctest::Approx(base).epsilon(1e-14));
    }

    TEST_CASE("interval fee ratio domain")
    {
        ProtocolParams p;
        p.micro_rate = 0.0;
        CHECK_THROWS_AS(interval_fee_ratio(p), DomainError);
        p = {};
        p.microblock_fee = 0.0;
        CHECK_THROWS_AS(interval_fee_ratio(p), DomainError);
    }

    TEST_CASE("regimes map to exact weights")
    {
        CHECK(weights_for(Regime::fee) == RewardWeights{0.0, 1.0});
        CHECK(weights_for(Regime::equal) == RewardWeights{1.0, 1.0});
        CHECK(weights_for(Regime::key) == RewardWeights{1.0, 0.0});
        CHECK(parse_regime("equal") == Regime::equal);
        CHECK_THROWS_AS(parse_regime("fees"), ValidationError);
        CHECK_THROWS_AS(validate(RewardWeights{0.0, 0.0}), ValidationError);
        CHECK_THROWS_AS(validate(RewardWeights{-1.0, 1.0}), ValidationError);
    }

    TEST_CASE("weights from params price one fee unit at 1")
    {
        ProtocolParams p;
        p.micro_rate = 0.1;
        const RewardWeights w = weights_from_params(p);
        CHECK(w.fee_weight == 1.0);
        CHECK(w.key_weight == doctest::Approx(0.5));
    }

    TEST_CASE("config file")
    {
        std::istringstream in("# protocol\nalpha = 0.3\n\nr=0.25\ngamma = 0.7  # tie share\nv = 0.1\n");
        const ProtocolParams p = read_params_config(in);
        CHECK(p.alpha == 0.3);
        CHECK(p.split_ratio == 0.25);
        CHECK(p.gamma == 0.7);
        CHECK(p.micro_rate == 0.1);
        CHECK(p.key_rate == 0.01);

        std::istringstream unknown("alpha = 0.3\nbeta = 0.7\n");
        CHECK_THROWS_AS(read_params_config(unknown), ValidationError);
        std::istringstream bad("alpha = x\n");
        CHECK_THROWS_AS(read_params_config(bad), ValidationError);
        std::istringstream out_of_range("alpha = 2\n");
        CHECK_THROWS_AS(read_params_config(out_of_range), ValidationError);
    }
}
