#include "ngi/model.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <string_view>

namespace ngi {

namespace {

void require_fraction(double value, const char* name)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError(std::string(name) + " out of [0,1]");
    }
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

RewardWeights weights_for(Regime regime) noexcept
{
    switch (regime) {
    case Regime::fee: return RewardWeights::fee_dominated();
    case Regime::equal: return RewardWeights::equal();
    case Regime::key: return RewardWeights::key_dominated();
    }
    return RewardWeights::equal();
}

const char* to_string(Regime regime) noexcept
{
    switch (regime) {
    case Regime::fee: return "fee";
    case Regime::equal: return "equal";
    case Regime::key: return "key";
    }
    return "?";
}

Regime parse_regime(const std::string& text)
{
    if (text == "fee") return Regime::fee;
    if (text == "equal") return Regime::equal;
    if (text == "key") return Regime::key;
    throw ValidationError("regime must be one of fee, equal, key (got '" + text + "')");
}

const ProtocolParams& validate(const ProtocolParams& params)
{
    require_fraction(params.alpha, "alpha");
    require_fraction(params.gamma, "gamma");
    require_fraction(params.split_ratio, "split_ratio");
    if (!(params.key_rate > 0.0) || !std::isfinite(params.key_rate)) {
        throw ValidationError("key_rate must be positive");
    }
    if (!(params.micro_rate >= 0.0) || !std::isfinite(params.micro_rate)) {
        throw ValidationError("micro_rate must be nonnegative");
    }
    if (!(params.key_block_reward >= 0.0)) {
        throw ValidationError("key_block_reward must be nonnegative");
    }
    if (!(params.microblock_fee >= 0.0)) {
        throw ValidationError("microblock_fee must be nonnegative");
    }
    if (params.expected_microblock_fee && !(*params.expected_microblock_fee >= params.microblock_fee)) {
        throw ValidationError("expected_microblock_fee must be >= microblock_fee");
    }
    return params;
}

const RewardWeights& validate(const RewardWeights& weights)
{
    if (!(weights.key_weight >= 0.0) || !(weights.fee_weight >= 0.0)) {
        throw ValidationError("reward weights must be nonnegative");
    }
    if (!(weights.key_weight + weights.fee_weight > 0.0)) {
        throw ValidationError("reward weights must not both be zero");
    }
    return weights;
}

double interval_fee_ratio(const ProtocolParams& params)
{
    const double fee = params.expected_microblock_fee.value_or(params.microblock_fee);
    if (!(params.micro_rate > 0.0)) throw DomainError("interval_fee_ratio: micro_rate must be positive");
    if (!(fee > 0.0)) throw DomainError("interval_fee_ratio: microblock_fee must be positive");
    return params.key_block_reward * params.key_rate / (params.micro_rate * fee);
}

RewardWeights weights_from_params(const ProtocolParams& params)
{
    return validate(RewardWeights{interval_fee_ratio(params), 1.0});
}

ProtocolParams read_params_config(std::istream& in)
{
    ProtocolParams params;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(std::string_view(line).substr(0, line.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(line_no) + ": expected 'name = value'");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string raw = trim(std::string_view(text).substr(eq + 1));
        double value = 0.0;
        std::istringstream vs(raw);
        if (!(vs >> value) || !(vs >> std::ws).eof()) {
            throw ValidationError("config line " + std::to_string(line_no) + ": '" + key + "' is not a number");
        }
        if (key == "alpha") params.alpha = value;
        else if (key == "gamma") params.gamma = value;
        else if (key == "split_ratio" || key == "r") params.split_ratio = value;
        else if (key == "key_rate" || key == "f") params.key_rate = value;
        else if (key == "micro_rate" || key == "v") params.micro_rate = value;
        else if (key == "key_block_reward") params.key_block_reward = value;
        else if (key == "microblock_fee") params.microblock_fee = value;
        else if (key == "expected_microblock_fee") params.expected_microblock_fee = value;
        else throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return validate(params);
}

}  // namespace ngi
