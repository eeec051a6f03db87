#ifndef NGI_MODEL_HPP
#define NGI_MODEL_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace ngi {

/// Thrown when a parameter falls outside its documented domain. The message
/// always names the offending field.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an operation is evaluated outside its mathematical domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Protocol and attacker parameters shared by every analysis.
///
/// Fractions are validated inclusively on [0,1]. Rewards are expressed in an
/// arbitrary currency unit; only ratios matter downstream.
struct ProtocolParams {
    double alpha = 0.0;         ///< selfish share of mining power
    double gamma = 0.5;         ///< honest share mining on the selfish branch in a tie
    double split_ratio = 0.4;   ///< fee share paid to the leader that issued the microblock
    double key_rate = 0.01;     ///< key blocks per second
    double micro_rate = 0.05;   ///< microblocks per second
    double key_block_reward = 12.5;
    double microblock_fee = 2.5;
    std::optional<double> expected_microblock_fee;  ///< whale-adjusted mean fee

    double beta() const noexcept { return 1.0 - alpha; }
};

/// Scalar value of one key-block reward and of one fee unit (the fees of the
/// v/f microblocks produced in one key-block interval).
struct RewardWeights {
    double key_weight = 1.0;
    double fee_weight = 1.0;

    static constexpr RewardWeights fee_dominated() noexcept { return {0.0, 1.0}; }
    static constexpr RewardWeights equal() noexcept { return {1.0, 1.0}; }
    static constexpr RewardWeights key_dominated() noexcept { return {1.0, 0.0}; }

    friend bool operator==(const RewardWeights&, const RewardWeights&) = default;
};

enum class Regime { fee, equal, key };

RewardWeights weights_for(Regime regime) noexcept;
const char* to_string(Regime regime) noexcept;
Regime parse_regime(const std::string& text);

/// Returns `params` unchanged, or throws ValidationError naming the first bad field.
const ProtocolParams& validate(const ProtocolParams& params);
const RewardWeights& validate(const RewardWeights& weights);

/// Ratio of one key-block reward to the fees of one key-block interval:
/// R_b * f / (v * fee), where fee is the whale-adjusted mean when present.
double interval_fee_ratio(const ProtocolParams& params);

/// Weights that price key rewards and fee units by their actual currency value,
/// normalised so that one fee unit weighs 1.
RewardWeights weights_from_params(const ProtocolParams& params);

/// Reads `name = value` lines (blank lines and `#` comments ignored). Unknown
/// keys are rejected. Keys match the ProtocolParams field names; the short
/// aliases `r`, `f`, `v` are also accepted. The result is validated.
ProtocolParams read_params_config(std::istream& in);

}  // namespace ngi

#endif  // NGI_MODEL_HPP
