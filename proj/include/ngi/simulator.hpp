#ifndef NGI_SIMULATOR_HPP
#define NGI_SIMULATOR_HPP

#include "ngi/concentration.hpp"
#include "ngi/mdp.hpp"
#include "ngi/model.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ngi::sim {

struct Honest {};

/// Withhold a fraction rho of the attacker's microblocks whenever an honest
/// key block follows a selfish one.
struct Inclusion {
    double rho = 1.0;
};

/// Reject a fraction rho of the honest microblocks whenever the attacker mines
/// on an honest key block.
struct Extension {
    double rho = 1.0;
};

/// Play a solved decision-process policy on an explicit block tree.
struct MdpPolicy {
    std::shared_ptr<const mdp::SolveResult> solution;
};

using Strategy = std::variant<Honest, Inclusion, Extension, MdpPolicy>;

std::string describe(const Strategy& s);

enum class IntervalMode { exponential, deterministic };

const char* to_string(IntervalMode m) noexcept;
IntervalMode parse_interval_mode(const std::string& text);

struct SimConfig {
    ProtocolParams params;
    Strategy strategy = Honest{};
    std::uint64_t horizon_keyblocks = 1'000'000;
    std::uint64_t seed = 1;
    IntervalMode interval_mode = IntervalMode::exponential;
    /// Scalarisation of key rewards and fee units for relative_revenue. The
    /// microblock attacks are fee-share quantities, hence the default.
    RewardWeights weights = RewardWeights::fee_dominated();
    std::uint32_t batches = 100;  ///< batch count for the standard error
};

/// Fee quantities are in fee units: one unit is the expected fee mass of one
/// key-block interval, (v/f) * microblock_fee.
struct SimReport {
    double relative_revenue = 0.0;
    double std_error = 0.0;
    std::uint64_t selfish_key_rewards = 0;
    std::uint64_t honest_key_rewards = 0;
    double selfish_fees = 0.0;
    double honest_fees = 0.0;
    double orphaned_fee_units = 0.0;
    double generated_fee_units = 0.0;  ///< fee mass of every interval on the settled chain
    concentration::PairCounts pair_counts;
    std::uint64_t settled_blocks = 0;     ///< key blocks on the settled chain after the start block
    std::uint64_t boundary_visits = 0;    ///< policy decisions taken at l_a = L or l_h = L
    std::uint64_t seed = 0;
    std::string strategy;
    RewardWeights weights;
};

/// Simulates `horizon_keyblocks` key blocks. Deterministic given the seed.
SimReport run(const SimConfig& config);

/// Runs every config independently; OpenMP over configs, results in input
/// order and identical to sequential run() calls.
std::vector<SimReport> sweep(const std::vector<SimConfig>& configs);

/// Single-threaded reference for sweep().
std::vector<SimReport> sweep_serial(const std::vector<SimConfig>& configs);

/// Error from a sweep entry, tagged with its position.
class SweepError : public std::runtime_error {
public:
    SweepError(std::size_t index, const std::string& what)
        : std::runtime_error("config " + std::to_string(index) + ": " + what), index_(index)
    {
    }

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace ngi::sim

#endif  // NGI_SIMULATOR_HPP
