#ifndef NGI_MDP_HPP
#define NGI_MDP_HPP

#include "ngi/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngi::mdp {

enum class Fork : std::uint8_t { no_tie, tie, tie_prime };

/// Owner of the common ancestor key block and what happened to its microblocks.
enum class LastMicro : std::uint8_t {
    honest_included,    ///< H_in: honest ancestor, its microblocks accepted by the attacker
    honest_excluded,    ///< H_ex: honest ancestor, its microblocks rejected by the attacker
    selfish_published,  ///< S_p: selfish ancestor, its microblocks published
    selfish_hidden,     ///< S_h: selfish ancestor, its microblocks hidden
};

enum class Action : std::uint8_t {
    adopt,          ///< adopt the public chain, include its tip's microblocks
    adopt_exclude,  ///< adoptE
    override_publish,
    override_hide,  ///< overrideH
    match,
    match_hide,     ///< matchH
    wait,
    revert,
};

inline constexpr int kActionCount = 8;

const char* to_string(Fork f) noexcept;
const char* to_string(LastMicro m) noexcept;
const char* to_string(Action a) noexcept;
Fork parse_fork(const std::string& text);
LastMicro parse_last_micro(const std::string& text);
Action parse_action(const std::string& text);

inline bool is_selfish(LastMicro m) noexcept
{
    return m == LastMicro::selfish_published || m == LastMicro::selfish_hidden;
}

struct MdpState {
    int l_a = 0;  ///< attacker chain length past the common ancestor
    int l_h = 0;  ///< public chain length past the common ancestor
    Fork fork = Fork::no_tie;
    LastMicro last_micro = LastMicro::honest_included;

    friend bool operator==(const MdpState&, const MdpState&) = default;
};

std::string to_string(const MdpState& s);

/// Rewards of one transition: key rewards and fee units for each side. One fee
/// unit is the total fee of the microblocks in one key-block interval.
struct RewardTuple {
    double r_h = 0.0;
    double t_h = 0.0;
    double r_a = 0.0;
    double t_a = 0.0;

    friend bool operator==(const RewardTuple&, const RewardTuple&) = default;
};

struct ScalarReward {
    double selfish = 0.0;
    double total = 0.0;
};

ScalarReward scalarize(const RewardTuple& reward, const RewardWeights& weights) noexcept;

/// The finite state space for truncation L: l_a, l_h in [0, L]; tie states
/// additionally need l_a >= l_h >= 1.
class StateSpace {
public:
    explicit StateSpace(int truncation);

    int truncation() const noexcept { return truncation_; }
    std::size_t size() const noexcept { return states_.size(); }
    const MdpState& state(std::size_t index) const { return states_.at(index); }
    std::optional<std::size_t> index_of(const MdpState& s) const noexcept;
    bool contains(const MdpState& s) const noexcept { return index_of(s).has_value(); }
    std::span<const MdpState> states() const noexcept { return states_; }

private:
    std::size_t slot(const MdpState& s) const noexcept;

    int truncation_;
    std::vector<MdpState> states_;
    std::vector<std::int32_t> lookup_;
};

struct Outcome {
    MdpState next;
    double probability = 0.0;
    RewardTuple reward;
};

struct Choice {
    Action action;
    std::vector<Outcome> outcomes;
};

/// How the adopt and override row groups assign the ancestor interval's fees.
///
/// `as_published` reproduces the printed reward table cell for cell. In it the
/// first and third reward rows of the adopt/adoptE and override/overrideH groups
/// are exchanged relative to the match rows' accounting: an honest ancestor
/// followed by an honest block pays l_h - 1 units instead of l_h, and a hidden
/// selfish ancestor pays its full interval to honest miners. Under that table
/// honest mining in the fee-dominated regime earns 1/2 regardless of alpha.
///
/// `fee_conserving` assigns every finalised interval exactly once: to its two
/// leaders when the successor built on its microblocks, and to nobody when they
/// were hidden or rejected. This is the accounting the match rows already use
/// and the one the block-level rollout in the simulator measures.
enum class FeeAccounting { fee_conserving, as_published };

const char* to_string(FeeAccounting f) noexcept;

class TransitionTable {
public:
    TransitionTable(const ProtocolParams& params, int truncation, FeeAccounting accounting);

    const StateSpace& space() const noexcept { return space_; }
    const ProtocolParams& params() const noexcept { return params_; }
    FeeAccounting accounting() const noexcept { return accounting_; }
    int truncation() const noexcept { return space_.truncation(); }

    std::span<const Choice> choices(std::size_t state_index) const;
    std::span<const Choice> choices(const MdpState& s) const;
    /// Null when the action is unavailable in `s` (or `s` is outside the space).
    const Choice* find(const MdpState& s, Action a) const;

    std::size_t choice_count() const noexcept { return choices_.size(); }

private:
    ProtocolParams params_;
    FeeAccounting accounting_;
    StateSpace space_;
    std::vector<std::size_t> begin_;
    std::vector<Choice> choices_;
};

/// Availability:
///  - adopt, adoptE: l_h >= 1
///  - override, overrideH: l_a > l_h
///  - wait: in noTie it mines one block; in tie/tie' it continues the race.
///    Needs l_a < L and l_h < L (and the race condition in tie states).
///  - match, matchH: noTie, l_a >= l_h >= 1, l_a < L, l_h < L
///  - revert: tie' -> tie; S_h -> S_p when l_h = 0; H_ex -> H_in when l_a = 0;
///    never at l_h = L
TransitionTable build_transitions(const ProtocolParams& params, int truncation,
                                  FeeAccounting accounting = FeeAccounting::fee_conserving);

/// Flat CSR form of a table under fixed weights; what the kernels iterate over.
struct CompiledMdp {
    std::vector<std::uint32_t> state_begin;    ///< size states+1, into the choice arrays
    std::vector<Action> action;                ///< per choice
    std::vector<double> selfish;               ///< expected scalarised selfish reward per choice
    std::vector<double> total;                 ///< expected scalarised total reward per choice
    std::vector<std::uint32_t> outcome_begin;  ///< size choices+1
    std::vector<std::uint32_t> next;
    std::vector<double> probability;

    std::size_t state_count() const noexcept { return state_begin.size() - 1; }
};

CompiledMdp compile(const TransitionTable& table, const RewardWeights& weights);

/// Extremes of (T h - h) for the transformed reward selfish - w * total.
struct SweepBounds {
    double lower;
    double upper;
};

/// One Jacobi Bellman sweep: diff[s] = max_a q(s,a) - h[s]. OpenMP over states.
SweepBounds bellman_sweep(const CompiledMdp& mdp, double w, std::span<const double> h, std::span<double> diff);

/// Single-threaded reference for bellman_sweep; bit-identical output.
SweepBounds bellman_sweep_serial(const CompiledMdp& mdp, double w, std::span<const double> h,
                                 std::span<double> diff);

struct SolveOptions {
    double eps_inner = 1e-9;  ///< span tolerance of relative value iteration
    double eps_outer = 1e-7;  ///< width of the final bisection bracket on w
    std::uint64_t max_inner_iterations = 2'000'000;
    double aperiodicity = 0.5;  ///< self-loop weight mixed into every transition
    bool parallel = true;
};

struct SolveResult {
    double revenue = 0.0;
    std::vector<Action> policy;  ///< indexed like `space`
    StateSpace space{2};
    RewardWeights weights;
    ProtocolParams params;
    int outer_iterations = 0;
    std::uint64_t inner_iterations = 0;  ///< summed over all bisection steps
    double inner_tolerance = 0.0;
    double gain_lower = 0.0;  ///< gain bracket of selfish - revenue * total at the end
    double gain_upper = 0.0;

    int truncation() const noexcept { return space.truncation(); }
};

/// Relative value iteration hit its iteration cap before deciding the sign of
/// the gain at some w.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double w, std::uint64_t iterations, double span)
        : std::runtime_error(what), w_(w), iterations_(iterations), span_(span)
    {
    }

    double w() const noexcept { return w_; }
    std::uint64_t iterations() const noexcept { return iterations_; }
    double span() const noexcept { return span_; }

private:
    double w_;
    std::uint64_t iterations_;
    double span_;
};

/// Maximises long-run selfish reward / total reward. Bisects on w in [0,1] for
/// the root of g(w) = max over policies of the average of (selfish - w total),
/// which is nonincreasing in w; each g(w) comes from relative value iteration
/// on the aperiodicity-transformed process.
SolveResult solve(const TransitionTable& table, const RewardWeights& weights, const SolveOptions& options = {});
SolveResult solve(const TransitionTable& table, const RewardWeights& weights, double eps_inner, double eps_outer);

/// The solved action in `state`; throws std::out_of_range outside the space.
Action policy_action(const SolveResult& result, const MdpState& state);

}  // namespace ngi::mdp

#endif  // NGI_MDP_HPP
