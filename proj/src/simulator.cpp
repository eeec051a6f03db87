#include "ngi/simulator.hpp"

#include "ngi/rng.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace ngi::sim {

std::string describe(const Strategy& s)
{
    std::ostringstream os;
    std::visit(
        [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Honest>) os << "honest";
            else if constexpr (std::is_same_v<T, Inclusion>) os << "inclusion(" << v.rho << ")";
            else if constexpr (std::is_same_v<T, Extension>) os << "extension(" << v.rho << ")";
            else os << "mdpPolicy";
        },
        s);
    return os.str();
}

const char* to_string(IntervalMode m) noexcept
{
    return m == IntervalMode::exponential ? "exponential" : "deterministic";
}

IntervalMode parse_interval_mode(const std::string& text)
{
    if (text == "exponential") return IntervalMode::exponential;
    if (text == "deterministic") return IntervalMode::deterministic;
    throw ValidationError("interval mode must be exponential or deterministic (got '" + text + "')");
}

namespace {

/// Reward bookkeeping shared by both simulation paths.
class Ledger {
public:
    Ledger(const SimConfig& cfg)
        : r_(cfg.params.split_ratio), weights_(cfg.weights), horizon_(cfg.horizon_keyblocks),
          batch_selfish_(cfg.batches, 0.0), batch_total_(cfg.batches, 0.0)
    {
    }

    /// Settles the interval that `parent` opened, now that `child` is known to
    /// follow it on the settled chain, and credits child's key reward.
    void settle(bool parent_selfish, double parent_fee, bool child_selfish, bool child_built_on_micro,
                std::uint64_t progress)
    {
        const std::size_t b = batch_of(progress);
        report_.generated_fee_units += parent_fee;
        if (child_built_on_micro) {
            credit_fee(parent_selfish, r_ * parent_fee, b);
            credit_fee(child_selfish, (1.0 - r_) * parent_fee, b);
        } else {
            report_.orphaned_fee_units += parent_fee;
        }
        credit_key(child_selfish, b);
        report_.pair_counts.z += (parent_selfish && !child_selfish);
        report_.pair_counts.k += (!parent_selfish && child_selfish);
        ++report_.settled_blocks;
    }

    /// Interval-level settlement used by the microblock attacks: a fraction of
    /// the parent interval is orphaned and the rest shared by the two leaders.
    void settle_partial(bool parent_selfish, double parent_fee, bool child_selfish, double orphaned_fraction,
                        std::uint64_t progress)
    {
        const std::size_t b = batch_of(progress);
        const double kept = parent_fee * (1.0 - orphaned_fraction);
        report_.generated_fee_units += parent_fee;
        report_.orphaned_fee_units += parent_fee - kept;
        credit_fee(parent_selfish, r_ * kept, b);
        credit_fee(child_selfish, (1.0 - r_) * kept, b);
        credit_key(child_selfish, b);
        report_.pair_counts.z += (parent_selfish && !child_selfish);
        report_.pair_counts.k += (!parent_selfish && child_selfish);
        ++report_.settled_blocks;
    }

    SimReport finish(const SimConfig& cfg)
    {
        report_.pair_counts.m = report_.settled_blocks + 1;
        report_.seed = cfg.seed;
        report_.strategy = describe(cfg.strategy);
        report_.weights = weights_;
        double s_sum = 0.0;
        double t_sum = 0.0;
        for (std::size_t b = 0; b < batch_total_.size(); ++b) {
            s_sum += batch_selfish_[b];
            t_sum += batch_total_[b];
        }
        if (t_sum > 0.0) {
            // Recompute the ratio from the component totals so that it matches
            // the scalarised report fields exactly.
            const double selfish = weights_.key_weight * static_cast<double>(report_.selfish_key_rewards) +
                                   weights_.fee_weight * report_.selfish_fees;
            const double total = selfish + weights_.key_weight * static_cast<double>(report_.honest_key_rewards) +
                                 weights_.fee_weight * report_.honest_fees;
            report_.relative_revenue = selfish / total;
            const auto n = static_cast<double>(batch_total_.size());
            double ss = 0.0;
            for (std::size_t b = 0; b < batch_total_.size(); ++b) {
                const double e = batch_selfish_[b] - report_.relative_revenue * batch_total_[b];
                ss += e * e;
            }
            report_.std_error = std::sqrt(ss / (n * (n - 1.0))) / (t_sum / n);
        }
        return report_;
    }

private:
    std::size_t batch_of(std::uint64_t progress) const noexcept
    {
        const std::size_t b = static_cast<std::size_t>(progress * batch_total_.size() / horizon_);
        return b < batch_total_.size() ? b : batch_total_.size() - 1;
    }

    void credit_fee(bool selfish, double amount, std::size_t b)
    {
        (selfish ? report_.selfish_fees : report_.honest_fees) += amount;
        batch_total_[b] += weights_.fee_weight * amount;
        if (selfish) batch_selfish_[b] += weights_.fee_weight * amount;
    }

    void credit_key(bool selfish, std::size_t b)
    {
        ++(selfish ? report_.selfish_key_rewards : report_.honest_key_rewards);
        batch_total_[b] += weights_.key_weight;
        if (selfish) batch_selfish_[b] += weights_.key_weight;
    }

    double r_;
    RewardWeights weights_;
    std::uint64_t horizon_;
    std::vector<double> batch_selfish_;
    std::vector<double> batch_total_;
    SimReport report_;
};

double draw_fee(Rng& rng, IntervalMode mode)
{
    // One fee unit is the expected fee mass of an interval; with exponential
    // intervals the mass is Exp(1) in those units.
    return mode == IntervalMode::exponential ? rng.exponential(1.0) : 1.0;
}

/// Key blocks follow one another on a single chain; the attacker only plays
/// with microblocks.
SimReport run_interval_attack(const SimConfig& cfg)
{
    Rng rng(cfg.seed);
    Ledger ledger(cfg);
    const double alpha = cfg.params.alpha;
    double inclusion_rho = 0.0;
    double extension_rho = 0.0;
    if (const auto* inc = std::get_if<Inclusion>(&cfg.strategy)) inclusion_rho = inc->rho;
    if (const auto* ext = std::get_if<Extension>(&cfg.strategy)) extension_rho = ext->rho;

    bool prev = false;  // the start block is honest
    for (std::uint64_t i = 1; i < cfg.horizon_keyblocks; ++i) {
        const double fee = draw_fee(rng, cfg.interval_mode);
        const bool cur = rng.bernoulli(alpha);
        double orphaned = 0.0;
        if (prev && !cur) orphaned = inclusion_rho;
        else if (!prev && cur) orphaned = extension_rho;
        ledger.settle_partial(prev, fee, cur, orphaned, i);
        prev = cur;
    }
    return ledger.finish(cfg);
}

/// Block-level rollout of a solved policy. The attacker's private branch and
/// the public honest branch are explicit block lists hanging off the common
/// ancestor; rewards come from the blocks that end up on the settled chain,
/// not from the decision-process reward table.
class PolicyRollout {
public:
    explicit PolicyRollout(const SimConfig& cfg)
        : cfg_(cfg), sol_(*std::get<MdpPolicy>(cfg.strategy).solution), rng_(cfg.seed), ledger_(cfg)
    {
        anc_ = {false, true, draw_fee(rng_, cfg.interval_mode)};
    }

    SimReport run()
    {
        const int L = sol_.truncation();
        while (mined_ < cfg_.horizon_keyblocks) {
            const mdp::MdpState s = state();
            if (s.l_a == L || s.l_h == L) ++boundary_visits_;
            apply(mdp::policy_action(sol_, s));
        }
        SimReport rep = ledger_.finish(cfg_);
        rep.boundary_visits = boundary_visits_;
        return rep;
    }

private:
    struct Block {
        bool selfish;
        bool built_on_parent_micro;
        double fee;
    };

    mdp::MdpState state() const
    {
        return {static_cast<int>(selfish_.size()), static_cast<int>(honest_.size()), fork_, last_micro_};
    }

    /// Moves the common ancestor forward along `chain`.
    void settle(const std::vector<Block>& chain, std::size_t count)
    {
        Block parent = anc_;
        for (std::size_t i = 0; i < count; ++i) {
            const Block& b = chain[i];
            ledger_.settle(parent.selfish, parent.fee, b.selfish, b.built_on_parent_micro, mined_);
            parent = b;
        }
        anc_ = parent;
    }

    void apply(mdp::Action a)
    {
        using mdp::Action;
        using mdp::Fork;
        using mdp::LastMicro;
        switch (a) {
        case Action::adopt:
        case Action::adopt_exclude:
            settle(honest_, honest_.size());
            honest_.clear();
            selfish_.clear();
            fork_ = Fork::no_tie;
            last_micro_ = a == Action::adopt ? LastMicro::honest_included : LastMicro::honest_excluded;
            mine();
            break;
        case Action::override_publish:
        case Action::override_hide: {
            const std::size_t k = honest_.size() + 1;
            settle(selfish_, k);
            selfish_.erase(selfish_.begin(), selfish_.begin() + static_cast<std::ptrdiff_t>(k));
            honest_.clear();
            fork_ = Fork::no_tie;
            last_micro_ = a == Action::override_publish ? LastMicro::selfish_published : LastMicro::selfish_hidden;
            mine();
            break;
        }
        case Action::match:
            fork_ = Fork::tie;
            mine();
            break;
        case Action::match_hide:
            fork_ = Fork::tie_prime;
            mine();
            break;
        case Action::wait:
            mine();
            break;
        case Action::revert:
            if (fork_ == Fork::tie_prime) fork_ = Fork::tie;
            else if (last_micro_ == LastMicro::selfish_hidden) last_micro_ = LastMicro::selfish_published;
            else if (last_micro_ == LastMicro::honest_excluded) last_micro_ = LastMicro::honest_included;
            break;
        }
    }

    void mine()
    {
        using mdp::Fork;
        using mdp::LastMicro;
        const double fee = draw_fee(rng_, cfg_.interval_mode);
        const double u = rng_.uniform();
        const double alpha = cfg_.params.alpha;
        ++mined_;
        if (u < alpha) {
            const bool on_own = !selfish_.empty() || mdp::is_selfish(last_micro_);
            selfish_.push_back({true, on_own || last_micro_ == LastMicro::honest_included, fee});
            return;
        }
        const bool racing = fork_ != Fork::no_tie;
        if (racing && u < alpha + cfg_.params.gamma * (1.0 - alpha)) {
            // Honest block on the attacker's published prefix: that prefix wins.
            const std::size_t k = honest_.size();
            const bool micro_visible = fork_ == Fork::tie;
            settle(selfish_, k);
            selfish_.erase(selfish_.begin(), selfish_.begin() + static_cast<std::ptrdiff_t>(k));
            honest_.assign(1, Block{false, micro_visible, fee});
            fork_ = Fork::no_tie;
            last_micro_ = micro_visible ? LastMicro::selfish_published : LastMicro::selfish_hidden;
            return;
        }
        const bool on_honest = !honest_.empty() || !mdp::is_selfish(last_micro_);
        honest_.push_back({false, on_honest || last_micro_ == LastMicro::selfish_published, fee});
        fork_ = Fork::no_tie;
    }

    const SimConfig& cfg_;
    const mdp::SolveResult& sol_;
    Rng rng_;
    Ledger ledger_;
    Block anc_{};
    std::vector<Block> honest_;
    std::vector<Block> selfish_;
    mdp::Fork fork_ = mdp::Fork::no_tie;
    mdp::LastMicro last_micro_ = mdp::LastMicro::honest_included;
    std::uint64_t mined_ = 0;
    std::uint64_t boundary_visits_ = 0;
};

void check(const SimConfig& cfg)
{
    validate(cfg.params);
    validate(cfg.weights);
    if (cfg.horizon_keyblocks < 2) throw ValidationError("horizon_keyblocks must be at least 2");
    if (cfg.batches < 2 || cfg.batches > cfg.horizon_keyblocks) {
        throw ValidationError("batches must lie in [2, horizon_keyblocks]");
    }
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Inclusion> || std::is_same_v<T, Extension>) {
                if (!(v.rho >= 0.0 && v.rho <= 1.0)) throw ValidationError("rho out of [0,1]");
            } else if constexpr (std::is_same_v<T, MdpPolicy>) {
                if (!v.solution) throw ValidationError("mdpPolicy strategy needs a solution");
            }
        },
        cfg.strategy);
}

}  // namespace

SimReport run(const SimConfig& config)
{
    check(config);
    if (std::holds_alternative<MdpPolicy>(config.strategy)) return PolicyRollout(config).run();
    return run_interval_attack(config);
}

std::vector<SimReport> sweep(const std::vector<SimConfig>& configs)
{
    if (configs.empty()) throw ValidationError("sweep needs at least one config");
    std::vector<SimReport> out(configs.size());
    std::vector<std::optional<std::string>> errors(configs.size());
    const auto n = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            out[idx] = run(configs[idx]);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i]) throw SweepError(i, *errors[i]);
    }
    return out;
}

std::vector<SimReport> sweep_serial(const std::vector<SimConfig>& configs)
{
    if (configs.empty()) throw ValidationError("sweep needs at least one config");
    std::vector<SimReport> out;
    out.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        try {
            out.push_back(run(configs[i]));
        } catch (const std::exception& e) {
            throw SweepError(i, e.what());
        }
    }
    return out;
}

}  // namespace ngi::sim
