#include "ngi/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ngi::mdp {

CompiledMdp compile(const TransitionTable& table, const RewardWeights& weights)
{
    validate(weights);
    const StateSpace& space = table.space();
    CompiledMdp out;
    out.state_begin.reserve(space.size() + 1);
    out.state_begin.push_back(0);
    out.outcome_begin.push_back(0);
    for (std::size_t s = 0; s < space.size(); ++s) {
        for (const Choice& c : table.choices(s)) {
            double selfish = 0.0;
            double total = 0.0;
            for (const Outcome& o : c.outcomes) {
                const ScalarReward sr = scalarize(o.reward, weights);
                selfish += o.probability * sr.selfish;
                total += o.probability * sr.total;
                out.next.push_back(static_cast<std::uint32_t>(*space.index_of(o.next)));
                out.probability.push_back(o.probability);
            }
            out.action.push_back(c.action);
            out.selfish.push_back(selfish);
            out.total.push_back(total);
            out.outcome_begin.push_back(static_cast<std::uint32_t>(out.next.size()));
        }
        out.state_begin.push_back(static_cast<std::uint32_t>(out.action.size()));
    }
    return out;
}

namespace {

inline double q_value(const CompiledMdp& mdp, std::size_t c, double w, std::span<const double> h)
{
    double q = mdp.selfish[c] - w * mdp.total[c];
    for (std::uint32_t o = mdp.outcome_begin[c]; o < mdp.outcome_begin[c + 1]; ++o) {
        q += mdp.probability[o] * h[mdp.next[o]];
    }
    return q;
}

inline double state_backup(const CompiledMdp& mdp, std::size_t s, double w, std::span<const double> h)
{
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t c = mdp.state_begin[s]; c < mdp.state_begin[s + 1]; ++c) {
        best = std::max(best, q_value(mdp, c, w, h));
    }
    return best - h[s];
}

}  // namespace

SweepBounds bellman_sweep(const CompiledMdp& mdp, double w, std::span<const double> h, std::span<double> diff)
{
    const auto n = static_cast<std::int64_t>(mdp.state_count());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
    for (std::int64_t s = 0; s < n; ++s) {
        const double d = state_backup(mdp, static_cast<std::size_t>(s), w, h);
        diff[static_cast<std::size_t>(s)] = d;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

SweepBounds bellman_sweep_serial(const CompiledMdp& mdp, double w, std::span<const double> h,
                                 std::span<double> diff)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < mdp.state_count(); ++s) {
        const double d = state_backup(mdp, s, w, h);
        diff[s] = d;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

namespace {

enum class Sign { positive, negative, zero };

struct GainProbe {
    Sign sign;
    SweepBounds bounds;
    std::uint64_t iterations;
};

/// Runs relative value iteration at `w` (warm-started from `h`) until the sign
/// of the optimal gain is known or the span drops below the tolerance.
/// With `stop_on_sign` false it always runs to the span tolerance.
GainProbe probe_gain(const CompiledMdp& mdp, double w, std::vector<double>& h, std::vector<double>& diff,
                     const SolveOptions& opt, bool stop_on_sign = true)
{
    const double tau = opt.aperiodicity;
    for (std::uint64_t it = 1;; ++it) {
        const SweepBounds b = opt.parallel ? bellman_sweep(mdp, w, h, diff) : bellman_sweep_serial(mdp, w, h, diff);
        if (b.upper - b.lower < opt.eps_inner) {
            const Sign sign = b.lower > 0.0 ? Sign::positive : b.upper < 0.0 ? Sign::negative : Sign::zero;
            return {sign, b, it};
        }
        if (stop_on_sign && b.lower > 0.0) return {Sign::positive, b, it};
        if (stop_on_sign && b.upper < 0.0) return {Sign::negative, b, it};
        if (it >= opt.max_inner_iterations) {
            std::ostringstream os;
            os << "relative value iteration did not converge at w=" << w << " after " << it
               << " sweeps (span " << (b.upper - b.lower) << ")";
            throw SolverError(os.str(), w, it, b.upper - b.lower);
        }
        // h <- h + tau * diff, renormalised at state 0 to keep values bounded.
        const double shift = h[0] + tau * diff[0];
        for (std::size_t s = 0; s < h.size(); ++s) h[s] = h[s] + tau * diff[s] - shift;
    }
}

std::vector<Action> greedy_policy(const CompiledMdp& mdp, double w, std::span<const double> h)
{
    std::vector<Action> policy(mdp.state_count());
    for (std::size_t s = 0; s < mdp.state_count(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::uint32_t c = mdp.state_begin[s]; c < mdp.state_begin[s + 1]; ++c) {
            best = std::max(best, q_value(mdp, c, w, h));
        }
        // First action (in table order) within rounding of the best.
        const double tol = 1e-9 * std::max(1.0, std::fabs(best));
        for (std::uint32_t c = mdp.state_begin[s]; c < mdp.state_begin[s + 1]; ++c) {
            if (q_value(mdp, c, w, h) >= best - tol) {
                policy[s] = mdp.action[c];
                break;
            }
        }
    }
    return policy;
}

}  // namespace

SolveResult solve(const TransitionTable& table, const RewardWeights& weights, const SolveOptions& options)
{
    if (!(options.eps_inner > 0.0) || !(options.eps_outer > 0.0)) {
        throw ValidationError("solver tolerances must be positive");
    }
    if (!(options.aperiodicity > 0.0 && options.aperiodicity <= 1.0)) {
        throw ValidationError("aperiodicity must lie in (0,1]");
    }
    const CompiledMdp mdp = compile(table, weights);
    if (mdp.state_count() == 0) throw ValidationError("empty transition table");

    std::vector<double> h(mdp.state_count(), 0.0);
    std::vector<double> diff(mdp.state_count(), 0.0);

    SolveResult result;
    result.space = table.space();
    result.weights = weights;
    result.params = table.params();
    result.inner_tolerance = options.eps_inner;

    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > options.eps_outer) {
        const double mid = 0.5 * (lo + hi);
        const GainProbe p = probe_gain(mdp, mid, h, diff, options);
        ++result.outer_iterations;
        result.inner_iterations += p.iterations;
        switch (p.sign) {
        case Sign::positive: lo = mid; break;
        case Sign::negative: hi = mid; break;
        case Sign::zero:
            // |g(mid)| is below the inner tolerance; follow the midpoint estimate.
            if (p.bounds.lower + p.bounds.upper >= 0.0) lo = mid;
            else hi = mid;
            break;
        }
    }
    result.revenue = 0.5 * (lo + hi);

    // Converge the bias at the final ratio and read off the greedy policy.
    const GainProbe fin = probe_gain(mdp, result.revenue, h, diff, options, false);
    result.inner_iterations += fin.iterations;
    result.gain_lower = fin.bounds.lower;
    result.gain_upper = fin.bounds.upper;
    result.policy = greedy_policy(mdp, result.revenue, h);
    return result;
}

SolveResult solve(const TransitionTable& table, const RewardWeights& weights, double eps_inner, double eps_outer)
{
    SolveOptions opt;
    opt.eps_inner = eps_inner;
    opt.eps_outer = eps_outer;
    return solve(table, weights, opt);
}

Action policy_action(const SolveResult& result, const MdpState& state)
{
    const auto idx = result.space.index_of(state);
    if (!idx || *idx >= result.policy.size()) {
        throw std::out_of_range("state " + to_string(state) + " outside the solved state space");
    }
    return result.policy[*idx];
}

}  // namespace ngi::mdp
