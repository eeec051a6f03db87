#include "ngi/concentration.hpp"

#include "ngi/model.hpp"
#include "ngi/rng.hpp"

#include <cmath>
#include <string>

namespace ngi::concentration {

OwnershipSequence::OwnershipSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
{
    if (bits_.empty()) throw ValidationError("ownership sequence must not be empty");
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] > 1) throw ValidationError("ownership bit " + std::to_string(i) + " is not 0 or 1");
    }
    if (bits_.front() != 0) throw ValidationError("ownership sequence must start with an honest block");
}

PairCounts count_pairs(const OwnershipSequence& seq)
{
    const auto bits = seq.bits();
    if (bits.size() < 2) throw DomainError("count_pairs needs at least two blocks");
    PairCounts out;
    out.m = bits.size();
    for (std::size_t i = 0; i + 1 < bits.size(); ++i) {
        out.z += (bits[i] == 1 && bits[i + 1] == 0);
        out.k += (bits[i] == 0 && bits[i + 1] == 1);
    }
    return out;
}

double chernoff_dependent_sum_bound(double mu, double delta)
{
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    if (!(mu >= 0.0)) throw DomainError("mu must be nonnegative");
    return std::exp(-delta * delta * mu / 2.0);
}

double pair_deviation_bound(double alpha, std::uint64_t m, double delta)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha out of [0,1]");
    if (m < 2) throw DomainError("m must be at least 2");
    // Per-half mean ab(m-1)/2 fed to the dependent-sum bound, four tails.
    const double half_mean = alpha * (1.0 - alpha) * static_cast<double>(m - 1) / 2.0;
    return 4.0 * chernoff_dependent_sum_bound(half_mean, delta);
}

namespace {

struct TrialOutcome {
    std::uint64_t count;
    bool deviates;
};

TrialOutcome run_trial(double alpha, std::uint64_t m, double delta, std::uint64_t seed, std::uint64_t trial,
                       PairKind kind)
{
    Rng rng(stream_seed(seed, trial));
    const double expected = alpha * (1.0 - alpha) * static_cast<double>(m - 1);
    std::uint64_t count = 0;
    bool prev = false;  // first block honest
    const bool want_prev = kind == PairKind::selfish_honest;
    for (std::uint64_t i = 1; i < m; ++i) {
        const bool cur = rng.bernoulli(alpha);
        count += (prev == want_prev && cur != want_prev);
        prev = cur;
    }
    const double dev = std::fabs(static_cast<double>(count) - expected);
    return {count, dev > delta * expected};
}

void check_args(std::uint64_t m, double delta, std::uint64_t trials, double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha out of [0,1]");
    if (m < 2) throw DomainError("m must be at least 2");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    if (trials < 1) throw DomainError("trials must be at least 1");
}

DeviationEstimate finish(std::uint64_t hits, double count_sum, double alpha, std::uint64_t m,
                         std::uint64_t trials)
{
    DeviationEstimate est;
    est.trials = trials;
    est.probability = static_cast<double>(hits) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(trials));
    est.mean_count = count_sum / static_cast<double>(trials);
    est.expected_count = alpha * (1.0 - alpha) * static_cast<double>(m - 1);
    return est;
}

}  // namespace

DeviationEstimate empirical_pair_deviation(double alpha, std::uint64_t m, double delta, std::uint64_t trials,
                                           std::uint64_t seed, PairKind kind)
{
    check_args(m, delta, trials, alpha);
    std::uint64_t hits = 0;
    // Counts are integers, so the sum is exact and order-independent.
    std::uint64_t count_sum = 0;
    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : hits, count_sum)
    for (std::int64_t t = 0; t < n; ++t) {
        const TrialOutcome o = run_trial(alpha, m, delta, seed, static_cast<std::uint64_t>(t), kind);
        hits += o.deviates;
        count_sum += o.count;
    }
    return finish(hits, static_cast<double>(count_sum), alpha, m, trials);
}

DeviationEstimate empirical_pair_deviation_serial(double alpha, std::uint64_t m, double delta,
                                                  std::uint64_t trials, std::uint64_t seed, PairKind kind)
{
    check_args(m, delta, trials, alpha);
    std::uint64_t hits = 0;
    std::uint64_t count_sum = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const TrialOutcome o = run_trial(alpha, m, delta, seed, t, kind);
        hits += o.deviates;
        count_sum += o.count;
    }
    return finish(hits, static_cast<double>(count_sum), alpha, m, trials);
}

}  // namespace ngi::concentration
