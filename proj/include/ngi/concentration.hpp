#ifndef NGI_CONCENTRATION_HPP
#define NGI_CONCENTRATION_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace ngi::concentration {

/// Key-block ownership indicators: 1 = selfish, 0 = honest. The first block is
/// the honest common starting block.
class OwnershipSequence {
public:
    explicit OwnershipSequence(std::vector<std::uint8_t> bits);

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return bits_.size(); }

private:
    std::vector<std::uint8_t> bits_;
};

/// Adjacent-pair counts over a sequence of length m.
struct PairCounts {
    std::uint64_t z = 0;  ///< (selfish, honest) pairs
    std::uint64_t k = 0;  ///< (honest, selfish) pairs
    std::uint64_t m = 0;

    friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

/// Which adjacent pair a deviation statistic counts.
enum class PairKind { selfish_honest, honest_selfish };

PairCounts count_pairs(const OwnershipSequence& seq);

/// Lower-tail bound e^(-delta^2 mu / 2) for a sum of T interleaved sums of
/// independent indicators whose smallest mean is mu.
double chernoff_dependent_sum_bound(double mu, double delta);

/// Two-sided bound on Pr(|Z - ab(m-1)| > delta ab(m-1)):
///
///     4 exp(-delta^2 ab (m-1) / 4)
///
/// Z splits into odd- and even-indexed pair sums (T = 2), each a sum of
/// independent indicators with mean ab(m-1)/2; each of the four tails
/// contributes one exp(-delta^2 ab(m-1)/4) term. Holds for K by symmetry.
double pair_deviation_bound(double alpha, std::uint64_t m, double delta);

struct DeviationEstimate {
    double probability = 0.0;   ///< fraction of trials with a deviation event
    double std_error = 0.0;     ///< binomial standard error of `probability`
    double mean_count = 0.0;    ///< sample mean of the pair count
    double expected_count = 0.0;  ///< ab(m-1)
    std::uint64_t trials = 0;
};

/// Monte Carlo estimate of the deviation probability bounded above. Trial t
/// draws from stream t of `seed`, so the result is independent of the thread
/// count. Parallelised over trials with OpenMP.
DeviationEstimate empirical_pair_deviation(double alpha, std::uint64_t m, double delta, std::uint64_t trials,
                                           std::uint64_t seed, PairKind kind = PairKind::selfish_honest);

/// Single-threaded reference for empirical_pair_deviation; same result.
DeviationEstimate empirical_pair_deviation_serial(double alpha, std::uint64_t m, double delta,
                                                  std::uint64_t trials, std::uint64_t seed,
                                                  PairKind kind = PairKind::selfish_honest);

}  // namespace ngi::concentration

#endif  // NGI_CONCENTRATION_HPP
