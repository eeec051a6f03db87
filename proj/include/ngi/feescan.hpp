#ifndef NGI_FEESCAN_HPP
#define NGI_FEESCAN_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ngi::fees {

/// One transaction fee, in whatever unit the input uses (BTC or satoshi).
struct FeeRecord {
    double fee = 0.0;
    std::optional<std::uint64_t> block_height;
};

struct LineError {
    std::size_t line;
    std::string message;
};

struct ParseResult {
    std::vector<FeeRecord> records;
    std::vector<LineError> errors;

    bool ok() const noexcept { return errors.empty(); }
};

/// Parses `fee` or `block_height,fee` lines. Blank lines and lines starting with
/// `#` are skipped. Bad lines are collected with their 1-based line number and
/// do not stop the parse.
ParseResult parse_fees(std::istream& in);

/// Histogram over half-open buckets [e_i, e_{i+1}). Fees below the first edge
/// land in the underflow bucket and fees at or above the last edge in the
/// overflow bucket, so the counts always sum to `count()`.
class FeeDistribution {
public:
    FeeDistribution(std::span<const FeeRecord> records, std::vector<double> edges);

    std::size_t count() const noexcept { return sorted_.size(); }
    const std::vector<double>& edges() const noexcept { return edges_; }
    /// Buckets between consecutive edges (edges().size() - 1 of them).
    const std::vector<std::uint64_t>& bucket_counts() const noexcept { return buckets_; }
    std::uint64_t underflow() const noexcept { return underflow_; }
    std::uint64_t overflow() const noexcept { return overflow_; }

    /// Fraction of fees strictly below `threshold`.
    double cdf_at(double threshold) const noexcept;

private:
    std::vector<double> edges_;
    std::vector<std::uint64_t> buckets_;
    std::uint64_t underflow_ = 0;
    std::uint64_t overflow_ = 0;
    std::vector<double> sorted_;
};

FeeDistribution distribution(std::span<const FeeRecord> records, std::vector<double> edges);

/// Two-class split: regular fees lie strictly below the threshold, whales at
/// or above it. Means of an empty class are reported as 0.
struct FeeClasses {
    double regular_fraction = 0.0;
    double mean_regular_fee = 0.0;
    double mean_whale_fee = 0.0;
    double mean_fee = 0.0;
    std::size_t regular_count = 0;
    std::size_t whale_count = 0;
};

FeeClasses classify(std::span<const FeeRecord> records, double whale_threshold);

}  // namespace ngi::fees

#endif  // NGI_FEESCAN_HPP
