#include "ngi/feescan.hpp"

#include "ngi/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <string_view>

namespace ngi::fees {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out)
{
    text = trim(text);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

ParseResult parse_fees(std::istream& in)
{
    ParseResult out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;

        FeeRecord rec;
        std::string_view fee_text = text;
        if (const auto comma = text.find(','); comma != std::string_view::npos) {
            std::uint64_t height = 0;
            if (!parse_number(text.substr(0, comma), height)) {
                out.errors.push_back({line_no, "invalid block height"});
                continue;
            }
            rec.block_height = height;
            fee_text = text.substr(comma + 1);
        }
        if (!parse_number(fee_text, rec.fee) || !std::isfinite(rec.fee)) {
            out.errors.push_back({line_no, "fee is not a number"});
            continue;
        }
        if (rec.fee < 0.0) {
            out.errors.push_back({line_no, "fee is negative"});
            continue;
        }
        out.records.push_back(rec);
    }
    return out;
}

FeeDistribution::FeeDistribution(std::span<const FeeRecord> records, std::vector<double> edges)
    : edges_(std::move(edges))
{
    if (edges_.empty()) throw ValidationError("bucket edges must not be empty");
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (!(edges_[i - 1] < edges_[i])) throw ValidationError("bucket edges must be strictly ascending");
    }
    buckets_.assign(edges_.size() - 1, 0);
    sorted_.reserve(records.size());
    for (const FeeRecord& r : records) {
        sorted_.push_back(r.fee);
        // upper_bound puts a fee equal to an edge into the bucket that edge opens.
        const auto pos = std::upper_bound(edges_.begin(), edges_.end(), r.fee) - edges_.begin();
        if (pos == 0) ++underflow_;
        else if (static_cast<std::size_t>(pos) == edges_.size()) ++overflow_;
        else ++buckets_[static_cast<std::size_t>(pos) - 1];
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double FeeDistribution::cdf_at(double threshold) const noexcept
{
    if (sorted_.empty()) return 0.0;
    const auto below = std::lower_bound(sorted_.begin(), sorted_.end(), threshold) - sorted_.begin();
    return static_cast<double>(below) / static_cast<double>(sorted_.size());
}

FeeDistribution distribution(std::span<const FeeRecord> records, std::vector<double> edges)
{
    return FeeDistribution(records, std::move(edges));
}

FeeClasses classify(std::span<const FeeRecord> records, double whale_threshold)
{
    if (!(whale_threshold > 0.0)) throw ValidationError("whale_threshold must be positive");
    if (records.empty()) throw ValidationError("classify needs at least one fee record");
    FeeClasses out;
    double regular_sum = 0.0;
    double whale_sum = 0.0;
    for (const FeeRecord& r : records) {
        if (r.fee < whale_threshold) {
            ++out.regular_count;
            regular_sum += r.fee;
        } else {
            ++out.whale_count;
            whale_sum += r.fee;
        }
    }
    const auto n = static_cast<double>(records.size());
    out.regular_fraction = static_cast<double>(out.regular_count) / n;
    out.mean_fee = (regular_sum + whale_sum) / n;
    if (out.regular_count > 0) out.mean_regular_fee = regular_sum / static_cast<double>(out.regular_count);
    if (out.whale_count > 0) out.mean_whale_fee = whale_sum / static_cast<double>(out.whale_count);
    return out;
}

}  // namespace ngi::fees
