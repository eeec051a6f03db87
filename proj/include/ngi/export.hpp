#ifndef NGI_EXPORT_HPP
#define NGI_EXPORT_HPP

#include "ngi/mdp.hpp"
#include "ngi/model.hpp"
#include "ngi/simulator.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>

namespace ngi::io {

nlohmann::json to_json(const ProtocolParams& p);
nlohmann::json to_json(const RewardWeights& w);
nlohmann::json to_json(const mdp::MdpState& s);
mdp::MdpState state_from_json(const nlohmann::json& j);

/// {"revenue", "truncation", "weights", "params", "policy": [{"state": {...}, "action": "..."}]}
nlohmann::json policy_to_json(const mdp::SolveResult& result);

nlohmann::json to_json(const sim::SimReport& report);

/// One row per report, with a header line.
void write_reports_csv(std::ostream& out, std::span<const sim::SimReport> reports);

struct RevenuePoint {
    double alpha;
    Regime regime;
    double r;
    double gamma;
    double revenue;
};

nlohmann::json revenue_curve_json(std::span<const RevenuePoint> points);
/// Columns: alpha,regime,r,gamma,revenue
void write_revenue_csv(std::ostream& out, std::span<const RevenuePoint> points);

}  // namespace ngi::io

#endif  // NGI_EXPORT_HPP
