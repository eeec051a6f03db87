#include "ngi/export.hpp"

#include <iomanip>
#include <ostream>

namespace ngi::io {

using nlohmann::json;

json to_json(const ProtocolParams& p)
{
    json j{{"alpha", p.alpha},
           {"gamma", p.gamma},
           {"split_ratio", p.split_ratio},
           {"key_rate", p.key_rate},
           {"micro_rate", p.micro_rate},
           {"key_block_reward", p.key_block_reward},
           {"microblock_fee", p.microblock_fee}};
    if (p.expected_microblock_fee) j["expected_microblock_fee"] = *p.expected_microblock_fee;
    return j;
}

json to_json(const RewardWeights& w)
{
    return {{"key_weight", w.key_weight}, {"fee_weight", w.fee_weight}};
}

json to_json(const mdp::MdpState& s)
{
    return {{"l_a", s.l_a}, {"l_h", s.l_h}, {"fork", mdp::to_string(s.fork)},
            {"last_micro", mdp::to_string(s.last_micro)}};
}

mdp::MdpState state_from_json(const json& j)
{
    return {j.at("l_a").get<int>(), j.at("l_h").get<int>(), mdp::parse_fork(j.at("fork").get<std::string>()),
            mdp::parse_last_micro(j.at("last_micro").get<std::string>())};
}

json policy_to_json(const mdp::SolveResult& result)
{
    json policy = json::array();
    for (std::size_t i = 0; i < result.policy.size(); ++i) {
        policy.push_back({{"state", to_json(result.space.state(i))}, {"action", mdp::to_string(result.policy[i])}});
    }
    return {{"revenue", result.revenue},
            {"truncation", result.truncation()},
            {"outer_iterations", result.outer_iterations},
            {"inner_tolerance", result.inner_tolerance},
            {"weights", to_json(result.weights)},
            {"params", to_json(result.params)},
            {"policy", std::move(policy)}};
}

json to_json(const sim::SimReport& r)
{
    return {{"strategy", r.strategy},
            {"seed", r.seed},
            {"relative_revenue", r.relative_revenue},
            {"std_error", r.std_error},
            {"selfish_key_rewards", r.selfish_key_rewards},
            {"honest_key_rewards", r.honest_key_rewards},
            {"selfish_fees", r.selfish_fees},
            {"honest_fees", r.honest_fees},
            {"orphaned_fee_units", r.orphaned_fee_units},
            {"generated_fee_units", r.generated_fee_units},
            {"settled_blocks", r.settled_blocks},
            {"boundary_visits", r.boundary_visits},
            {"pair_counts", {{"z", r.pair_counts.z}, {"k", r.pair_counts.k}, {"m", r.pair_counts.m}}},
            {"weights", to_json(r.weights)}};
}

void write_reports_csv(std::ostream& out, std::span<const sim::SimReport> reports)
{
    out << "strategy,seed,relative_revenue,std_error,selfish_key_rewards,honest_key_rewards,selfish_fees,"
           "honest_fees,orphaned_fee_units,generated_fee_units,pairs_z,pairs_k,settled_blocks,boundary_visits\n";
    const auto old = out.precision(17);
    for (const auto& r : reports) {
        out << '"' << r.strategy << '"' << ',' << r.seed << ',' << r.relative_revenue << ',' << r.std_error << ','
            << r.selfish_key_rewards << ',' << r.honest_key_rewards << ',' << r.selfish_fees << ','
            << r.honest_fees << ',' << r.orphaned_fee_units << ',' << r.generated_fee_units << ','
            << r.pair_counts.z << ',' << r.pair_counts.k << ',' << r.settled_blocks << ',' << r.boundary_visits
            << '\n';
    }
    out.precision(old);
}

json revenue_curve_json(std::span<const RevenuePoint> points)
{
    json rows = json::array();
    for (const auto& p : points) {
        rows.push_back({{"alpha", p.alpha}, {"regime", to_string(p.regime)}, {"r", p.r}, {"gamma", p.gamma},
                        {"revenue", p.revenue}});
    }
    return rows;
}

void write_revenue_csv(std::ostream& out, std::span<const RevenuePoint> points)
{
    out << "alpha,regime,r,gamma,revenue\n";
    const auto old = out.precision(17);
    for (const auto& p : points) {
        out << p.alpha << ',' << to_string(p.regime) << ',' << p.r << ',' << p.gamma << ',' << p.revenue << '\n';
    }
    out.precision(old);
}

}  // namespace ngi::io
