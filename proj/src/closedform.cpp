#include "ngi/closedform.hpp"

#include "ngi/model.hpp"

#include <algorithm>
#include <cmath>

namespace ngi::closedform {

namespace {

void require_unit(double x, const char* name)
{
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " out of [0,1]");
}

void require_below_one(double alpha)
{
    require_unit(alpha, "alpha");
    if (alpha >= 1.0) throw DomainError("alpha must be < 1");
}

}  // namespace

const char* to_string(TxClass c) noexcept
{
    switch (c) {
    case TxClass::whale: return "whale";
    case TxClass::regular: return "regular";
    case TxClass::all: return "all";
    }
    return "?";
}

TxClass parse_tx_class(const std::string& text)
{
    if (text == "whale") return TxClass::whale;
    if (text == "regular") return TxClass::regular;
    if (text == "all") return TxClass::all;
    throw ValidationError("class must be one of whale, regular, all (got '" + text + "')");
}

double inclusion_bound_original(double alpha)
{
    require_below_one(alpha);
    return 1.0 - (1.0 - alpha) / (1.0 + alpha - alpha * alpha);
}

double inclusion_bound_yin(double alpha)
{
    require_below_one(alpha);
    return alpha / (1.0 - alpha);
}

double extension_bound(double alpha)
{
    require_unit(alpha, "alpha");
    return (1.0 - alpha) / (2.0 - alpha);
}

RatioBounds ratio_bounds(double alpha)
{
    return {inclusion_bound_original(alpha), inclusion_bound_yin(alpha), extension_bound(alpha), alpha,
            1.0 - alpha};
}

FeasibleInterval feasible_interval(double alpha, TxClass cls)
{
    const RatioBounds b = ratio_bounds(alpha);
    double lower = 0.0;
    double upper = 1.0;
    if (cls == TxClass::whale || cls == TxClass::all) {
        lower = std::max(b.inclusion_lower_v1, b.inclusion_lower_v2);
        upper = b.extension_upper;
    }
    if (cls == TxClass::regular || cls == TxClass::all) {
        lower = std::max(lower, b.capacity_lower);
        upper = std::min(upper, b.capacity_upper);
    }
    return {lower, upper, lower >= upper};
}

double whale_infeasibility_threshold() noexcept
{
    return 1.0 - std::sqrt(2.0) / 2.0;
}

double inclusion_attack_revenue(double alpha, double r, double rho)
{
    require_unit(alpha, "alpha");
    require_unit(r, "r");
    require_unit(rho, "rho");
    const double loss = alpha * (1.0 - alpha) * rho;
    return (alpha - r * loss) / (1.0 - loss);
}

double extension_attack_revenue(double alpha, double r, double rho)
{
    require_unit(alpha, "alpha");
    require_unit(r, "r");
    require_unit(rho, "rho");
    const double loss = alpha * (1.0 - alpha) * rho;
    return (alpha - (1.0 - r) * loss) / (1.0 - loss);
}

OptimalRevenue optimal_inclusion_revenue(double alpha, double r)
{
    require_unit(alpha, "alpha");
    require_unit(r, "r");
    if (r > alpha) return {alpha, 0.0};
    if (r == alpha) return {alpha, 1.0};
    return {r + (alpha - r) / (1.0 - alpha * (1.0 - alpha)), 1.0};
}

OptimalRevenue optimal_extension_revenue(double alpha, double r)
{
    require_unit(alpha, "alpha");
    require_unit(r, "r");
    const double beta = 1.0 - alpha;
    if (r < beta) return {alpha, 0.0};
    if (r == beta) return {alpha, 1.0};
    return {1.0 - r + (r - beta) / (1.0 - alpha * beta), 1.0};
}

}  // namespace ngi::closedform
