#ifndef NGI_CLOSEDFORM_HPP
#define NGI_CLOSEDFORM_HPP

#include <string>

namespace ngi::closedform {

/// Split-ratio bounds that resist the microblock attacks at a given alpha.
struct RatioBounds {
    double inclusion_lower_v1;  ///< original inclusion bound, 1 - (1-a)/(1+a-a^2)
    double inclusion_lower_v2;  ///< re-election corrected inclusion bound, a/(1-a)
    double extension_upper;     ///< extension bound, (1-a)/(2-a)
    double capacity_lower;      ///< a, regular transactions under capacity limits
    double capacity_upper;      ///< 1-a
};

struct FeasibleInterval {
    double lower;
    double upper;
    bool empty;  ///< lower >= upper

    bool contains(double r) const noexcept { return !empty && r > lower && r < upper; }
};

enum class TxClass { whale, regular, all };

const char* to_string(TxClass c) noexcept;
TxClass parse_tx_class(const std::string& text);

/// An attack's revenue together with the withholding fraction that achieves it.
struct OptimalRevenue {
    double revenue;
    double rho;
};

double inclusion_bound_original(double alpha);
double inclusion_bound_yin(double alpha);
double extension_bound(double alpha);

RatioBounds ratio_bounds(double alpha);

/// whale: (max of the inclusion bounds, extension bound); regular: (a, 1-a);
/// all: the intersection of the two.
FeasibleInterval feasible_interval(double alpha, TxClass cls);

/// The alpha at which the whale-feasible interval closes: the root of
/// 2a^2 - 4a + 1 = 0 below one, 1 - sqrt(2)/2.
double whale_infeasibility_threshold() noexcept;

/// Long-run relative revenue when a fraction rho of the attacker's own
/// microblocks is withheld in every (selfish, honest) key-block pair.
double inclusion_attack_revenue(double alpha, double r, double rho);

/// Long-run relative revenue when a fraction rho of the honest microblocks is
/// rejected in every (honest, selfish) key-block pair.
double extension_attack_revenue(double alpha, double r, double rho);

// Ties (r == alpha, r == 1 - alpha) report rho = 1 with revenue exactly alpha.
OptimalRevenue optimal_inclusion_revenue(double alpha, double r);
OptimalRevenue optimal_extension_revenue(double alpha, double r);

}  // namespace ngi::closedform

#endif  // NGI_CLOSEDFORM_HPP
