#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "edgehost/model.hpp"

namespace edgehost {

/// Per-level expected slot costs under i.i.d. arrivals of mean mu, and their gaps.
struct ArrivalStats {
    double mu = 0.0;
    Eigen::VectorXd mu_i;   ///< c alpha_i + g(alpha_i) mu
    Level i_star = 0;       ///< argmin mu_i, lowest index on ties
    Eigen::VectorXd delta;  ///< mu_i - mu_{i*}
    double delta_min = 0.0; ///< over i != i*
    double delta_max = 0.0;
};

ArrivalStats arrival_stats(double mu, const HostingLadder& ladder, const CostParams& params);

/// Total cost of the run minus the best static level in hindsight.
/// Negative values are possible for a single randomized run.
double regret_adversarial(const RunRecord& run, const ArrivalSequence& arrivals,
                          const HostingLadder& ladder, const CostParams& params);

/// mean_cost - min_i (mu_i T + M alpha_i)
double regret_stochastic(double mean_cost, double mu, std::size_t T, const HostingLadder& ladder,
                         const CostParams& params);

/// Expected cost of a schedule when each slot's arrivals have mean mu and are
/// independent of the level chosen for that slot: sum_t mu_{rho_t} plus fetches.
double expected_schedule_cost(const HostingSchedule& schedule, double mu,
                              const HostingLadder& ladder, const CostParams& params);

enum class RatioMode { Adversarial, Stochastic };

/// run_cost divided by the offline DP optimum (adversarial) or by the optimal
/// static expectation (stochastic, needs mu). nullopt when the denominator is 0.
std::optional<double> competitive_ratio(double run_cost, const ArrivalSequence& arrivals,
                                        const HostingLadder& ladder, const CostParams& params,
                                        RatioMode mode, std::optional<double> mu = std::nullopt);

enum class BoundKind { FtplAdv, WftplAdv, FtplStoch, WftplStoch, FtplCr, WftplCr, AdvLowerFtpl };

std::string to_string(BoundKind kind);
/// Throws std::invalid_argument for unknown names.
BoundKind parse_bound_kind(const std::string& name);

/// Symbols a bound may use. K, alpha2, delta_min and delta_max fall back to
/// the ladder (and mu) when not given directly.
struct BoundInputs {
    std::optional<double> T, K, alpha, kappa, M, c, beta, delta;
    std::optional<double> delta_min, delta_max, alpha2, mu;
    std::optional<HostingLadder> ladder;
};

class MissingSymbol : public std::invalid_argument {
public:
    explicit MissingSymbol(const std::string& symbol)
        : std::invalid_argument("missing symbol: " + symbol), symbol_(symbol)
    {
    }
    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

struct BoundValue {
    double value = 0.0;
    std::vector<std::pair<std::string, double>> symbols;  ///< symbols actually used
};

/// Evaluates a closed-form regret / competitive-ratio bound with natural logs.
/// Throws MissingSymbol for absent inputs and std::domain_error when a
/// stochastic bound is asked for with delta_min = 0.
BoundValue theoretical_bound(BoundKind kind, const BoundInputs& inputs);

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double se = 0.0;   ///< sample standard deviation / sqrt(n)
    double p10 = 0.0;
    double p90 = 0.0;
};

/// Mean, standard error and linearly interpolated 10/90 percentiles.
Summary summarize(std::span<const double> values);

}  // namespace edgehost
