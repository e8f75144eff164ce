#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "edgehost/model.hpp"

namespace edgehost {

struct StaticBenchmark {
    Level level = kNoHosting;
    double cost = 0.0;
};

/// min_i c alpha_i T + g(alpha_i) R_T + M alpha_i over the realized arrivals.
StaticBenchmark optimal_static_realized(const ArrivalSequence& arrivals, const HostingLadder& ladder,
                                        const CostParams& params);

/// min_i mu_i T + M alpha_i with mu_i = c alpha_i + g(alpha_i) mu.
/// Throws std::invalid_argument unless mu > 0.
StaticBenchmark optimal_static_stochastic(double mu, std::size_t T, const HostingLadder& ladder,
                                          const CostParams& params);

struct OfflineOptimum {
    HostingSchedule schedule;
    double cost = 0.0;
};

/// Exact offline optimum by forward dynamic programming over (slot, level),
/// O(T K^2) time. Backtracking prefers the lower level on ties.
OfflineOptimum offline_optimal_dp(const ArrivalSequence& arrivals, const HostingLadder& ladder,
                                  const CostParams& params);

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive minimum over all K^T schedules. Throws BudgetExceeded when
/// K^T > budget.
double brute_force_offline(const ArrivalSequence& arrivals, const HostingLadder& ladder,
                           const CostParams& params, std::uint64_t budget = 1'000'000);

}  // namespace edgehost
