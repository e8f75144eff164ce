#include "edgehost/oracles.hpp"

#include <algorithm>
#include <limits>

namespace edgehost {

namespace {

StaticBenchmark best_static(std::size_t K, auto&& cost_of)
{
    StaticBenchmark best{kNoHosting, cost_of(Level{0})};
    for (Level i = 1; i < K; ++i) {
        const double c = cost_of(i);
        if (c < best.cost) best = {i, c};
    }
    return best;
}

}  // namespace

StaticBenchmark optimal_static_realized(const ArrivalSequence& arrivals, const HostingLadder& ladder,
                                        const CostParams& params)
{
    const double T = static_cast<double>(arrivals.horizon());
    const double R = arrivals.total();
    return best_static(ladder.size(), [&](Level i) {
        return params.c * ladder.alpha(i) * T + ladder.g(i) * R + params.M * ladder.alpha(i);
    });
}

StaticBenchmark optimal_static_stochastic(double mu, std::size_t T, const HostingLadder& ladder,
                                          const CostParams& params)
{
    if (!(mu > 0.0)) throw std::invalid_argument("stochastic benchmark needs mu > 0");
    if (T == 0) return {kNoHosting, 0.0};
    const double horizon = static_cast<double>(T);
    return best_static(ladder.size(), [&](Level i) {
        const double mu_i = params.c * ladder.alpha(i) + ladder.g(i) * mu;
        return mu_i * horizon + params.M * ladder.alpha(i);
    });
}

OfflineOptimum offline_optimal_dp(const ArrivalSequence& arrivals, const HostingLadder& ladder,
                                  const CostParams& params)
{
    const std::size_t T = arrivals.horizon();
    const std::size_t K = ladder.size();
    if (T == 0) return {};

    constexpr double inf = std::numeric_limits<double>::infinity();
    // best[j]: cheapest cost of slots 1..t ending at level j.
    std::vector<double> best(K, inf), next(K);
    std::vector<Level> parent(T * K, kNoHosting);

    auto fetch = [&](Level from, Level to) {
        return params.M * std::max(0.0, ladder.alpha(to) - ladder.alpha(from));
    };
    auto serve = [&](Level j, double r) { return params.c * ladder.alpha(j) + ladder.g(j) * r; };

    for (Level j = 0; j < K; ++j) best[j] = serve(j, arrivals.requests[0]) + fetch(kNoHosting, j);

    for (std::size_t t = 1; t < T; ++t) {
        for (Level j = 0; j < K; ++j) {
            Level arg = 0;
            double value = best[0] + fetch(0, j);
            for (Level i = 1; i < K; ++i) {
                const double v = best[i] + fetch(i, j);
                if (v < value) {
                    value = v;
                    arg = i;
                }
            }
            next[j] = value + serve(j, arrivals.requests[t]);
            parent[t * K + j] = arg;
        }
        std::swap(best, next);
    }

    OfflineOptimum out;
    Level end = 0;
    for (Level j = 1; j < K; ++j)
        if (best[j] < best[end]) end = j;
    out.cost = best[end];
    out.schedule.assign(T, kNoHosting);
    out.schedule[T - 1] = end;
    for (std::size_t t = T - 1; t > 0; --t) out.schedule[t - 1] = parent[t * K + out.schedule[t]];
    return out;
}

double brute_force_offline(const ArrivalSequence& arrivals, const HostingLadder& ladder,
                           const CostParams& params, std::uint64_t budget)
{
    const std::size_t T = arrivals.horizon();
    const std::size_t K = ladder.size();
    std::uint64_t count = 1;
    for (std::size_t t = 0; t < T; ++t) {
        if (count > budget / K) throw BudgetExceeded("K^T exceeds the enumeration budget");
        count *= K;
    }
    if (count > budget) throw BudgetExceeded("K^T exceeds the enumeration budget");

    // Slot costs are accumulated as (fetch, then rent + service) in time order,
    // the same association the DP uses, so equal schedules give equal doubles.
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t code = 0; code < count; ++code) {
        std::uint64_t rest = code;
        double acc = 0.0;
        Level prev = kNoHosting;
        for (std::size_t t = 0; t < T; ++t) {
            const auto level = static_cast<Level>(rest % K);
            rest /= K;
            acc += params.M * std::max(0.0, ladder.alpha(level) - ladder.alpha(prev));
            acc += params.c * ladder.alpha(level) + ladder.g(level) * arrivals.requests[t];
            prev = level;
        }
        best = std::min(best, acc);
    }
    return T == 0 ? 0.0 : best;
}

}  // namespace edgehost
