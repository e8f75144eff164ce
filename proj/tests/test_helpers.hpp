#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "edgehost/model.hpp"

namespace edgehost::test {

/// {0 : 1, 0.5 : 0.45, 1 : 0}
inline HostingLadder three_level_ladder()
{
    return HostingLadder({{0.0, 1.0}, {0.5, 0.45}, {1.0, 0.0}});
}

/// Random valid (ladder, params) with K in {2, 3}; the partial level satisfies
/// alpha + g <= 1 and c <= kappa.
struct Instance {
    HostingLadder ladder;
    CostParams params;
};

inline Instance random_instance(std::mt19937_64& gen, bool allow_partial = true)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Instance inst;
    inst.params.kappa = 1.0 + std::floor(u(gen) * 5.0);
    inst.params.c = (0.05 + 0.9 * u(gen)) * inst.params.kappa;
    inst.params.M = 1.0 + u(gen) * 20.0 + 1e-3;
    if (allow_partial && u(gen) < 0.6) {
        const double a = 0.1 + 0.8 * u(gen);
        const double g = (1.0 - a) * (0.2 + 0.79 * u(gen));
        inst.ladder = HostingLadder({{0.0, 1.0}, {a, g}, {1.0, 0.0}});
    } else {
        inst.ladder = HostingLadder::binary();
    }
    return inst;
}

inline ArrivalSequence random_arrivals(std::mt19937_64& gen, std::size_t T, double kappa,
                                       bool integral = true)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ArrivalSequence a;
    for (std::size_t t = 0; t < T; ++t) {
        double r = u(gen) * kappa;
        if (integral) r = std::floor(u(gen) * (kappa + 1.0));
        a.requests.push_back(std::min(r, kappa));
    }
    return a;
}

}  // namespace edgehost::test
