#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>

#include "edgehost/model.hpp"

namespace edgehost {

/// r_t = kappa * Bernoulli(mu / kappa), so E[r_t] = mu. Requires 0 < mu <= kappa.
ArrivalSequence gen_iid_bernoulli(double mu, double kappa, std::size_t T, std::uint64_t seed);

/// r_t drawn i.i.d. from a finite distribution over request counts in [0, kappa].
ArrivalSequence gen_iid_discrete(std::span<const double> values, std::span<const double> probs,
                                 double kappa, std::size_t T, std::uint64_t seed);

enum class FrameMode {
    Full,     ///< burst of ceil(M / (kappa - c)) slots
    Partial,  ///< burst sized by the cheapest nonzero level to fetch
};

struct FrameShape {
    std::size_t burst = 0;  ///< t_f slots of kappa requests
    std::size_t idle = 0;   ///< t_e = ceil(M / c) slots of zero requests
    std::size_t length() const { return burst + idle; }
};

/// argmin over nonzero levels of M alpha_i / (kappa - c alpha_i - kappa g(alpha_i)).
/// Throws std::invalid_argument if some denominator is not positive.
Level cheapest_fetch_level(const HostingLadder& ladder, const CostParams& params);

FrameShape frame_shape(const CostParams& params, const HostingLadder& ladder, FrameMode mode);

/// n_frames repetitions of [burst x kappa, idle x 0].
ArrivalSequence gen_adversarial_frames(const CostParams& params, const HostingLadder& ladder,
                                       std::size_t n_frames, FrameMode mode);

/// argmin over i != 1 of alpha_i / (1 - g(alpha_i)).
Level lower_bound_level(const HostingLadder& ladder);

/// Bernoulli probability c alpha_l / (kappa (1 - g(alpha_l))) of the construction.
double lower_bound_probability(const CostParams& params, const HostingLadder& ladder);

/// r_t = kappa * Bernoulli(c alpha_l / (kappa (1 - g(alpha_l)))).
ArrivalSequence gen_stochastic_lower_bound(const CostParams& params, const HostingLadder& ladder,
                                           std::size_t T, std::uint64_t seed);

enum class ClipPolicy { Clip, Reject };

struct TraceLoad {
    ArrivalSequence arrivals;
    std::size_t clipped = 0;  ///< slots whose count exceeded kappa
};

/// Reads pre-binned per-slot counts: one number per line, or a "slot,count"
/// CSV with a header row and slots numbered consecutively from 1.
/// Throws std::runtime_error on unreadable or malformed input.
TraceLoad load_trace(const std::filesystem::path& path, double kappa, ClipPolicy clip);

/// FNV-1a over the bit patterns of the request counts.
std::uint64_t arrival_checksum(const ArrivalSequence& arrivals);

}  // namespace edgehost
