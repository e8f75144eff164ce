#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "edgehost/model.hpp"
#include "edgehost/rng.hpp"

namespace edgehost {

/// Online hosting policy. decide(t) may only use arrivals of slots < t.
class HostingPolicy {
public:
    virtual ~HostingPolicy() = default;

    /// Level hosted during slot t (1-based).
    virtual Level decide(std::size_t t) const = 0;
    /// Arrivals of slot t have been seen.
    virtual void observe(std::size_t t, double requests) = 0;

    /// Slot after which a wait-then-act policy started acting; nullopt otherwise.
    virtual std::optional<std::size_t> wait_end() const { return std::nullopt; }
};

// ---------------------------------------------------------------------------
// Follow the perturbed leader

/// eta_t = scale * sqrt(t) or scale * sqrt(t - 1).
enum class EtaSchedule { SqrtT, SqrtTMinusOne };

struct FtplState {
    Eigen::VectorXd theta;  ///< cumulative per-level cost of slots 1..t-1
    Eigen::VectorXd gamma;  ///< perturbation, drawn once per trial
    double eta_scale = 0.1;
    EtaSchedule eta_schedule = EtaSchedule::SqrtT;
};

/// Zero scores and a fresh N(0, I) perturbation of dimension K.
FtplState make_ftpl_state(std::size_t K, double eta_scale, EtaSchedule schedule, Rng& rng);

double learning_rate(const FtplState& state, std::size_t t);

/// argmin_i theta_i + eta_t gamma_i, lowest index on ties.
Level ftpl_decide(const FtplState& state, std::size_t t);

/// theta += c s + r f
void ftpl_observe(FtplState& state, double requests, const HostingLadder& ladder,
                  const CostParams& params);

// ---------------------------------------------------------------------------
// Wait, then follow the perturbed leader

struct WftplState {
    FtplState inner;
    double beta = 6.0;
    double delta = 0.0;
    bool waiting = true;
    std::optional<std::size_t> wait_end;  ///< T_s once the latch releases
};

WftplState make_wftpl_state(std::size_t K, double eta_scale, EtaSchedule schedule, double beta,
                            double delta, Rng& rng);

/// Level for slot t: kNoHosting while waiting, the FTPL choice afterwards.
Level wftpl_decide(const WftplState& state, std::size_t t);

/// Updates the scores with slot t's arrivals and, while waiting, releases the
/// latch when t < G^2 / (kappa^2 beta (ln M)^(1+delta)), G the score spread.
/// Throws std::invalid_argument if M <= 1.
void wftpl_observe(WftplState& state, std::size_t t, double requests, const HostingLadder& ladder,
                   const CostParams& params);

/// decide then observe; returns the level hosted in slot t.
Level wftpl_step(WftplState& state, std::size_t t, double requests, const HostingLadder& ladder,
                 const CostParams& params);

// ---------------------------------------------------------------------------
// alpha-RetroRenting

/// Hindsight state of alpha-RR. The window holds the arrivals of slots
/// t_recent + 1 .. t; the running minima make each step O(K).
struct AlphaRrState {
    std::size_t t_recent = 0;
    Level current_level = kNoHosting;
    std::vector<double> window;

    // Per target level v: min over hold lengths k in [0, L) of the cost of
    // holding current_level for k slots minus holding v for those k slots.
    std::vector<double> best_hold_gain;
    double window_requests = 0.0;
};

AlphaRrState make_alpha_rr_state(const HostingLadder& ladder);

/// Minimum hindsight cost, over switch points, of ending the current window
/// at each level. Entry current_level is the cost of never switching.
std::vector<double> alpha_rr_min_costs(const AlphaRrState& state, const HostingLadder& ladder,
                                       const CostParams& params);

/// Appends slot t's arrivals to the window and returns the level for slot t+1.
/// A different level is taken when its minimum cost is no larger than the cost
/// of staying; t_recent is then reset to t. Requires K <= 3.
Level alpha_rr_step(AlphaRrState& state, std::size_t t, double requests,
                    const HostingLadder& ladder, const CostParams& params);

// ---------------------------------------------------------------------------
// Policy objects

class StaticPolicy final : public HostingPolicy {
public:
    explicit StaticPolicy(Level level) : level_(level) {}
    Level decide(std::size_t) const override { return level_; }
    void observe(std::size_t, double) override {}

private:
    Level level_;
};

class FtplPolicy final : public HostingPolicy {
public:
    FtplPolicy(HostingLadder ladder, CostParams params, FtplState state);
    Level decide(std::size_t t) const override { return ftpl_decide(state_, t); }
    void observe(std::size_t t, double requests) override;
    const FtplState& state() const { return state_; }

private:
    HostingLadder ladder_;
    CostParams params_;
    FtplState state_;
};

class WftplPolicy final : public HostingPolicy {
public:
    /// Throws std::invalid_argument if M <= 1.
    WftplPolicy(HostingLadder ladder, CostParams params, WftplState state);
    Level decide(std::size_t t) const override { return wftpl_decide(state_, t); }
    void observe(std::size_t t, double requests) override;
    std::optional<std::size_t> wait_end() const override { return state_.wait_end; }
    const WftplState& state() const { return state_; }

private:
    HostingLadder ladder_;
    CostParams params_;
    WftplState state_;
};

class AlphaRetroRenting final : public HostingPolicy {
public:
    /// Throws std::invalid_argument for ladders with more than three levels.
    AlphaRetroRenting(HostingLadder ladder, CostParams params);
    Level decide(std::size_t) const override { return state_.current_level; }
    void observe(std::size_t t, double requests) override;
    const AlphaRrState& state() const { return state_; }

private:
    HostingLadder ladder_;
    CostParams params_;
    AlphaRrState state_;
};

std::unique_ptr<HostingPolicy> static_policy(Level level);

enum class PolicyKind { Static, Ftpl, Wftpl, AlphaRr };

struct PolicySpec {
    PolicyKind kind = PolicyKind::Ftpl;
    std::string name;  ///< row label in result files
    Level level = kNoHosting;
    double eta_scale = 0.1;
    EtaSchedule eta_schedule = EtaSchedule::SqrtT;
    double beta = 6.0;
    double delta = 0.0;
};

/// Builds a policy; randomized policies draw their perturbation from the
/// trial's Perturbation stream, so FTPL and W-FTPL of one trial share gamma.
std::unique_ptr<HostingPolicy> make_policy(const PolicySpec& spec, const HostingLadder& ladder,
                                           const CostParams& params, std::uint64_t trial_seed);

/// Runs the decide/observe loop over the arrivals.
RunRecord simulate(HostingPolicy& policy, const ArrivalSequence& arrivals,
                   const HostingLadder& ladder, const CostParams& params, std::uint64_t seed = 0);

}  // namespace edgehost
