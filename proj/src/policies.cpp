#include "edgehost/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgehost {

namespace {

// Relative slack under which two hindsight costs count as equal.
constexpr double kTieTol = 1e-9;

bool no_worse(double candidate, double reference)
{
    return candidate <= reference + kTieTol * std::max(1.0, std::abs(reference));
}

Level argmin_lowest(const Eigen::VectorXd& v)
{
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (v(i) < v(best)) best = i;
    return static_cast<Level>(best);
}

void require_fetch_above_one(const CostParams& params)
{
    if (!(params.M > 1.0))
        throw std::invalid_argument("W-FTPL needs M > 1 so that ln M > 0");
}

}  // namespace

FtplState make_ftpl_state(std::size_t K, double eta_scale, EtaSchedule schedule, Rng& rng)
{
    FtplState s;
    s.theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    s.gamma.resize(static_cast<Eigen::Index>(K));
    for (Eigen::Index i = 0; i < s.gamma.size(); ++i) s.gamma(i) = rng.normal();
    s.eta_scale = eta_scale;
    s.eta_schedule = schedule;
    return s;
}

double learning_rate(const FtplState& state, std::size_t t)
{
    const double steps = state.eta_schedule == EtaSchedule::SqrtT ? static_cast<double>(t)
                                                                  : static_cast<double>(t) - 1.0;
    return state.eta_scale * std::sqrt(std::max(0.0, steps));
}

Level ftpl_decide(const FtplState& state, std::size_t t)
{
    const double eta = learning_rate(state, t);
    if (eta == 0.0) return argmin_lowest(state.theta);
    return argmin_lowest(state.theta + eta * state.gamma);
}

void ftpl_observe(FtplState& state, double requests, const HostingLadder& ladder,
                  const CostParams& params)
{
    state.theta += params.c * ladder.rent_profile() + requests * ladder.service_profile();
}

WftplState make_wftpl_state(std::size_t K, double eta_scale, EtaSchedule schedule, double beta,
                            double delta, Rng& rng)
{
    WftplState s;
    s.inner = make_ftpl_state(K, eta_scale, schedule, rng);
    s.beta = beta;
    s.delta = delta;
    return s;
}

Level wftpl_decide(const WftplState& state, std::size_t t)
{
    return state.waiting ? kNoHosting : ftpl_decide(state.inner, t);
}

void wftpl_observe(WftplState& state, std::size_t t, double requests, const HostingLadder& ladder,
                   const CostParams& params)
{
    require_fetch_above_one(params);
    ftpl_observe(state.inner, requests, ladder, params);
    if (!state.waiting) return;

    const double spread = state.inner.theta.maxCoeff() - state.inner.theta.minCoeff();
    const double scale = params.kappa * params.kappa * state.beta *
                         std::pow(std::log(params.M), 1.0 + state.delta);
    if (static_cast<double>(t) < spread * spread / scale) {
        state.waiting = false;
        state.wait_end = t;
    }
}

Level wftpl_step(WftplState& state, std::size_t t, double requests, const HostingLadder& ladder,
                 const CostParams& params)
{
    const Level level = wftpl_decide(state, t);
    wftpl_observe(state, t, requests, ladder, params);
    return level;
}

AlphaRrState make_alpha_rr_state(const HostingLadder& ladder)
{
    AlphaRrState s;
    s.best_hold_gain.assign(ladder.size(), std::numeric_limits<double>::infinity());
    return s;
}

std::vector<double> alpha_rr_min_costs(const AlphaRrState& state, const HostingLadder& ladder,
                                       const CostParams& params)
{
    const double L = static_cast<double>(state.window.size());
    const Level cur = state.current_level;
    std::vector<double> cost(ladder.size());
    for (Level v = 0; v < ladder.size(); ++v) {
        const double held = L * params.c * ladder.alpha(v) + ladder.g(v) * state.window_requests;
        if (v == cur) {
            cost[v] = held;
        } else {
            cost[v] = state.best_hold_gain[v] + held +
                      params.M * std::abs(ladder.alpha(v) - ladder.alpha(cur));
        }
    }
    return cost;
}

Level alpha_rr_step(AlphaRrState& state, std::size_t t, double requests,
                    const HostingLadder& ladder, const CostParams& params)
{
    if (ladder.size() > 3)
        throw std::invalid_argument("alpha-RR supports at most one partial hosting level");

    // Hold length k = L - 1 becomes admissible once slot t joins the window.
    const Level cur = state.current_level;
    const double k = static_cast<double>(state.window.size());
    for (Level v = 0; v < ladder.size(); ++v) {
        if (v == cur) continue;
        const double gain = k * params.c * (ladder.alpha(cur) - ladder.alpha(v)) +
                            (ladder.g(cur) - ladder.g(v)) * state.window_requests;
        state.best_hold_gain[v] = std::min(state.best_hold_gain[v], gain);
    }
    state.window.push_back(requests);
    state.window_requests += requests;

    const auto cost = alpha_rr_min_costs(state, ladder, params);
    Level best = cur;
    for (Level v = 0; v < ladder.size(); ++v) {
        if (v == cur) continue;
        if (best == cur || cost[v] < cost[best]) best = v;
    }
    if (best == cur || !no_worse(cost[best], cost[cur])) return cur;

    state.current_level = best;
    state.t_recent = t;
    state.window.clear();
    state.window_requests = 0.0;
    state.best_hold_gain.assign(ladder.size(), std::numeric_limits<double>::infinity());
    return best;
}

FtplPolicy::FtplPolicy(HostingLadder ladder, CostParams params, FtplState state)
    : ladder_(std::move(ladder)), params_(params), state_(std::move(state))
{
}

void FtplPolicy::observe(std::size_t, double requests)
{
    ftpl_observe(state_, requests, ladder_, params_);
}

WftplPolicy::WftplPolicy(HostingLadder ladder, CostParams params, WftplState state)
    : ladder_(std::move(ladder)), params_(params), state_(std::move(state))
{
    require_fetch_above_one(params_);
}

void WftplPolicy::observe(std::size_t t, double requests)
{
    wftpl_observe(state_, t, requests, ladder_, params_);
}

AlphaRetroRenting::AlphaRetroRenting(HostingLadder ladder, CostParams params)
    : ladder_(std::move(ladder)), params_(params), state_(make_alpha_rr_state(ladder_))
{
    if (ladder_.size() > 3)
        throw std::invalid_argument("alpha-RR supports at most one partial hosting level");
}

void AlphaRetroRenting::observe(std::size_t t, double requests)
{
    alpha_rr_step(state_, t, requests, ladder_, params_);
}

std::unique_ptr<HostingPolicy> static_policy(Level level)
{
    return std::make_unique<StaticPolicy>(level);
}

std::unique_ptr<HostingPolicy> make_policy(const PolicySpec& spec, const HostingLadder& ladder,
                                           const CostParams& params, std::uint64_t trial_seed)
{
    switch (spec.kind) {
    case PolicyKind::Static:
        if (spec.level >= ladder.size())
            throw std::invalid_argument("static policy level outside the ladder");
        return static_policy(spec.level);
    case PolicyKind::Ftpl: {
        Rng rng(trial_seed, Stream::Perturbation);
        return std::make_unique<FtplPolicy>(
            ladder, params, make_ftpl_state(ladder.size(), spec.eta_scale, spec.eta_schedule, rng));
    }
    case PolicyKind::Wftpl: {
        Rng rng(trial_seed, Stream::Perturbation);
        return std::make_unique<WftplPolicy>(
            ladder, params,
            make_wftpl_state(ladder.size(), spec.eta_scale, spec.eta_schedule, spec.beta,
                             spec.delta, rng));
    }
    case PolicyKind::AlphaRr:
        return std::make_unique<AlphaRetroRenting>(ladder, params);
    }
    throw std::invalid_argument("unknown policy kind");
}

RunRecord simulate(HostingPolicy& policy, const ArrivalSequence& arrivals,
                   const HostingLadder& ladder, const CostParams& params, std::uint64_t seed)
{
    HostingSchedule schedule;
    schedule.reserve(arrivals.horizon());
    for (std::size_t t = 1; t <= arrivals.horizon(); ++t) {
        schedule.push_back(policy.decide(t));
        policy.observe(t, arrivals.requests[t - 1]);
    }
    return make_run_record(std::move(schedule), arrivals, ladder, params, seed);
}

}  // namespace edgehost
