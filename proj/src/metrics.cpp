#include "edgehost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "edgehost/oracles.hpp"

namespace edgehost {

ArrivalStats arrival_stats(double mu, const HostingLadder& ladder, const CostParams& params)
{
    ArrivalStats st;
    st.mu = mu;
    st.mu_i = params.c * ladder.rent_profile() + mu * ladder.service_profile();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < st.mu_i.size(); ++i)
        if (st.mu_i(i) < st.mu_i(best)) best = i;
    st.i_star = static_cast<Level>(best);
    st.delta = st.mu_i.array() - st.mu_i(best);
    st.delta_max = st.delta.maxCoeff();
    st.delta_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < st.delta.size(); ++i)
        if (i != best) st.delta_min = std::min(st.delta_min, st.delta(i));
    if (st.delta.size() < 2) st.delta_min = 0.0;
    return st;
}

double regret_adversarial(const RunRecord& run, const ArrivalSequence& arrivals,
                          const HostingLadder& ladder, const CostParams& params)
{
    return run.cumulative.total() - optimal_static_realized(arrivals, ladder, params).cost;
}

double regret_stochastic(double mean_cost, double mu, std::size_t T, const HostingLadder& ladder,
                         const CostParams& params)
{
    return mean_cost - optimal_static_stochastic(mu, T, ladder, params).cost;
}

double expected_schedule_cost(const HostingSchedule& schedule, double mu,
                              const HostingLadder& ladder, const CostParams& params)
{
    double total = 0.0;
    Level prev = kNoHosting;
    for (Level l : schedule) {
        total += params.c * ladder.alpha(l) + ladder.g(l) * mu +
                 params.M * std::max(0.0, ladder.alpha(l) - ladder.alpha(prev));
        prev = l;
    }
    return total;
}

std::optional<double> competitive_ratio(double run_cost, const ArrivalSequence& arrivals,
                                        const HostingLadder& ladder, const CostParams& params,
                                        RatioMode mode, std::optional<double> mu)
{
    double denom = 0.0;
    if (mode == RatioMode::Adversarial) {
        denom = offline_optimal_dp(arrivals, ladder, params).cost;
    } else {
        if (!mu) throw std::invalid_argument("stochastic competitive ratio needs mu");
        denom = optimal_static_stochastic(*mu, arrivals.horizon(), ladder, params).cost;
    }
    if (denom == 0.0) return std::nullopt;
    return run_cost / denom;
}

std::string to_string(BoundKind kind)
{
    switch (kind) {
    case BoundKind::FtplAdv: return "ftpl-adv";
    case BoundKind::WftplAdv: return "wftpl-adv";
    case BoundKind::FtplStoch: return "ftpl-stoch";
    case BoundKind::WftplStoch: return "wftpl-stoch";
    case BoundKind::FtplCr: return "ftpl-cr";
    case BoundKind::WftplCr: return "wftpl-cr";
    case BoundKind::AdvLowerFtpl: return "adv-lower-ftpl";
    }
    return "unknown";
}

BoundKind parse_bound_kind(const std::string& name)
{
    for (auto k : {BoundKind::FtplAdv, BoundKind::WftplAdv, BoundKind::FtplStoch,
                   BoundKind::WftplStoch, BoundKind::FtplCr, BoundKind::WftplCr,
                   BoundKind::AdvLowerFtpl})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown bound: " + name);
}

namespace {

class SymbolTable {
public:
    explicit SymbolTable(const BoundInputs& in) : in_(in) {}

    double get(const char* name, const std::optional<double>& v)
    {
        if (!v) throw MissingSymbol(name);
        record(name, *v);
        return *v;
    }

    const HostingLadder& ladder()
    {
        if (!in_.ladder) throw MissingSymbol("ladder");
        return *in_.ladder;
    }

    double K()
    {
        if (in_.K) return get("K", in_.K);
        if (!in_.ladder) throw MissingSymbol("K");
        const double k = static_cast<double>(in_.ladder->size());
        record("K", k);
        return k;
    }

    double alpha2()
    {
        if (in_.alpha2) return get("alpha2", in_.alpha2);
        if (!in_.ladder) throw MissingSymbol("alpha2");
        record("alpha2", in_.ladder->alpha(1));
        return in_.ladder->alpha(1);
    }

    // delta_min / delta_max, directly or from mu and the ladder.
    std::pair<double, double> gaps(bool need_max)
    {
        std::optional<double> dmin = in_.delta_min, dmax = in_.delta_max;
        if ((!dmin || (need_max && !dmax)) && in_.mu && in_.ladder && in_.c) {
            CostParams p;
            p.c = *in_.c;
            const auto st = arrival_stats(*in_.mu, *in_.ladder, p);
            if (!dmin) dmin = st.delta_min;
            if (!dmax) dmax = st.delta_max;
        }
        const double lo = get("delta_min", dmin);
        if (lo == 0.0)
            throw std::domain_error("stochastic bounds assume delta_min != 0 (Δ_min ≠ 0)");
        const double hi = need_max ? get("delta_max", dmax) : 0.0;
        return {lo, hi};
    }

    std::vector<std::pair<std::string, double>> take() { return std::move(used_); }

private:
    void record(const std::string& name, double v)
    {
        for (const auto& [n, _] : used_)
            if (n == name) return;
        used_.emplace_back(name, v);
    }

    const BoundInputs& in_;
    std::vector<std::pair<std::string, double>> used_;
};

// (sqrt(2 ln K) + 2 sqrt(2 h1) ln K / delta_min)(alpha + 4 kappa^2 / alpha)
double perturbation_term(double K, double alpha, double kappa, double delta_min)
{
    const double h1 = 4.0 * std::max(8.0 * alpha * alpha, kappa * kappa);
    const double lnK = std::log(K);
    return (std::sqrt(2.0 * lnK) + 2.0 * std::sqrt(2.0 * h1) * lnK / delta_min) *
           (alpha + 4.0 * kappa * kappa / alpha);
}

}  // namespace

BoundValue theoretical_bound(BoundKind kind, const BoundInputs& in)
{
    SymbolTable s(in);
    BoundValue out;

    auto ftpl_adv = [&] {
        const double T = s.get("T", in.T);
        const double K = s.K();
        const double alpha = s.get("alpha", in.alpha);
        const double kappa = s.get("kappa", in.kappa);
        const double M = s.get("M", in.M);
        const double c = s.get("c", in.c);
        return std::sqrt(2.0 * T * std::log(K)) * (alpha + 4.0 * kappa * kappa / alpha) +
               K * K * M * (c + 2.0 * kappa) / (2.0 * alpha * std::sqrt(std::numbers::pi)) *
                   std::sqrt(T + 1.0);
    };

    // Competitive-ratio terms shared by FTPL and W-FTPL; also returns min_i(c alpha_i + g kappa).
    auto ratio_terms = [&](double& min_slot) {
        const auto& ladder = s.ladder();
        const double kappa = s.get("kappa", in.kappa);
        const double M = s.get("M", in.M);
        const double c = s.get("c", in.c);
        const double alpha = s.get("alpha", in.alpha);
        min_slot = std::numeric_limits<double>::infinity();
        double max_gain = 0.0, perturb = 0.0;
        for (Level i = 0; i < ladder.size(); ++i) {
            const double a = ladder.alpha(i), g = ladder.g(i);
            min_slot = std::min(min_slot, c * a + g * kappa);
            if (a != 0.0) {
                max_gain = std::max(max_gain, (1.0 - g) / a);
                perturb += 16.0 * alpha * alpha / (c * c * a * a);
            }
        }
        const double k2 = kappa * kappa;
        return k2 * (3.0 + 2.0 * M / c) / min_slot * max_gain + k2 * (M + c) / min_slot * perturb;
    };

    switch (kind) {
    case BoundKind::FtplAdv:
        out.value = ftpl_adv();
        break;
    case BoundKind::WftplAdv: {
        const double base = ftpl_adv();
        const double beta = s.get("beta", in.beta);
        const double delta = s.get("delta", in.delta);
        const double T = *in.T, M = *in.M, kappa = *in.kappa;
        out.value = base + kappa * std::sqrt(beta * T * std::pow(std::log(M), 1.0 + delta));
        break;
    }
    case BoundKind::FtplStoch: {
        const double K = s.K();
        const double alpha = s.get("alpha", in.alpha);
        const double kappa = s.get("kappa", in.kappa);
        const double M = s.get("M", in.M);
        const auto [dmin, _] = s.gaps(false);
        const double a2 = alpha * alpha, k2 = kappa * kappa;
        out.value = perturbation_term(K, alpha, kappa, dmin) + (16.0 * a2 + 4.0 * k2) / dmin +
                    (16.0 * a2 + 3.0 * k2) * M / (dmin * dmin);
        break;
    }
    case BoundKind::WftplStoch: {
        const double K = s.K();
        const double alpha = s.get("alpha", in.alpha);
        const double kappa = s.get("kappa", in.kappa);
        const double M = s.get("M", in.M);
        const double beta = s.get("beta", in.beta);
        const double delta = s.get("delta", in.delta);
        const auto [dmin, dmax] = s.gaps(true);
        const double a2 = alpha * alpha, k2 = kappa * kappa, d2 = dmin * dmin;
        out.value = 1.0 +
                    beta * k2 * std::pow(std::log(M), 1.0 + delta) *
                        (4.0 / d2 + (16.0 * a2 + 3.0 * k2) / (d2 * dmax * dmax)) +
                    (16.0 * a2 + 4.0 * k2) * (1.0 / dmin + 1.0 / d2) +
                    perturbation_term(K, alpha, kappa, dmin);
        break;
    }
    case BoundKind::FtplCr: {
        double min_slot = 0.0;
        out.value = ratio_terms(min_slot);
        break;
    }
    case BoundKind::WftplCr: {
        double min_slot = 0.0;
        out.value = ratio_terms(min_slot);
        out.value += (*in.kappa) * (*in.kappa) / min_slot;
        break;
    }
    case BoundKind::AdvLowerFtpl: {
        const double M = s.get("M", in.M);
        const double a2 = s.alpha2();
        const double K = s.K();
        out.value = M * a2 / K;
        break;
    }
    }
    out.symbols = s.take();
    return out;
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    s.n = values.size();
    if (s.n == 0) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / static_cast<double>(s.n - 1)) / std::sqrt(static_cast<double>(s.n));
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(s.n - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, s.n - 1);
        return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    s.p10 = quantile(0.1);
    s.p90 = quantile(0.9);
    return s;
}

}  // namespace edgehost
