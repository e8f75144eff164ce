#include "edgehost/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace edgehost {

namespace {

// Slack for comparisons against configured constants such as 0.5 + 0.45 <= 1.
constexpr double kTol = 1e-12;

}  // namespace

HostingLadder::HostingLadder(std::vector<HostingLevel> levels)
    : levels_(std::move(levels)), s_(levels_.size()), f_(levels_.size())
{
    if (levels_.empty())
        throw ModelError(Violation::LadderShape, "hosting ladder has no levels");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        s_(static_cast<Eigen::Index>(i)) = levels_[i].alpha;
        f_(static_cast<Eigen::Index>(i)) = levels_[i].g;
    }
}

HostingLadder HostingLadder::binary() { return HostingLadder({{0.0, 1.0}, {1.0, 0.0}}); }

std::string to_string(Violation v)
{
    switch (v) {
    case Violation::LadderShape:
        return "ladder shape (alpha_1 = 0, alpha_K = 1, strictly increasing)";
    case Violation::ServiceFactor:
        return "service factor (g(0) = 1, g strictly decreasing in [0, 1])";
    case Violation::RentWithinCap:
        return "Assumption 1 (c <= kappa)";
    case Violation::PartialHostingGain:
        return "Assumption 2 (alpha_i + g(alpha_i) <= 1)";
    case Violation::SlotCostWithinCap:
        return "Assumption 3 (c alpha_i + g(alpha_i) kappa <= kappa)";
    case Violation::FetchCost:
        return "fetch cost (M > 1)";
    case Violation::NegativeParameter:
        return "parameter range (c >= 0, kappa > 0)";
    }
    return "unknown";
}

ModelError::ModelError(Violation v, const std::string& detail)
    : std::invalid_argument(to_string(v) + ": " + detail), violation_(v)
{
}

std::optional<Violation> find_violation(const HostingLadder& ladder, const CostParams& p)
{
    const auto& lv = ladder.levels();
    if (lv.size() < 2 || lv.front().alpha != 0.0 || lv.back().alpha != 1.0)
        return Violation::LadderShape;
    for (std::size_t i = 1; i < lv.size(); ++i)
        if (!(lv[i].alpha > lv[i - 1].alpha)) return Violation::LadderShape;

    if (lv.front().g != 1.0) return Violation::ServiceFactor;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        if (lv[i].g < 0.0 || lv[i].g > 1.0) return Violation::ServiceFactor;
        if (i > 0 && !(lv[i].g < lv[i - 1].g)) return Violation::ServiceFactor;
    }

    if (!(p.c >= 0.0) || !(p.kappa > 0.0)) return Violation::NegativeParameter;
    if (p.c > p.kappa) return Violation::RentWithinCap;
    for (const auto& l : lv)
        if (l.alpha + l.g > 1.0 + kTol) return Violation::PartialHostingGain;
    for (const auto& l : lv)
        if (p.c * l.alpha + l.g * p.kappa > p.kappa + kTol) return Violation::SlotCostWithinCap;
    if (!(p.M > 1.0)) return Violation::FetchCost;
    return std::nullopt;
}

void validate(const HostingLadder& ladder, const CostParams& params)
{
    if (auto v = find_violation(ladder, params)) {
        std::ostringstream os;
        os << "c=" << params.c << " M=" << params.M << " kappa=" << params.kappa
           << " K=" << ladder.size();
        throw ModelError(*v, os.str());
    }
}

double ArrivalSequence::total() const
{
    return std::accumulate(requests.begin(), requests.end(), 0.0);
}

ArrivalSequence ArrivalSequence::prefix(std::size_t T) const
{
    if (T > requests.size())
        throw std::out_of_range("prefix longer than the arrival sequence");
    return {std::vector<double>(requests.begin(), requests.begin() + static_cast<std::ptrdiff_t>(T))};
}

void check_arrivals(const ArrivalSequence& arrivals, double kappa)
{
    for (std::size_t t = 0; t < arrivals.requests.size(); ++t) {
        const double r = arrivals.requests[t];
        if (!(r >= 0.0) || r > kappa) {
            std::ostringstream os;
            os << "arrivals at slot " << t + 1 << " = " << r << " outside [0, " << kappa << "]";
            throw std::invalid_argument(os.str());
        }
    }
}

CostBreakdown slot_cost(Level now, Level prev, double requests, const HostingLadder& ladder,
                        const CostParams& params)
{
    const double a_now = ladder.alpha(now);
    const double a_prev = ladder.alpha(prev);
    return {params.c * a_now, ladder.g(now) * requests, params.M * std::max(0.0, a_now - a_prev)};
}

CostBreakdown horizon_cost(const HostingSchedule& schedule, const ArrivalSequence& arrivals,
                           const HostingLadder& ladder, const CostParams& params)
{
    if (schedule.size() != arrivals.horizon())
        throw std::invalid_argument("schedule and arrivals differ in length");
    CostBreakdown total;
    Level prev = kNoHosting;
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        total += slot_cost(schedule[t], prev, arrivals.requests[t], ladder, params);
        prev = schedule[t];
    }
    return total;
}

std::size_t RunRecord::fetch_count() const
{
    std::size_t n = 0;
    Level prev = kNoHosting;
    for (Level l : schedule) {
        if (l > prev) ++n;
        prev = l;
    }
    return n;
}

RunRecord make_run_record(HostingSchedule schedule, const ArrivalSequence& arrivals,
                          const HostingLadder& ladder, const CostParams& params, std::uint64_t seed)
{
    if (schedule.size() != arrivals.horizon())
        throw std::invalid_argument("schedule and arrivals differ in length");
    RunRecord run;
    run.seed = seed;
    run.per_slot.reserve(schedule.size());
    Level prev = kNoHosting;
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        run.per_slot.push_back(slot_cost(schedule[t], prev, arrivals.requests[t], ladder, params));
        run.cumulative += run.per_slot.back();
        prev = schedule[t];
    }
    run.schedule = std::move(schedule);
    return run;
}

}  // namespace edgehost
