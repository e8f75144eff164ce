#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace edgehost {

/// Index into a HostingLadder. Level 0 is always the cloud-only level (alpha = 0).
using Level = std::size_t;

inline constexpr Level kNoHosting = 0;

struct HostingLevel {
    double alpha;  ///< fraction of the service stored at the edge
    double g;      ///< fraction of each request still forwarded to the cloud
};

/// The K admissible hosting fractions with their service-cost factors.
///
/// Construction only checks that the ladder is non-empty; everything else is
/// reported by validate() so that a config can be diagnosed in one place.
class HostingLadder {
public:
    HostingLadder() = default;
    explicit HostingLadder(std::vector<HostingLevel> levels);

    /// {0 : 1, 1 : 0}, the fetch-everything-or-nothing ladder.
    static HostingLadder binary();

    std::size_t size() const { return levels_.size(); }
    Level full() const { return levels_.size() - 1; }

    double alpha(Level i) const { return levels_.at(i).alpha; }
    double g(Level i) const { return levels_.at(i).g; }
    const std::vector<HostingLevel>& levels() const { return levels_; }

    /// s = [0, alpha_2, ..., 1]
    const Eigen::VectorXd& rent_profile() const { return s_; }
    /// f = [1, g(alpha_2), ..., 0]
    const Eigen::VectorXd& service_profile() const { return f_; }

private:
    std::vector<HostingLevel> levels_;
    Eigen::VectorXd s_;
    Eigen::VectorXd f_;
};

struct CostParams {
    double c = 0.0;      ///< rent per slot for the full service
    double M = 0.0;      ///< fetch cost for the full service
    double kappa = 1.0;  ///< max requests per slot
};

enum class Violation {
    LadderShape,        // alpha_1 = 0, alpha_K = 1, strictly increasing
    ServiceFactor,      // g(0) = 1, g strictly decreasing, g in [0, 1]
    RentWithinCap,      // Assumption 1: c <= kappa
    PartialHostingGain, // Assumption 2: alpha_i + g(alpha_i) <= 1
    SlotCostWithinCap,  // Assumption 3: c alpha_i + g(alpha_i) kappa <= kappa
    FetchCost,          // M > 1
    NegativeParameter,  // c >= 0, kappa > 0
};

std::string to_string(Violation v);

class ModelError : public std::invalid_argument {
public:
    ModelError(Violation v, const std::string& detail);
    Violation violation() const { return violation_; }

private:
    Violation violation_;
};

/// First violated invariant, checked in a fixed order, or nullopt.
std::optional<Violation> find_violation(const HostingLadder& ladder, const CostParams& params);

/// Throws ModelError naming the violated assumption.
void validate(const HostingLadder& ladder, const CostParams& params);

struct ArrivalSequence {
    std::vector<double> requests;

    std::size_t horizon() const { return requests.size(); }
    double total() const;
    /// Arrivals of slots 1..T (T <= horizon()).
    ArrivalSequence prefix(std::size_t T) const;
};

/// Throws std::invalid_argument unless 0 <= r_t <= kappa for every slot.
void check_arrivals(const ArrivalSequence& arrivals, double kappa);

/// Level per slot; slot 0 is implicitly kNoHosting.
using HostingSchedule = std::vector<Level>;

struct CostBreakdown {
    double rent = 0.0;
    double service = 0.0;
    double fetch = 0.0;

    double total() const { return rent + service + fetch; }

    CostBreakdown& operator+=(const CostBreakdown& o)
    {
        rent += o.rent;
        service += o.service;
        fetch += o.fetch;
        return *this;
    }
};

inline CostBreakdown operator+(CostBreakdown a, const CostBreakdown& b) { return a += b; }

/// c alpha(now) + g(now) r + M (alpha(now) - alpha(prev))^+
CostBreakdown slot_cost(Level now, Level prev, double requests, const HostingLadder& ladder,
                        const CostParams& params);

/// Sum of slot_cost over the schedule, starting from kNoHosting.
CostBreakdown horizon_cost(const HostingSchedule& schedule, const ArrivalSequence& arrivals,
                           const HostingLadder& ladder, const CostParams& params);

struct RunRecord {
    HostingSchedule schedule;
    std::vector<CostBreakdown> per_slot;
    CostBreakdown cumulative;
    std::uint64_t seed = 0;

    /// Number of slots with an upward level move.
    std::size_t fetch_count() const;
};

RunRecord make_run_record(HostingSchedule schedule, const ArrivalSequence& arrivals,
                          const HostingLadder& ladder, const CostParams& params, std::uint64_t seed);

}  // namespace edgehost
