#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgehost/arrivals.hpp"
#include "edgehost/metrics.hpp"
#include "edgehost/model.hpp"
#include "edgehost/policies.hpp"

namespace edgehost {

/// Invalid experiment description; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output; the CLI maps it to exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ArrivalKind { IidBernoulli, IidDiscrete, AdversarialFrames, StochasticLowerBound, Trace };

struct ArrivalSpec {
    ArrivalKind kind = ArrivalKind::IidBernoulli;
    double mu = 0.0;                   // iid-bernoulli
    std::vector<double> values, probs; // iid-discrete
    std::size_t n_frames = 0;          // adversarial-frames
    FrameMode mode = FrameMode::Full;
    std::filesystem::path trace;       // trace
    ClipPolicy clip = ClipPolicy::Clip;
};

struct ExperimentConfig {
    std::string name;
    HostingLadder ladder;
    double kappa = 1.0;
    std::vector<double> c_values;
    std::vector<double> M_values;
    ArrivalSpec arrivals;
    std::vector<PolicySpec> policies;
    std::vector<std::size_t> horizons;  ///< empty: whole generated sequence (frames, trace)
    std::size_t trials = 1;
    std::uint64_t base_seed = 0;
    std::filesystem::path output_dir = "results";
};

/// Parses and validates a config; relative trace paths resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Arrival mean when the arrival process is i.i.d. with a known mean.
std::optional<double> known_mean(const ArrivalSpec& spec, const CostParams& params,
                                 const HostingLadder& ladder);

/// Arrivals for one (sweep point, trial); shared by all policies of that trial.
ArrivalSequence generate_arrivals(const ArrivalSpec& spec, const CostParams& params,
                                  const HostingLadder& ladder, std::optional<std::size_t> T,
                                  std::uint64_t seed);

struct TrialSummary {
    std::string policy;
    std::size_t T = 0;
    double M = 0.0;
    double c = 0.0;
    std::string mu_or_trace;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t arrival_checksum = 0;

    CostBreakdown cost;
    double static_realized = 0.0;
    std::optional<double> static_stochastic;
    double offline_opt = 0.0;

    std::optional<double> regret_stoch;
    double regret_adv = 0.0;
    std::optional<double> cr_adv;
    std::optional<double> cr_stoch;
    /// Cost expected from the chosen schedule given the known arrival mean.
    std::optional<double> expected_cost;

    std::optional<std::size_t> wait_end;
    std::size_t fetch_count = 0;
};

struct AggregateRow {
    std::string policy;
    std::size_t T = 0;
    double M = 0.0;
    double c = 0.0;
    std::string mu_or_trace;
    std::size_t trials = 0;
    Summary cost, rent, service, fetch;
    std::optional<Summary> regret_stoch;
    Summary regret_adv;
    std::optional<Summary> cr_adv;
    Summary fetch_count;
    std::optional<Summary> wait_end;
};

struct ExperimentResult {
    std::string name;
    std::vector<TrialSummary> trials;    ///< ordered by (sweep point, policy, trial)
    std::vector<AggregateRow> aggregate; ///< ordered by (sweep point, policy)
};

/// Runs every sweep point x policy x trial. Trial seed = base_seed XOR trial.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Folds per-trial rows into aggregate rows, grouping consecutive rows.
std::vector<AggregateRow> aggregate(const std::vector<TrialSummary>& trials);

/// Writes <name>_trials.csv and <name>_aggregate.csv; returns their paths.
std::vector<std::filesystem::path> write_results(const ExperimentResult& result,
                                                 const std::filesystem::path& dir);

std::string trials_csv(const ExperimentResult& result);
std::string aggregate_csv(const ExperimentResult& result);

/// 9 significant digits; empty for undefined values.
std::string format_number(std::optional<double> value);

}  // namespace edgehost
