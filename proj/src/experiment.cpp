#include "edgehost/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "edgehost/oracles.hpp"
#include "edgehost/rng.hpp"

namespace edgehost {

using nlohmann::json;

namespace {

std::vector<double> number_or_list(const json& doc, const char* key)
{
    if (!doc.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    const json& v = doc.at(key);
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError(std::string("'") + key + "' must hold numbers");
            out.push_back(x.get<double>());
        }
    } else {
        throw ConfigError(std::string("'") + key + "' must be a number or a list of numbers");
    }
    if (out.empty()) throw ConfigError(std::string("sweep list '") + key + "' is empty");
    return out;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

HostingLadder parse_ladder(const json& doc)
{
    if (!doc.is_array() || doc.empty()) throw ConfigError("'ladder' must be a non-empty list");
    std::vector<HostingLevel> levels;
    for (const auto& l : doc) {
        if (!l.is_object() || !l.contains("alpha") || !l.contains("g"))
            throw ConfigError("each ladder level needs 'alpha' and 'g'");
        check_keys(l, {"alpha", "g"}, "ladder level");
        levels.push_back({l.at("alpha").get<double>(), l.at("g").get<double>()});
    }
    return HostingLadder(std::move(levels));
}

ArrivalSpec parse_arrivals(const json& doc, const std::filesystem::path& base_dir)
{
    if (!doc.is_object() || !doc.contains("kind"))
        throw ConfigError("'arrivals' must be an object with a 'kind'");
    ArrivalSpec spec;
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "iid-bernoulli") {
        check_keys(doc, {"kind", "mu"}, "arrivals");
        spec.kind = ArrivalKind::IidBernoulli;
        if (!doc.contains("mu")) throw ConfigError("iid-bernoulli arrivals need 'mu'");
        spec.mu = doc.at("mu").get<double>();
        if (!(spec.mu > 0.0)) throw ConfigError("arrival mean must be positive (Assumption 4: mu > 0)");
    } else if (kind == "iid-discrete") {
        check_keys(doc, {"kind", "values", "probs"}, "arrivals");
        spec.kind = ArrivalKind::IidDiscrete;
        spec.values = doc.at("values").get<std::vector<double>>();
        spec.probs = doc.at("probs").get<std::vector<double>>();
    } else if (kind == "adversarial-frames") {
        check_keys(doc, {"kind", "n_frames", "mode"}, "arrivals");
        spec.kind = ArrivalKind::AdversarialFrames;
        spec.n_frames = doc.at("n_frames").get<std::size_t>();
        const auto mode = doc.value("mode", std::string("full"));
        if (mode == "full")
            spec.mode = FrameMode::Full;
        else if (mode == "partial")
            spec.mode = FrameMode::Partial;
        else
            throw ConfigError("frame mode must be 'full' or 'partial'");
    } else if (kind == "stochastic-lower-bound") {
        check_keys(doc, {"kind"}, "arrivals");
        spec.kind = ArrivalKind::StochasticLowerBound;
    } else if (kind == "trace") {
        check_keys(doc, {"kind", "path", "clip"}, "arrivals");
        spec.kind = ArrivalKind::Trace;
        spec.trace = doc.at("path").get<std::string>();
        if (spec.trace.is_relative() && !base_dir.empty()) spec.trace = base_dir / spec.trace;
        const auto clip = doc.value("clip", std::string("clip"));
        if (clip == "clip")
            spec.clip = ClipPolicy::Clip;
        else if (clip == "reject")
            spec.clip = ClipPolicy::Reject;
        else
            throw ConfigError("trace clip policy must be 'clip' or 'reject'");
    } else {
        throw ConfigError("unknown arrival kind '" + kind + "'");
    }
    return spec;
}

PolicySpec parse_policy(const json& doc)
{
    if (!doc.is_object() || !doc.contains("type")) throw ConfigError("each policy needs a 'type'");
    check_keys(doc, {"type", "name", "level", "alpha", "eta", "beta", "delta"}, "policy");
    PolicySpec p;
    const auto type = doc.at("type").get<std::string>();
    if (type == "static") {
        p.kind = PolicyKind::Static;
        p.level = doc.value("level", std::size_t{0});
        p.name = "static-" + std::to_string(p.level);
    } else if (type == "ftpl") {
        p.kind = PolicyKind::Ftpl;
        p.name = "FTPL";
    } else if (type == "wftpl") {
        p.kind = PolicyKind::Wftpl;
        p.name = "W-FTPL";
    } else if (type == "alpha-rr") {
        p.kind = PolicyKind::AlphaRr;
        p.name = "RR";
    } else {
        throw ConfigError("unknown policy type '" + type + "'");
    }
    p.name = doc.value("name", p.name);
    p.eta_scale = doc.value("alpha", 0.1);
    const auto eta = doc.value("eta", std::string("sqrt_t"));
    if (eta == "sqrt_t")
        p.eta_schedule = EtaSchedule::SqrtT;
    else if (eta == "sqrt_t_minus_1")
        p.eta_schedule = EtaSchedule::SqrtTMinusOne;
    else
        throw ConfigError("eta must be 'sqrt_t' or 'sqrt_t_minus_1'");
    p.beta = doc.value("beta", 6.0);
    p.delta = doc.value("delta", 0.0);
    if (!(p.eta_scale > 0.0)) throw ConfigError("policy alpha must be positive");
    if (p.kind == PolicyKind::Wftpl && (!(p.beta > 1.0) || p.delta < 0.0))
        throw ConfigError("W-FTPL needs beta > 1 and delta >= 0");
    return p;
}

std::string mean_label(double mu)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", mu);
    return buf;
}

std::string arrival_label(const ArrivalSpec& spec, std::optional<double> mu)
{
    if (mu) return mean_label(*mu);
    if (spec.kind == ArrivalKind::Trace) return spec.trace.filename().string();
    return spec.mode == FrameMode::Full ? "frames-full" : "frames-partial";
}

std::string hex64(std::uint64_t v)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir)
{
    try {
        if (!doc.is_object()) throw ConfigError("config must be a JSON object");
        check_keys(doc,
                   {"name", "ladder", "c", "M", "kappa", "arrivals", "policies", "T", "trials",
                    "seed", "output_dir"},
                   "config");
        ExperimentConfig cfg;
        cfg.name = doc.value("name", std::string("experiment"));
        if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos)
            throw ConfigError("'name' must be a non-empty file-name-safe string");
        if (!doc.contains("ladder")) throw ConfigError("missing key 'ladder'");
        cfg.ladder = parse_ladder(doc.at("ladder"));
        if (!doc.contains("kappa")) throw ConfigError("missing key 'kappa'");
        cfg.kappa = doc.at("kappa").get<double>();
        cfg.c_values = number_or_list(doc, "c");
        cfg.M_values = number_or_list(doc, "M");
        if (!doc.contains("arrivals")) throw ConfigError("missing key 'arrivals'");
        cfg.arrivals = parse_arrivals(doc.at("arrivals"), base_dir);
        if (!doc.contains("policies") || !doc.at("policies").is_array() ||
            doc.at("policies").empty())
            throw ConfigError("'policies' must be a non-empty list");
        for (const auto& p : doc.at("policies")) cfg.policies.push_back(parse_policy(p));
        std::set<std::string> names;
        for (const auto& p : cfg.policies)
            if (!names.insert(p.name).second) throw ConfigError("duplicate policy name " + p.name);

        if (doc.contains("T")) {
            for (double T : number_or_list(doc, "T")) {
                if (!(T >= 1.0) || T != std::floor(T))
                    throw ConfigError("horizons must be positive integers");
                cfg.horizons.push_back(static_cast<std::size_t>(T));
            }
        } else if (cfg.arrivals.kind != ArrivalKind::AdversarialFrames &&
                   cfg.arrivals.kind != ArrivalKind::Trace) {
            throw ConfigError("missing key 'T' (required for generated i.i.d. arrivals)");
        }
        cfg.trials = doc.value("trials", std::size_t{1});
        if (cfg.trials == 0) throw ConfigError("'trials' must be positive");
        cfg.base_seed = doc.value("seed", std::uint64_t{0});
        cfg.output_dir = doc.value("output_dir", std::string("results"));

        for (double M : cfg.M_values) {
            for (double c : cfg.c_values) {
                const CostParams params{c, M, cfg.kappa};
                validate(cfg.ladder, params);
                for (const auto& p : cfg.policies) {
                    if (p.kind == PolicyKind::AlphaRr && cfg.ladder.size() > 3)
                        throw ConfigError("alpha-RR supports at most one partial hosting level");
                    if (p.kind == PolicyKind::Static && p.level >= cfg.ladder.size())
                        throw ConfigError("static policy level outside the ladder");
                }
                if (auto mu = known_mean(cfg.arrivals, params, cfg.ladder); mu && *mu > cfg.kappa)
                    throw ConfigError("arrival mean exceeds kappa");
            }
        }
        return cfg;
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

std::optional<double> known_mean(const ArrivalSpec& spec, const CostParams& params,
                                 const HostingLadder& ladder)
{
    switch (spec.kind) {
    case ArrivalKind::IidBernoulli:
        return spec.mu;
    case ArrivalKind::IidDiscrete: {
        double mu = 0.0;
        for (std::size_t i = 0; i < spec.values.size() && i < spec.probs.size(); ++i)
            mu += spec.values[i] * spec.probs[i];
        return mu;
    }
    case ArrivalKind::StochasticLowerBound:
        return params.kappa * lower_bound_probability(params, ladder);
    case ArrivalKind::AdversarialFrames:
    case ArrivalKind::Trace:
        return std::nullopt;
    }
    return std::nullopt;
}

ArrivalSequence generate_arrivals(const ArrivalSpec& spec, const CostParams& params,
                                  const HostingLadder& ladder, std::optional<std::size_t> T,
                                  std::uint64_t seed)
{
    auto need_T = [&] {
        if (!T) throw ConfigError("a horizon T is required for generated arrivals");
        return *T;
    };
    auto truncate = [&](ArrivalSequence full) {
        if (!T) return full;
        if (*T > full.horizon())
            throw ConfigError("horizon " + std::to_string(*T) + " exceeds the " +
                              std::to_string(full.horizon()) + " available slots");
        return full.prefix(*T);
    };

    switch (spec.kind) {
    case ArrivalKind::IidBernoulli:
        return gen_iid_bernoulli(spec.mu, params.kappa, need_T(), seed);
    case ArrivalKind::IidDiscrete:
        return gen_iid_discrete(spec.values, spec.probs, params.kappa, need_T(), seed);
    case ArrivalKind::StochasticLowerBound:
        return gen_stochastic_lower_bound(params, ladder, need_T(), seed);
    case ArrivalKind::AdversarialFrames:
        return truncate(gen_adversarial_frames(params, ladder, spec.n_frames, spec.mode));
    case ArrivalKind::Trace: {
        try {
            return truncate(load_trace(spec.trace, params.kappa, spec.clip).arrivals);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::runtime_error& e) {
            throw IoError(e.what());
        }
    }
    }
    throw ConfigError("unknown arrival kind");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    ExperimentResult result;
    result.name = cfg.name;

    std::vector<std::optional<std::size_t>> horizons;
    if (cfg.horizons.empty())
        horizons.push_back(std::nullopt);
    else
        horizons.assign(cfg.horizons.begin(), cfg.horizons.end());

    for (double M : cfg.M_values) {
        for (double c : cfg.c_values) {
            const CostParams params{c, M, cfg.kappa};
            const auto mu = known_mean(cfg.arrivals, params, cfg.ladder);
            const std::string label = arrival_label(cfg.arrivals, mu);
            for (const auto& T : horizons) {
                // One arrival sequence per trial, shared by every policy.
                std::vector<ArrivalSequence> arrivals;
                std::vector<double> static_cost, dp_cost;
                std::vector<std::uint64_t> checksum;
                for (std::size_t k = 0; k < cfg.trials; ++k) {
                    arrivals.push_back(generate_arrivals(cfg.arrivals, params, cfg.ladder, T,
                                                         trial_seed(cfg.base_seed, k)));
                    static_cost.push_back(
                        optimal_static_realized(arrivals.back(), cfg.ladder, params).cost);
                    dp_cost.push_back(offline_optimal_dp(arrivals.back(), cfg.ladder, params).cost);
                    checksum.push_back(arrival_checksum(arrivals.back()));
                }

                for (const auto& spec : cfg.policies) {
                    for (std::size_t k = 0; k < cfg.trials; ++k) {
                        const std::uint64_t seed = trial_seed(cfg.base_seed, k);
                        const ArrivalSequence& r = arrivals[k];
                        auto policy = make_policy(spec, cfg.ladder, params, seed);
                        const RunRecord run = simulate(*policy, r, cfg.ladder, params, seed);

                        TrialSummary s;
                        s.policy = spec.name;
                        s.T = r.horizon();
                        s.M = M;
                        s.c = c;
                        s.mu_or_trace = label;
                        s.trial = k;
                        s.seed = seed;
                        s.arrival_checksum = checksum[k];
                        s.cost = run.cumulative;
                        s.static_realized = static_cost[k];
                        s.offline_opt = dp_cost[k];
                        s.regret_adv = run.cumulative.total() - static_cost[k];
                        if (dp_cost[k] > 0.0) s.cr_adv = run.cumulative.total() / dp_cost[k];
                        if (mu) {
                            const double bench =
                                optimal_static_stochastic(*mu, s.T, cfg.ladder, params).cost;
                            s.static_stochastic = bench;
                            s.regret_stoch = run.cumulative.total() - bench;
                            if (bench > 0.0) s.cr_stoch = run.cumulative.total() / bench;
                            s.expected_cost =
                                expected_schedule_cost(run.schedule, *mu, cfg.ladder, params);
                        }
                        if (spec.kind == PolicyKind::Wftpl)
                            s.wait_end = policy->wait_end().value_or(s.T);
                        s.fetch_count = run.fetch_count();
                        result.trials.push_back(std::move(s));
                    }
                }
            }
        }
    }
    result.aggregate = aggregate(result.trials);
    return result;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialSummary>& trials)
{
    std::vector<AggregateRow> rows;
    std::size_t i = 0;
    while (i < trials.size()) {
        const auto& head = trials[i];
        std::size_t j = i;
        while (j < trials.size() && trials[j].policy == head.policy && trials[j].T == head.T &&
               trials[j].M == head.M && trials[j].c == head.c &&
               trials[j].mu_or_trace == head.mu_or_trace)
            ++j;

        auto collect = [&](auto&& field) {
            std::vector<double> v;
            for (std::size_t k = i; k < j; ++k) v.push_back(field(trials[k]));
            return summarize(v);
        };
        auto collect_opt = [&](auto&& field) -> std::optional<Summary> {
            std::vector<double> v;
            for (std::size_t k = i; k < j; ++k)
                if (auto x = field(trials[k])) v.push_back(static_cast<double>(*x));
            if (v.empty()) return std::nullopt;
            return summarize(v);
        };

        AggregateRow row;
        row.policy = head.policy;
        row.T = head.T;
        row.M = head.M;
        row.c = head.c;
        row.mu_or_trace = head.mu_or_trace;
        row.trials = j - i;
        row.cost = collect([](const TrialSummary& s) { return s.cost.total(); });
        row.rent = collect([](const TrialSummary& s) { return s.cost.rent; });
        row.service = collect([](const TrialSummary& s) { return s.cost.service; });
        row.fetch = collect([](const TrialSummary& s) { return s.cost.fetch; });
        row.regret_stoch = collect_opt([](const TrialSummary& s) { return s.regret_stoch; });
        row.regret_adv = collect([](const TrialSummary& s) { return s.regret_adv; });
        row.cr_adv = collect_opt([](const TrialSummary& s) { return s.cr_adv; });
        row.fetch_count =
            collect([](const TrialSummary& s) { return static_cast<double>(s.fetch_count); });
        row.wait_end = collect_opt([](const TrialSummary& s) { return s.wait_end; });
        rows.push_back(std::move(row));
        i = j;
    }
    return rows;
}

std::string format_number(std::optional<double> value)
{
    if (!value || !std::isfinite(*value)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", *value);
    return buf;
}

namespace {

std::optional<double> mean_of(const std::optional<Summary>& s)
{
    if (!s) return std::nullopt;
    return s->mean;
}

std::string sweep_prefix(const std::string& experiment, const std::string& policy, std::size_t T,
                         double M, double c, const std::string& label)
{
    std::ostringstream os;
    os << experiment << ',' << policy << ',' << T << ',' << format_number(M) << ','
       << format_number(c) << ',' << label;
    return os.str();
}

}  // namespace

std::string trials_csv(const ExperimentResult& result)
{
    std::ostringstream os;
    os << "experiment,policy,T,M,c,mu_or_trace,trial,seed,arrival_checksum,cost,rent,service,"
          "fetch,regret_stoch,regret_adv,cr_adv,fetch_count,T_s\n";
    for (const auto& s : result.trials) {
        os << sweep_prefix(result.name, s.policy, s.T, s.M, s.c, s.mu_or_trace) << ',' << s.trial
           << ',' << s.seed << ',' << hex64(s.arrival_checksum) << ','
           << format_number(s.cost.total()) << ',' << format_number(s.cost.rent) << ','
           << format_number(s.cost.service) << ',' << format_number(s.cost.fetch) << ','
           << format_number(s.regret_stoch) << ',' << format_number(s.regret_adv) << ','
           << format_number(s.cr_adv) << ',' << s.fetch_count << ',';
        if (s.wait_end) os << *s.wait_end;
        os << '\n';
    }
    return os.str();
}

std::string aggregate_csv(const ExperimentResult& result)
{
    std::ostringstream os;
    os << "experiment,policy,T,M,c,mu_or_trace,trials,mean_cost,se_cost,mean_rent,mean_service,"
          "mean_fetch,mean_regret_stoch,mean_regret_adv,mean_cr_adv,mean_fetch_count,mean_T_s\n";
    for (const auto& r : result.aggregate) {
        os << sweep_prefix(result.name, r.policy, r.T, r.M, r.c, r.mu_or_trace) << ','
           << r.trials << ',' << format_number(r.cost.mean) << ',' << format_number(r.cost.se)
           << ',' << format_number(r.rent.mean) << ',' << format_number(r.service.mean) << ','
           << format_number(r.fetch.mean) << ',' << format_number(mean_of(r.regret_stoch)) << ','
           << format_number(r.regret_adv.mean) << ',' << format_number(mean_of(r.cr_adv)) << ','
           << format_number(r.fetch_count.mean) << ',' << format_number(mean_of(r.wait_end))
           << '\n';
    }
    return os.str();
}

std::vector<std::filesystem::path> write_results(const ExperimentResult& result,
                                                 const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    const std::filesystem::path trials = dir / (result.name + "_trials.csv");
    const std::filesystem::path agg = dir / (result.name + "_aggregate.csv");
    for (const auto& [path, text] : {std::pair{trials, trials_csv(result)},
                                     std::pair{agg, aggregate_csv(result)}}) {
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out) throw IoError("cannot write " + path.string());
    }
    return {trials, agg};
}

}  // namespace edgehost
