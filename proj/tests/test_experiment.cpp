#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "edgehost/experiment.hpp"

using namespace edgehost;
using nlohmann::json;

namespace {

json small_config()
{
    return json::parse(R"({
        "name": "small",
        "ladder": [{"alpha": 0, "g": 1}, {"alpha": 0.5, "g": 0.45}, {"alpha": 1, "g": 0}],
        "c": 0.45, "M": [5, 50], "kappa": 1,
        "arrivals": {"kind": "iid-bernoulli", "mu": 0.4},
        "policies": [{"type": "alpha-rr"}, {"type": "ftpl"}, {"type": "wftpl", "beta": 6},
                     {"type": "static", "level": 2}],
        "T": [100, 300], "trials": 6, "seed": 42
    })");
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string config_error_message(json doc)
{
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("config parsing")
{
    const auto cfg = parse_config(small_config());
    CHECK(cfg.name == "small");
    CHECK(cfg.ladder.size() == 3);
    CHECK(cfg.M_values == std::vector<double>{5, 50});
    CHECK(cfg.c_values == std::vector<double>{0.45});
    CHECK(cfg.horizons == std::vector<std::size_t>{100, 300});
    REQUIRE(cfg.policies.size() == 4);
    CHECK(cfg.policies[0].name == "RR");
    CHECK(cfg.policies[1].name == "FTPL");
    CHECK(cfg.policies[2].name == "W-FTPL");
    CHECK(cfg.policies[2].beta == 6.0);
    CHECK(cfg.policies[1].eta_scale == 0.1);
    CHECK(cfg.base_seed == 42);
}

TEST_CASE("config errors name the violated condition")
{
    auto doc = small_config();
    doc["c"] = 2.0;
    CHECK(config_error_message(doc).find("Assumption 1") != std::string::npos);

    doc = small_config();
    doc["ladder"][1]["g"] = 0.6;
    CHECK(config_error_message(doc).find("Assumption 2") != std::string::npos);

    doc = small_config();
    doc["M"] = json::array();
    CHECK(config_error_message(doc).find("empty") != std::string::npos);

    doc = small_config();
    doc["colour"] = "blue";
    CHECK(config_error_message(doc).find("colour") != std::string::npos);

    doc = small_config();
    doc["policies"][0]["type"] = "lru";
    CHECK(config_error_message(doc).find("lru") != std::string::npos);

    doc = small_config();
    doc.erase("T");
    CHECK_FALSE(config_error_message(doc).empty());

    doc = small_config();
    doc["arrivals"]["mu"] = 0.0;
    CHECK_FALSE(config_error_message(doc).empty());

    doc = small_config();
    doc["ladder"].push_back({{"alpha", 0.75}, {"g", 0.2}});
    std::swap(doc["ladder"][2], doc["ladder"][3]);
    CHECK(config_error_message(doc).find("alpha-RR") != std::string::npos);
}

TEST_CASE("runs are deterministic and pair arrivals across policies")
{
    const auto cfg = parse_config(small_config());
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    CHECK(trials_csv(a) == trials_csv(b));
    CHECK(aggregate_csv(a) == aggregate_csv(b));
    CHECK(a.trials.size() == 2 * 2 * 4 * 6);
    CHECK(a.aggregate.size() == 2 * 2 * 4);

    std::map<std::tuple<double, std::size_t, std::size_t>, std::uint64_t> checksum;
    for (const auto& s : a.trials) {
        const auto key = std::tuple{s.M, s.T, s.trial};
        auto [it, fresh] = checksum.emplace(key, s.arrival_checksum);
        CHECK(it->second == s.arrival_checksum);
        CHECK(s.seed == (42u ^ s.trial));
    }

    auto other = cfg;
    other.base_seed = 43;
    CHECK(trials_csv(run_experiment(other)) != trials_csv(a));
}

TEST_CASE("regret fields equal cost minus benchmark")
{
    const auto result = run_experiment(parse_config(small_config()));
    for (const auto& s : result.trials) {
        CHECK(s.regret_adv == doctest::Approx(s.cost.total() - s.static_realized));
        REQUIRE(s.regret_stoch.has_value());
        CHECK(*s.regret_stoch == doctest::Approx(s.cost.total() - *s.static_stochastic));
        CHECK(s.static_realized >= s.offline_opt - 1e-9);
        if (s.policy == "W-FTPL") {
            REQUIRE(s.wait_end.has_value());
        } else {
            CHECK_FALSE(s.wait_end.has_value());
        }
        if (s.policy == "static-2") CHECK(s.fetch_count == 1);
    }
}

TEST_CASE("aggregate CSV folds the per-trial CSV")
{
    const auto result = run_experiment(parse_config(small_config()));
    const auto trials = parse_csv(trials_csv(result));
    const auto agg = parse_csv(aggregate_csv(result));
    REQUIRE(trials.front().size() == 18);
    REQUIRE(agg.front().size() == 17);
    CHECK(trials.front()[8] == "arrival_checksum");
    CHECK(agg.front()[7] == "mean_cost");

    std::map<std::string, std::size_t> tcol, acol;
    for (std::size_t i = 0; i < trials.front().size(); ++i) tcol[trials.front()[i]] = i;
    for (std::size_t i = 0; i < agg.front().size(); ++i) acol[agg.front()[i]] = i;

    const std::vector<std::pair<std::string, std::string>> folded{
        {"mean_cost", "cost"},           {"mean_rent", "rent"},
        {"mean_service", "service"},     {"mean_fetch", "fetch"},
        {"mean_regret_stoch", "regret_stoch"}, {"mean_regret_adv", "regret_adv"},
        {"mean_cr_adv", "cr_adv"},       {"mean_fetch_count", "fetch_count"},
        {"mean_T_s", "T_s"}};

    std::size_t row = 1;
    for (std::size_t a = 1; a < agg.size(); ++a) {
        const auto& ar = agg[a];
        const std::size_t n = std::stoul(ar[acol["trials"]]);
        for (const auto& [mean_col, trial_col] : folded) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t k = row; k < row + n; ++k) {
                const auto& cell = trials[k][tcol[trial_col]];
                for (const char* key : {"policy", "T", "M", "c"})
                    REQUIRE(trials[k][tcol[key]] == ar[acol[key]]);
                if (cell.empty()) continue;
                sum += std::stod(cell);
                ++count;
            }
            const auto& expected = ar[acol[mean_col]];
            if (count == 0) {
                CHECK(expected.empty());
            } else {
                const double mean = sum / static_cast<double>(count);
                CHECK(std::stod(expected) == doctest::Approx(mean).epsilon(1e-7));
            }
        }
        row += n;
    }
    CHECK(row == trials.size());
}

TEST_CASE("frame and trace arrivals use the whole sequence unless T is given")
{
    auto doc = json::parse(R"({
        "name": "frames",
        "ladder": [{"alpha": 0, "g": 1}, {"alpha": 1, "g": 0}],
        "c": 0.1, "M": 50, "kappa": 5,
        "arrivals": {"kind": "adversarial-frames", "n_frames": 3, "mode": "full"},
        "policies": [{"type": "alpha-rr"}], "trials": 1
    })");
    auto result = run_experiment(parse_config(doc));
    CHECK(result.trials.front().T == 3 * 511);
    CHECK(result.aggregate.front().mu_or_trace == "frames-full");
    CHECK(result.trials.front().regret_stoch == std::nullopt);

    doc["T"] = json::array({511, 1022});
    result = run_experiment(parse_config(doc));
    CHECK(result.trials[0].T == 511);
    CHECK(result.trials[1].T == 1022);

    const auto dir = std::filesystem::temp_directory_path() / "edgehost_cfg";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "trace.txt") << "0\n4\n9\n0\n";
    doc["arrivals"] = {{"kind", "trace"}, {"path", "trace.txt"}};
    doc.erase("T");
    doc["kappa"] = 5;
    result = run_experiment(parse_config(doc, dir));
    CHECK(result.trials.front().T == 4);

    doc["arrivals"]["path"] = "missing.txt";
    CHECK_THROWS_AS(run_experiment(parse_config(doc, dir)), IoError);
}

TEST_CASE("results are written as two CSV files")
{
    auto doc = small_config();
    doc["trials"] = 2;
    const auto result = run_experiment(parse_config(doc));
    const auto dir = std::filesystem::temp_directory_path() / "edgehost_out" / "nested";
    std::filesystem::remove_all(dir);
    const auto paths = write_results(result, dir);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].filename() == "small_trials.csv");
    CHECK(paths[1].filename() == "small_aggregate.csv");
    std::ifstream in(paths[1]);
    std::stringstream body;
    body << in.rdbuf();
    CHECK(body.str() == aggregate_csv(result));
}

TEST_CASE("numbers carry nine significant digits")
{
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(4505.0) == "4505");
    CHECK(format_number(std::nullopt) == "");
    CHECK(format_number(std::nan("")) == "");
}
