#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edgehost/arrivals.hpp"
#include "edgehost/metrics.hpp"
#include "edgehost/oracles.hpp"
#include "edgehost/policies.hpp"
#include "test_helpers.hpp"

using namespace edgehost;

namespace {

RunRecord run_static(Level level, const ArrivalSequence& r, const HostingLadder& ladder,
                     const CostParams& p)
{
    auto policy = static_policy(level);
    return simulate(*policy, r, ladder, p);
}

}  // namespace

TEST_CASE("adversarial regret against the best static level")
{
    const auto binary = HostingLadder::binary();
    const CostParams p{0.45, 5.0, 1.0};
    ArrivalSequence r(std::vector<double>(10, 0.0));
    for (std::size_t t = 0; t < 8; ++t) r.requests[t] = 1.0;
    CHECK(regret_adversarial(run_static(0, r, binary, p), r, binary, p) == doctest::Approx(0.0));
    CHECK(regret_adversarial(run_static(1, r, binary, p), r, binary, p) == doctest::Approx(1.5));

    const ArrivalSequence zeros{std::vector<double>(20, 0.0)};
    PolicySpec spec;
    spec.kind = PolicyKind::Ftpl;
    auto ftpl = make_policy(spec, binary, p, 3);
    const auto run = simulate(*ftpl, zeros, binary, p);
    CHECK(regret_adversarial(run, zeros, binary, p) == doctest::Approx(run.cumulative.total()));
}

TEST_CASE("stochastic regret against the closed-form benchmark")
{
    const CostParams p{0.45, 5.0, 1.0};
    const auto ladder = test::three_level_ladder();
    CHECK(regret_stochastic(4000.0, 0.4, 10000, ladder, p) == doctest::Approx(0.0));
    CHECK(regret_stochastic(4505.0, 0.4, 10000, ladder, p) == doctest::Approx(505.0));
    CHECK(expected_schedule_cost(HostingSchedule(10000, 0), 0.4, ladder, p) ==
          doctest::Approx(4000.0));
    CHECK(expected_schedule_cost({0, 2, 2, 1}, 0.4, ladder, p) ==
          doctest::Approx(0.4 + 0.45 * 2 + 0.405 + 5.0));
}

TEST_CASE("competitive ratios")
{
    const auto binary = HostingLadder::binary();
    const CostParams p{1.0, 2.0, 3.0};
    const ArrivalSequence r{{3.0, 3.0, 0.0}};
    CHECK(*competitive_ratio(6.0, r, binary, p, RatioMode::Adversarial) == doctest::Approx(1.5));
    const double never = run_static(0, r, binary, p).cumulative.total();
    CHECK(never == doctest::Approx(6.0));

    const CostParams q{0.45, 5.0, 1.0};
    const ArrivalSequence bern = gen_iid_bernoulli(0.4, 1.0, 1000, 1);
    const auto bench = optimal_static_stochastic(0.4, 1000, binary, q);
    CHECK(*competitive_ratio(bench.cost, bern, binary, q, RatioMode::Stochastic, 0.4) == 1.0);
    CHECK(*competitive_ratio(2.0 * bench.cost, bern, binary, q, RatioMode::Stochastic, 0.4) ==
          doctest::Approx(2.0));

    const ArrivalSequence zeros{std::vector<double>(5, 0.0)};
    CHECK_FALSE(competitive_ratio(1.0, zeros, binary, q, RatioMode::Adversarial).has_value());
}

TEST_CASE("arrival gap statistics")
{
    const CostParams p{0.45, 5.0, 1.0};
    const auto s = arrival_stats(0.4, test::three_level_ladder(), p);
    CHECK(s.mu_i(0) == doctest::Approx(0.4));
    CHECK(s.mu_i(1) == doctest::Approx(0.405));
    CHECK(s.mu_i(2) == doctest::Approx(0.45));
    CHECK(s.i_star == 0);
    CHECK(s.delta(0) == 0.0);
    CHECK(s.delta_min == doctest::Approx(0.005));
    CHECK(s.delta_max == doctest::Approx(0.05));

    CHECK(arrival_stats(0.45, HostingLadder::binary(), p).delta_min == 0.0);
    CHECK(arrival_stats(0.9, HostingLadder::binary(), p).i_star == 1);
}

TEST_CASE("closed-form bounds")
{
    BoundInputs in;
    in.T = 100;
    in.K = 2;
    in.alpha = 0.1;
    in.kappa = 1;
    in.M = 5;
    in.c = 0.45;
    CHECK(theoretical_bound(BoundKind::FtplAdv, in).value == doctest::Approx(1861.3000286685065));
    in.beta = 6;
    in.delta = 0;
    CHECK(theoretical_bound(BoundKind::WftplAdv, in).value ==
          doctest::Approx(1861.3000286685065 + 31.075114600922394));

    BoundInputs lower;
    lower.M = 50;
    lower.K = 2;
    lower.alpha2 = 1;
    CHECK(theoretical_bound(BoundKind::AdvLowerFtpl, lower).value == doctest::Approx(25.0));
    lower.M.reset();
    CHECK_THROWS_AS(theoretical_bound(BoundKind::AdvLowerFtpl, lower), MissingSymbol);

    BoundInputs st;
    st.alpha = 0.1;
    st.kappa = 1;
    st.M = 5;
    st.c = 0.45;
    st.beta = 6;
    st.delta = 0;
    st.mu = 0.4;
    st.ladder = test::three_level_ladder();
    CHECK(theoretical_bound(BoundKind::FtplStoch, st).value == doctest::Approx(682733.2509241233));
    CHECK(theoretical_bound(BoundKind::WftplStoch, st).value == doctest::Approx(490001279.7628694));
    CHECK(theoretical_bound(BoundKind::FtplCr, st).value == doctest::Approx(109.50068587105625));
    CHECK(theoretical_bound(BoundKind::WftplCr, st).value == doctest::Approx(111.72290809327848));

    st.delta_min = 0.0;
    CHECK_THROWS_AS(theoretical_bound(BoundKind::FtplStoch, st), std::domain_error);

    for (auto kind : {BoundKind::FtplAdv, BoundKind::WftplAdv, BoundKind::FtplStoch,
                      BoundKind::WftplStoch, BoundKind::FtplCr, BoundKind::WftplCr,
                      BoundKind::AdvLowerFtpl})
        CHECK(parse_bound_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_bound_kind("nope"), std::invalid_argument);
}

TEST_CASE("summaries")
{
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto s = summarize(v);
    CHECK(s.n == 10);
    CHECK(s.mean == doctest::Approx(5.5));
    CHECK(s.se == doctest::Approx(std::sqrt(82.5 / 9.0) / std::sqrt(10.0)));
    CHECK(s.p10 == doctest::Approx(1.9));
    CHECK(s.p90 == doctest::Approx(9.1));
    CHECK(summarize(std::vector<double>{4.0}).se == 0.0);
}

TEST_CASE("best static level in hindsight is never cheaper than the offline optimum")
{
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = test::random_instance(gen);
        const auto r = test::random_arrivals(gen, 150, inst.params.kappa);
        CHECK(optimal_static_realized(r, inst.ladder, inst.params).cost >=
              offline_optimal_dp(r, inst.ladder, inst.params).cost - 1e-9);
    }
}

TEST_CASE("mean adversarial regret dominates stochastic regret on i.i.d. inputs")
{
    const auto ladder = test::three_level_ladder();
    const CostParams p{0.45, 5.0, 1.0};
    const double mu = 0.4;
    const std::size_t T = 2000;
    for (PolicyKind kind : {PolicyKind::Ftpl, PolicyKind::Wftpl, PolicyKind::AlphaRr}) {
        PolicySpec spec;
        spec.kind = kind;
        std::vector<double> adv, costs;
        for (std::uint64_t trial = 0; trial < 60; ++trial) {
            const auto r = gen_iid_bernoulli(mu, 1.0, T, trial_seed(5, trial));
            auto policy = make_policy(spec, ladder, p, trial_seed(5, trial));
            const auto run = simulate(*policy, r, ladder, p);
            adv.push_back(regret_adversarial(run, r, ladder, p));
            costs.push_back(run.cumulative.total());
        }
        const auto a = summarize(adv);
        const auto c = summarize(costs);
        const double stoch = regret_stochastic(c.mean, mu, T, ladder, p);
        CHECK(a.mean >= stoch - 3.0 * std::sqrt(a.se * a.se + c.se * c.se));
    }
}

TEST_CASE("FTPL picks each level with probability 1/K in the first slot")
{
    const auto binary = HostingLadder::binary();
    const CostParams p{0.45, 50.0, 1.0};
    const std::size_t n = 10000;
    std::size_t hosted = 0;
    for (std::uint64_t seed = 0; seed < n; ++seed) {
        Rng rng(seed, Stream::Perturbation);
        const auto s = make_ftpl_state(2, 0.1, EtaSchedule::SqrtT, rng);
        hosted += ftpl_decide(s, 1) == 1;
    }
    const double sigma = std::sqrt(0.25 / n);
    CHECK(std::abs(static_cast<double>(hosted) / n - 0.5) <= 3.0 * sigma);
}
