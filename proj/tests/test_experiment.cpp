#include <graphsl/experiment.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

using namespace graphsl;

TEST_CASE("rolling mean matches hand-computed windows", "[experiment]") {
    const std::vector<double> series{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    SECTION("window one is the identity") {
        CHECK(rolling_mean(series, 1) == series);
    }
    SECTION("constant input is unchanged") {
        const std::vector<double> flat(7, 4.25);
        CHECK(rolling_mean(flat, 4) == flat);
    }
    SECTION("trailing window of three") {
        const std::vector<double> smoothed = rolling_mean(series, 3);
        REQUIRE(smoothed.size() == series.size());
        CHECK(smoothed[0] == Catch::Approx(1.0));
        CHECK(smoothed[1] == Catch::Approx(1.5));
        CHECK(smoothed[2] == Catch::Approx(2.0));
        CHECK(smoothed[4] == Catch::Approx(4.0));
        CHECK(smoothed[9] == Catch::Approx(9.0));
    }
    SECTION("empty series stays empty") {
        CHECK(rolling_mean({}, 5).empty());
    }
    SECTION("non-positive window is rejected") {
        CHECK_THROWS_AS(rolling_mean(series, 0), std::invalid_argument);
    }
}

TEST_CASE("median and steady level summarize series", "[experiment]") {
    CHECK(median({3.0, 1.0, 2.0}) == Catch::Approx(2.0));
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == Catch::Approx(2.5));
    CHECK(median({7.0}) == Catch::Approx(7.0));
    CHECK_THROWS_AS(median({}), std::invalid_argument);

    std::vector<double> ramp(100);
    for (int i = 0; i < 100; ++i) ramp[static_cast<std::size_t>(i)] = i + 1.0;
    // Final tenth of 100 samples is 91..100, median 95.5.
    CHECK(steady_level(ramp) == Catch::Approx(95.5));

    // Short series fall back to the last sample.
    CHECK(steady_level({5.0, 9.0, 2.0}) == Catch::Approx(2.0));
    CHECK_THROWS_AS(steady_level({}), std::invalid_argument);
}

TEST_CASE("top-k overlap scores ranked agreement", "[experiment]") {
    const std::vector<int> learned{0, 1, 2, 3, 4};

    CHECK(top_k_overlap(learned, {0, 1, 2, 3, 4}, 3) == Catch::Approx(1.0));
    CHECK(top_k_overlap(learned, {2, 0, 1, 4, 3}, 3) == Catch::Approx(1.0));
    CHECK(top_k_overlap(learned, {3, 4, 0, 1, 2}, 2) == Catch::Approx(0.0));
    CHECK(top_k_overlap(learned, {0, 3, 4, 1, 2}, 3) == Catch::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(top_k_overlap(learned, learned, 0), std::invalid_argument);
    CHECK_THROWS_AS(top_k_overlap(learned, {0, 1}, 3), std::invalid_argument);
}

TEST_CASE("ground truth ranking agrees with a direct informativeness pass",
          "[experiment]") {
    const DirectedGraph graph = generate_erdos_renyi(20, 0.2, 2);
    const CombinationMatrix a = uniform_combination_matrix(graph);
    const BernoulliLikelihood models =
        generate_models(5, make_sigma_profile(20, {0, 1, 2}), 102);

    const std::vector<int> ranking = ground_truth_ranking(models, a, 0);
    REQUIRE(ranking.size() == 20);

    const Vector u = perron_vector(a);
    std::vector<double> scores(20);
    for (int k = 0; k < 20; ++k) {
        double total = 0.0;
        for (int theta = 1; theta < 5; ++theta)
            total += models.kl_divergence(k, 0, theta);
        scores[static_cast<std::size_t>(k)] = u(k) * total;
    }
    for (std::size_t pos = 1; pos < ranking.size(); ++pos)
        CHECK(scores[static_cast<std::size_t>(ranking[pos - 1])] >=
              scores[static_cast<std::size_t>(ranking[pos])]);
    // The planted influential agents dominate this draw.
    const std::vector<int> top(ranking.begin(), ranking.begin() + 3);
    CHECK(std::count(top.begin(), top.end(), 0) == 1);
    CHECK(std::count(top.begin(), top.end(), 1) == 1);
    CHECK(std::count(top.begin(), top.end(), 2) == 1);
}

TEST_CASE("restarted recovery time counts iterations to the threshold",
          "[experiment]") {
    RunSeries run;
    run.run_id = "M50";
    run.seed = 1;
    run.first_iteration = 100;
    run.hit = {1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

    // Restarting at iteration 103 the rates run 0, 1/2, 2/3, ...; the first
    // value above 0.9 is 10/11 at the eleventh post-switch sample.
    CHECK(recovery_iterations(run, 103, 0.9) == 11);
    // Restarting on a clean streak recovers immediately.
    CHECK(recovery_iterations(run, 104, 0.9) == 1);
    // A threshold never reached reports failure as -1.
    CHECK(recovery_iterations(run, 103, 1.0) == -1);
    CHECK_THROWS_AS(recovery_iterations(run, 99, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(recovery_iterations(run, 200, 0.9), std::invalid_argument);
}

TEST_CASE("builtin scenarios carry the documented settings", "[experiment]") {
    const ScenarioConfig fig3 = builtin_scenario("fig3_msd");
    REQUIRE(fig3.variants.size() == 4);
    CHECK(fig3.variants[0].name == "known");
    CHECK(fig3.variants[0].known_llr);
    CHECK(fig3.variants[1].name == "M50");
    CHECK(fig3.variants[1].learner.mu == Catch::Approx(0.1));
    CHECK(fig3.variants[1].learner.window == 50);
    CHECK(fig3.variants[2].learner.mu == Catch::Approx(0.01));
    CHECK(fig3.variants[2].learner.window == 10);
    CHECK(fig3.variants[3].learner.mu == Catch::Approx(0.001));
    CHECK(fig3.variants[3].learner.window == 1);
    CHECK(fig3.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(fig3.burn_in == default_burn_in(fig3.delta));
    CHECK(fig3.n_iterations == fig3.burn_in + 5000);

    const ScenarioConfig fig4 = builtin_scenario("fig4_llr");
    CHECK(fig4.rolling_window == 50);
    REQUIRE(fig4.variants.size() == 3);
    CHECK(fig4.variants[0].name == "M1");
    CHECK(fig4.variants[2].name == "M50");

    const ScenarioConfig fig5 = builtin_scenario("fig5_influence");
    CHECK(fig5.score_influence);
    REQUIRE(fig5.variants.size() == 1);

    const ScenarioConfig fig6 = builtin_scenario("fig6_rate");
    CHECK(fig6.seeds.size() == 15);
    CHECK(fig6.variants.empty());
    REQUIRE(fig6.regimes.size() == 2);
    CHECK(fig6.regimes[0].name == "influential");
    CHECK(fig6.regimes[1].name == "uniform");
    CHECK(fig6.regimes[1].influential.empty());
    CHECK(fig6.n_iterations == fig6.burn_in + 2000);

    const ScenarioConfig fig7a = builtin_scenario("fig7a_topology");
    CHECK(fig7a.perturbation.topology_period == 1000);
    CHECK(fig7a.perturbation.flip_prob == Catch::Approx(0.005));

    const ScenarioConfig fig7b = builtin_scenario("fig7b_truth");
    REQUIRE(fig7b.perturbation.theta_switches.size() == 1);
    CHECK(fig7b.perturbation.theta_switches[0].iteration == fig7b.burn_in + 2500);
    CHECK(fig7b.perturbation.theta_switches[0].theta == 1);

    CHECK_THROWS_AS(builtin_scenario("fig99"), std::invalid_argument);
}

TEST_CASE("scenario json covers every field and applies defaults",
          "[experiment]") {
    const nlohmann::json spec = {
        {"name", "custom_run"},
        {"n_agents", 8},
        {"edge_prob", 0.4},
        {"n_hypotheses", 3},
        {"delta", 0.1},
        {"theta_star", 1},
        {"n_iterations", 250},
        {"burn_in", 50},
        {"seeds", {3, 9}},
        {"rolling_window", 10},
        {"score_influence", true},
        {"perturbation",
         {{"topology_period", 40},
          {"flip_prob", 0.01},
          {"theta_switches", {{{"iteration", 120}, {"theta", 2}}}}}},
        {"regimes",
         {{{"name", "strong"},
           {"influential", {0, 1}},
           {"sigma_influential", 0.6},
           {"sigma_base", 0.1}}}},
        {"variants",
         {{{"name", "fast"}, {"mu", 0.2}, {"window", 5}},
          {{"name", "sparse"},
           {"mu", 0.05},
           {"window", 10},
           {"batch", 4},
           {"l1_weight", 0.01},
           {"known_llr", true}}}}};

    const ScenarioConfig parsed = scenario_from_json(spec);
    CHECK(parsed.name == "custom_run");
    CHECK(parsed.n_agents == 8);
    CHECK(parsed.edge_prob == Catch::Approx(0.4));
    CHECK(parsed.n_hypotheses == 3);
    CHECK(parsed.delta == Catch::Approx(0.1));
    CHECK(parsed.theta_star == 1);
    CHECK(parsed.n_iterations == 250);
    CHECK(parsed.burn_in == 50);
    CHECK(parsed.seeds == std::vector<std::uint64_t>{3, 9});
    CHECK(parsed.rolling_window == 10);
    CHECK(parsed.score_influence);
    CHECK(parsed.perturbation.topology_period == 40);
    CHECK(parsed.perturbation.flip_prob == Catch::Approx(0.01));
    REQUIRE(parsed.perturbation.theta_switches.size() == 1);
    CHECK(parsed.perturbation.theta_switches[0].iteration == 120);
    CHECK(parsed.perturbation.theta_switches[0].theta == 2);
    REQUIRE(parsed.regimes.size() == 1);
    CHECK(parsed.regimes[0].name == "strong");
    CHECK(parsed.regimes[0].influential == std::vector<int>{0, 1});
    CHECK(parsed.regimes[0].sigma_influential == Catch::Approx(0.6));
    CHECK(parsed.regimes[0].sigma_base == Catch::Approx(0.1));
    REQUIRE(parsed.variants.size() == 2);
    CHECK(parsed.variants[0].name == "fast");
    CHECK(parsed.variants[0].learner.mu == Catch::Approx(0.2));
    CHECK(parsed.variants[0].learner.window == 5);
    // Learner delta inherits the scenario delta unless overridden.
    CHECK(parsed.variants[0].learner.delta == Catch::Approx(0.1));
    CHECK(parsed.variants[0].learner.batch == 1);
    CHECK_FALSE(parsed.variants[0].known_llr);
    CHECK(parsed.variants[1].learner.batch == 4);
    CHECK(parsed.variants[1].learner.l1_weight == Catch::Approx(0.01));
    CHECK(parsed.variants[1].known_llr);

    // Omitted fields fall back to the documented defaults.
    const ScenarioConfig bare = scenario_from_json(nlohmann::json::object());
    CHECK(bare.n_agents == 20);
    CHECK(bare.edge_prob == Catch::Approx(0.2));
    CHECK(bare.n_hypotheses == 5);
    CHECK(bare.delta == Catch::Approx(0.05));
    CHECK(bare.burn_in == -1);
    CHECK(bare.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    REQUIRE(bare.regimes.size() == 1);
    CHECK(bare.regimes[0].influential == std::vector<int>{0, 1, 2});
    CHECK(bare.variants.empty());
}

TEST_CASE("zero-iteration scenario reports the initialization error",
          "[experiment]") {
    ScenarioConfig config;
    config.name = "empty";
    config.n_agents = 5;
    config.edge_prob = 0.6;
    config.n_hypotheses = 3;
    config.n_iterations = 0;
    config.burn_in = 0;
    config.seeds = {11};
    config.regimes = {ModelRegime{"default", {0}, 0.5, 0.05}};
    config.variants = {VariantSpec{"M5", GslConfig{}, false}};
    config.variants[0].learner.window = 5;
    config.variants[0].learner.delta = config.delta;

    const ScenarioResult result = run_scenario(config);
    REQUIRE(result.runs.size() == 1);
    CHECK(result.runs[0].a_error.empty());
    CHECK(result.runs[0].rate.empty());

    const DirectedGraph graph = generate_erdos_renyi(5, 0.6, 11);
    const CombinationMatrix a = uniform_combination_matrix(graph);
    const Matrix initial = Matrix::Constant(5, 5, 1.0 / 5.0);
    const double expected_a = reconstruction_error(initial, a.weights);
    const BernoulliLikelihood models =
        generate_models(3, make_sigma_profile(5, {0}), 11 + 100);
    const double expected_llr = models.expected_llr_matrix(0, 0).squaredNorm();

    CHECK(result.summary.steady_a_error.at("M5") == Catch::Approx(expected_a));
    CHECK(result.summary.steady_llr_error.at("M5") ==
          Catch::Approx(expected_llr));
    CHECK(std::isnan(result.summary.terminal_rate.at("M5")));
    CHECK(result.passed);
}

TEST_CASE("identical configs produce byte-identical csv", "[experiment]") {
    ScenarioConfig config;
    config.name = "repeat";
    config.n_agents = 8;
    config.edge_prob = 0.4;
    config.n_hypotheses = 3;
    config.burn_in = 10;
    config.n_iterations = 10 + 60;
    config.seeds = {4, 7};
    config.perturbation.topology_period = 25;
    config.perturbation.flip_prob = 0.01;
    config.variants = {VariantSpec{"M5", GslConfig{}, false}};
    config.variants[0].learner.mu = 0.05;
    config.variants[0].learner.window = 5;
    config.variants[0].learner.delta = config.delta;

    const ScenarioResult first = run_scenario(config);
    const ScenarioResult second = run_scenario(config);

    std::ostringstream lhs, rhs;
    write_scenario_csv(lhs, first);
    write_scenario_csv(rhs, second);
    CHECK(lhs.str() == rhs.str());

    REQUIRE(first.runs.size() == 2);
    CHECK(first.runs[0].run_id == "M5");
    CHECK(first.runs[0].seed == 4);
    CHECK(first.runs[1].seed == 7);
    for (const RunSeries& run : first.runs) {
        REQUIRE(run.a_error.size() == 60);
        REQUIRE(run.rate.size() == 60);
        CHECK(run.first_iteration == 10);
        for (double value : run.a_error) CHECK(std::isfinite(value));
        for (double value : run.rate) {
            CHECK(value >= 0.0);
            CHECK(value <= 1.0);
        }
    }

    const std::string text = lhs.str();
    CHECK(text.rfind("run_id,seed,i,a_error,llr_error,r_i\n", 0) == 0);
    CHECK(text.find("\nM5,4,10,") != std::string::npos);
    CHECK(text.find("\nM5,7,69,") != std::string::npos);
}

TEST_CASE("forward-only scenarios emit rate series without learner columns",
          "[experiment]") {
    ScenarioConfig config;
    config.name = "rate_only";
    config.n_agents = 6;
    config.edge_prob = 0.5;
    config.n_hypotheses = 3;
    config.burn_in = 5;
    config.n_iterations = 5 + 40;
    config.seeds = {3};
    config.regimes = {ModelRegime{"strong", {0, 1}, 0.5, 0.05},
                      ModelRegime{"flat", {}, 0.5, 0.05}};

    const ScenarioResult result = run_scenario(config);
    REQUIRE(result.runs.size() == 2);
    CHECK(result.runs[0].run_id == "strong");
    CHECK(result.runs[1].run_id == "flat");
    for (const RunSeries& run : result.runs) {
        CHECK(run.a_error.empty());
        CHECK(run.llr_error.empty());
        REQUIRE(run.rate.size() == 40);
    }
    CHECK(result.summary.terminal_rate.count("strong") == 1);
    CHECK(std::isnan(result.summary.steady_a_error.at("strong")));

    std::ostringstream out;
    write_scenario_csv(out, result);
    CHECK(out.str().find("strong,3,5,nan,nan,") != std::string::npos);
}

TEST_CASE("scenario run pulls the estimate toward the network", "[experiment]") {
    ScenarioConfig config;
    config.name = "convergence";
    config.n_agents = 5;
    config.edge_prob = 0.6;
    config.n_hypotheses = 3;
    config.delta = 0.1;
    config.burn_in = default_burn_in(config.delta);
    config.n_iterations = config.burn_in + 4000;
    config.seeds = {11};
    config.regimes = {ModelRegime{"default", {0, 1, 2, 3, 4}, 0.5, 0.05}};
    config.variants = {VariantSpec{"M50", GslConfig{}, false}};
    config.variants[0].learner.mu = 0.3;
    config.variants[0].learner.window = 50;
    config.variants[0].learner.delta = config.delta;

    const ScenarioResult result = run_scenario(config);
    REQUIRE(result.runs.size() == 1);
    const RunSeries& run = result.runs[0];
    REQUIRE(run.a_error.size() == 4000);
    const double steady = result.summary.steady_a_error.at("M50");
    CHECK(steady < 0.05 * run.a_error.front());
    CHECK(steady < 0.02);
    CHECK(result.summary.terminal_rate.at("M50") > 0.9);
}

TEST_CASE("custom scenarios pass checks vacuously", "[experiment]") {
    ScenarioConfig config;
    config.name = "anything";
    config.n_agents = 5;
    config.edge_prob = 0.6;
    config.n_hypotheses = 2;
    config.burn_in = 0;
    config.n_iterations = 5;
    config.seeds = {1};

    ScenarioResult result = run_scenario(config);
    apply_scenario_checks(result);
    CHECK(result.checks.empty());
    CHECK(result.passed);
}
