#pragma once

#include "influence.hpp"
#include "learner.hpp"
#include "likelihood.hpp"
#include "simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace graphsl {

// Trailing mean: entry i averages the last min(window, i+1) samples.
inline std::vector<double> rolling_mean(const std::vector<double>& series, int window) {
    require(window >= 1, "rolling window must be positive");
    std::vector<double> out(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        if (i >= static_cast<std::size_t>(window)) acc -= series[i - static_cast<std::size_t>(window)];
        out[i] = acc / static_cast<double>(std::min<std::size_t>(static_cast<std::size_t>(window), i + 1));
    }
    return out;
}

inline double median(std::vector<double> values) {
    require(!values.empty(), "median of an empty range");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Steady level of a metric series: median over the final tenth (at least one
// sample). Plots bottom out into noise floors; the tail median reads the
// floor off without hand-picking a window.
inline double steady_level(const std::vector<double>& series) {
    require(!series.empty(), "steady level of an empty series");
    const std::size_t tail = std::max<std::size_t>(1, series.size() / 10);
    return median(std::vector<double>(series.end() - static_cast<std::ptrdiff_t>(tail), series.end()));
}

// Fraction of the top k entries shared by two rankings, order-insensitive
// within the top block.
inline double top_k_overlap(const std::vector<int>& learned, const std::vector<int>& truth, int k) {
    require(k >= 1, "top-k comparison needs k >= 1");
    require(learned.size() >= static_cast<std::size_t>(k) &&
                truth.size() >= static_cast<std::size_t>(k),
            "rankings shorter than k");
    const std::set<int> expected(truth.begin(), truth.begin() + k);
    int hits = 0;
    for (int pos = 0; pos < k; ++pos)
        hits += expected.count(learned[static_cast<std::size_t>(pos)]) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(k);
}

// Reference ranking computed from the true models and network: centrality
// times the summed divergence of every wrong hypothesis from the true one.
inline std::vector<int> ground_truth_ranking(const BernoulliLikelihood& models,
                                             const CombinationMatrix& a_star, int theta_star) {
    const int n = models.agents();
    require(a_star.size() == n, "network size disagrees with the models");
    require(theta_star >= 0 && theta_star < models.hypotheses(), "theta_star out of range");
    const Vector u = perron_vector(a_star);
    Vector scores(n);
    for (int k = 0; k < n; ++k) {
        double total = 0.0;
        for (int theta = 0; theta < models.hypotheses(); ++theta)
            if (theta != theta_star) total += models.kl_divergence(k, theta_star, theta);
        scores(k) = u(k) * total;
    }
    return rank_agents(scores);
}

inline double compare_influence(const InfluenceReport& report, const BernoulliLikelihood& models,
                                const CombinationMatrix& a_star, int theta_star, int k) {
    return top_k_overlap(report.ranking, ground_truth_ranking(models, a_star, theta_star), k);
}

// One likelihood profile: which agents carry informative models and how
// strongly. Several regimes in a scenario share graphs and seeds, so runs
// differ only in the models.
struct ModelRegime {
    std::string name = "default";
    std::vector<int> influential{0, 1, 2};
    double sigma_influential = 0.5;
    double sigma_base = 0.05;
};

// One learner setting replayed against the simulated streams.
struct VariantSpec {
    std::string name;
    GslConfig learner;
    bool known_llr = false;
};

struct ScenarioConfig {
    std::string name = "custom";
    int n_agents = 20;
    double edge_prob = 0.2;
    int n_hypotheses = 5;
    double delta = 0.05;
    int theta_star = 0;
    int theta_ref = 0;
    long n_iterations = 0;  // total, including the burn-in prefix
    long burn_in = -1;      // negative selects the delta-derived default
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int rolling_window = 1;
    bool score_influence = false;
    PerturbationSchedule perturbation;
    std::vector<ModelRegime> regimes{ModelRegime{}};
    std::vector<VariantSpec> variants;  // empty: simulate and score only
};

// Post-burn-in metric series for one (regime, variant, seed) triple. The
// learner columns stay empty for simulate-only runs; hit records per
// iteration whether the majority vote matched the active true state.
struct RunSeries {
    std::string run_id;
    std::uint64_t seed = 0;
    long first_iteration = 0;
    std::vector<double> a_error;
    std::vector<double> llr_error;
    std::vector<double> rate;
    std::vector<std::uint8_t> hit;
    double initial_a_error = std::numeric_limits<double>::quiet_NaN();
    double initial_llr_error = std::numeric_limits<double>::quiet_NaN();
    double planted_overlap = std::numeric_limits<double>::quiet_NaN();
    double truth_overlap = std::numeric_limits<double>::quiet_NaN();
};

// Iterations until the cumulative accuracy, restarted at switch_iteration,
// first exceeds the threshold; -1 when it never does.
inline long recovery_iterations(const RunSeries& run, long switch_iteration, double threshold) {
    require(!run.hit.empty(), "recovery time needs recorded iterations");
    const long idx = switch_iteration - run.first_iteration;
    require(idx >= 0 && idx < static_cast<long>(run.hit.size()),
            "switch iteration outside the recorded range");
    long correct = 0;
    for (long j = idx; j < static_cast<long>(run.hit.size()); ++j) {
        correct += run.hit[static_cast<std::size_t>(j)];
        const long seen = j - idx + 1;
        if (static_cast<double>(correct) / static_cast<double>(seen) > threshold) return seen;
    }
    return -1;
}

// Seed-medians keyed by run id. Entries are NaN where a metric does not
// apply (no learner, or no post-burn-in iterations for the rate).
struct ScenarioSummary {
    std::map<std::string, double> steady_a_error;
    std::map<std::string, double> steady_llr_error;
    std::map<std::string, double> terminal_rate;
    std::map<std::string, double> planted_overlap;
};

struct ScenarioCheck {
    std::string message;
    bool passed = false;
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<RunSeries> runs;  // grouped by run id, seeds in config order
    ScenarioSummary summary;
    std::vector<ScenarioCheck> checks;
    bool passed = true;
};

namespace detail {

struct ScenarioJob {
    std::size_t regime = 0;
    int variant = -1;  // index into variants, -1 = simulate only
    std::string run_id;
};

inline std::vector<ScenarioJob> scenario_jobs(const ScenarioConfig& config) {
    const bool lone_default =
        config.regimes.size() == 1 && config.regimes.front().name == "default";
    std::vector<ScenarioJob> jobs;
    for (std::size_t r = 0; r < config.regimes.size(); ++r) {
        const std::string& regime = config.regimes[r].name;
        if (config.variants.empty()) {
            jobs.push_back({r, -1, lone_default ? std::string("sim") : regime});
            continue;
        }
        for (std::size_t v = 0; v < config.variants.size(); ++v) {
            const std::string& variant = config.variants[v].name;
            jobs.push_back({r, static_cast<int>(v),
                            lone_default ? variant : regime + "/" + variant});
        }
    }
    return jobs;
}

inline RunSeries replay_job(const ScenarioConfig& config, const ScenarioJob& job,
                            const ModelRegime& regime, const BernoulliLikelihood& models,
                            const SimulationTrace& trace, long burn, std::uint64_t seed) {
    RunSeries run;
    run.run_id = job.run_id;
    run.seed = seed;
    run.first_iteration = burn;

    std::unique_ptr<GslLearner> learner;
    if (job.variant >= 0) {
        const VariantSpec& variant = config.variants[static_cast<std::size_t>(job.variant)];
        const int width = config.n_hypotheses - 1;
        const Matrix truth = models.expected_llr_matrix(config.theta_star, config.theta_ref);
        learner = variant.known_llr
                      ? std::make_unique<GslLearner>(config.n_agents, width, variant.learner, truth)
                      : std::make_unique<GslLearner>(config.n_agents, width, variant.learner);
        run.initial_a_error = reconstruction_error(learner->a_estimate(),
                                                   trace.matrix_at(0).weights);
        run.initial_llr_error = (learner->llr() - truth).squaredNorm();
    }

    std::map<int, Matrix> truth_by_state;
    long correct = 0;
    long seen = 0;
    for (std::size_t t = static_cast<std::size_t>(burn); t < trace.records.size(); ++t) {
        const TraceRecord& rec = trace.records[t];
        const bool ok = majority_vote(rec.map) == rec.theta_star;
        correct += ok ? 1 : 0;
        ++seen;
        run.hit.push_back(ok ? 1 : 0);
        run.rate.push_back(static_cast<double>(correct) / static_cast<double>(seen));
        if (!learner) continue;
        learner->advance(rec.lambda);
        run.a_error.push_back(reconstruction_error(learner->a_estimate(),
                                                   trace.matrix_at(rec.iteration).weights));
        auto it = truth_by_state.find(rec.theta_star);
        if (it == truth_by_state.end())
            it = truth_by_state
                     .emplace(rec.theta_star,
                              models.expected_llr_matrix(rec.theta_star, config.theta_ref))
                     .first;
        run.llr_error.push_back((learner->llr() - it->second).squaredNorm());
    }

    if (learner && config.score_influence && !trace.records.empty()) {
        const InfluenceReport report = build_influence_report(
            learner->a_estimate(), learner->llr(), trace.records, config.theta_ref);
        const int k = static_cast<int>(regime.influential.size());
        if (k >= 1 && k <= config.n_agents) {
            run.planted_overlap = top_k_overlap(report.ranking, regime.influential, k);
            run.truth_overlap = compare_influence(
                report, models, trace.matrix_at(trace.records.back().iteration),
                config.theta_star, k);
        }
    }
    return run;
}

inline std::vector<RunSeries> run_seed(const ScenarioConfig& config,
                                       const std::vector<ScenarioJob>& jobs, long burn,
                                       std::uint64_t seed) {
    const DirectedGraph graph = generate_erdos_renyi(config.n_agents, config.edge_prob, seed);
    const CombinationMatrix a0 = uniform_combination_matrix(graph);
    std::vector<RunSeries> out;
    out.reserve(jobs.size());
    for (std::size_t r = 0; r < config.regimes.size(); ++r) {
        const ModelRegime& regime = config.regimes[r];
        const BernoulliLikelihood models = generate_models(
            config.n_hypotheses,
            make_sigma_profile(config.n_agents, regime.influential, regime.sigma_influential,
                               regime.sigma_base),
            seed + 100);
        SimulationConfig sim{graph, a0, models};
        sim.theta_star = config.theta_star;
        sim.theta_ref = config.theta_ref;
        sim.delta = config.delta;
        sim.n_iterations = config.n_iterations;
        sim.burn_in = burn;
        sim.seed = seed + 200;
        sim.perturbation = config.perturbation;
        const SimulationTrace trace = run_simulation(sim);
        for (const ScenarioJob& job : jobs) {
            if (job.regime != r) continue;
            out.push_back(replay_job(config, job, regime, models, trace, burn, seed));
        }
    }
    return out;
}

inline double summary_median(const std::vector<double>& values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    return median(values);
}

}  // namespace detail

// Full sweep: per seed, regenerate graph and models, simulate once per
// regime, replay every learner variant against the shared trace, then reduce
// to seed-median summaries. Seeds execute concurrently and are merged in
// config order, so results are deterministic.
inline ScenarioResult run_scenario(const ScenarioConfig& config) {
    require(!config.seeds.empty(), "scenario needs at least one seed");
    require(!config.regimes.empty(), "scenario needs at least one regime");
    require(config.n_iterations >= 0, "iteration count must be non-negative");
    require(config.rolling_window >= 1, "rolling window must be positive");
    const long burn = config.burn_in >= 0 ? config.burn_in : default_burn_in(config.delta);
    const std::vector<detail::ScenarioJob> jobs = detail::scenario_jobs(config);

    std::vector<std::future<std::vector<RunSeries>>> pending;
    pending.reserve(config.seeds.size());
    for (std::uint64_t seed : config.seeds)
        pending.push_back(std::async(std::launch::async, [&config, &jobs, burn, seed] {
            return detail::run_seed(config, jobs, burn, seed);
        }));
    std::vector<std::vector<RunSeries>> by_seed;
    by_seed.reserve(pending.size());
    for (auto& future : pending) by_seed.push_back(future.get());

    ScenarioResult result;
    result.config = config;
    for (std::size_t j = 0; j < jobs.size(); ++j)
        for (std::size_t s = 0; s < config.seeds.size(); ++s)
            result.runs.push_back(std::move(by_seed[s][j]));

    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const std::string& id = jobs[j].run_id;
        std::vector<double> steady_a, steady_llr, terminal, planted;
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
            const RunSeries& run = result.runs[j * config.seeds.size() + s];
            if (jobs[j].variant >= 0)
                steady_a.push_back(run.a_error.empty() ? run.initial_a_error
                                                       : steady_level(run.a_error));
            if (jobs[j].variant >= 0)
                steady_llr.push_back(run.llr_error.empty()
                                         ? run.initial_llr_error
                                         : steady_level(rolling_mean(run.llr_error,
                                                                     config.rolling_window)));
            if (!run.rate.empty()) terminal.push_back(run.rate.back());
            if (!std::isnan(run.planted_overlap)) planted.push_back(run.planted_overlap);
        }
        result.summary.steady_a_error[id] = detail::summary_median(steady_a);
        result.summary.steady_llr_error[id] = detail::summary_median(steady_llr);
        result.summary.terminal_rate[id] = detail::summary_median(terminal);
        if (!planted.empty()) result.summary.planted_overlap[id] = median(planted);
    }
    return result;
}

// Built-in scenario checks, matched by name; unknown names carry no checks.
// Thresholds quote the seed-median protocol used throughout.
inline void apply_scenario_checks(ScenarioResult& result) {
    const ScenarioConfig& config = result.config;
    const ScenarioSummary& summary = result.summary;
    auto add = [&result](std::string message, bool ok) {
        result.checks.push_back({std::move(message), ok});
        result.passed = result.passed && ok;
    };

    if (config.name == "fig3_msd") {
        const double known = summary.steady_a_error.at("known");
        const double m50 = summary.steady_a_error.at("M50");
        const double m10 = summary.steady_a_error.at("M10");
        const double m1 = summary.steady_a_error.at("M1");
        add("steady network error ordered known < M50 < M10 < M1",
            known < m50 && m50 < m10 && m10 < m1);
    } else if (config.name == "fig4_llr") {
        const double m1 = summary.steady_llr_error.at("M1");
        const double m10 = summary.steady_llr_error.at("M10");
        const double m50 = summary.steady_llr_error.at("M50");
        add("steady likelihood error strictly decreases across M in {1,10,50}",
            m1 > m10 && m10 > m50);
    } else if (config.name == "fig5_influence") {
        std::size_t perfect = 0;
        std::size_t scored = 0;
        for (const RunSeries& run : result.runs) {
            if (std::isnan(run.planted_overlap)) continue;
            ++scored;
            if (run.planted_overlap >= 0.999) ++perfect;
        }
        add("planted influential agents fully recovered on a majority of seeds",
            scored > 0 && 2 * perfect > scored);
    } else if (config.name == "fig6_rate") {
        const double strong = summary.terminal_rate.at("influential");
        const double flat = summary.terminal_rate.at("uniform");
        add("networks with influential agents classify above 0.9", strong > 0.9);
        add("weakly informative networks classify strictly worse", flat < strong);
    } else if (config.name == "fig7a_topology") {
        const long period = config.perturbation.topology_period;
        const long burn = result.runs.empty() ? 0 : result.runs.front().first_iteration;
        std::vector<std::pair<long, long>> spans;
        long start = burn;
        for (long b = period; b < config.n_iterations; b += period) {
            if (b > start) spans.emplace_back(start, b);
            start = b;
        }
        if (config.n_iterations > start) spans.emplace_back(start, config.n_iterations);
        bool ok = spans.size() >= 2;
        if (ok) {
            std::vector<std::vector<double>> levels(spans.size());
            for (const RunSeries& run : result.runs) {
                for (std::size_t e = 0; e < spans.size(); ++e) {
                    const auto lo = static_cast<std::size_t>(spans[e].first - burn);
                    const auto hi = static_cast<std::size_t>(spans[e].second - burn);
                    levels[e].push_back(steady_level(std::vector<double>(
                        run.a_error.begin() + static_cast<std::ptrdiff_t>(lo),
                        run.a_error.begin() + static_cast<std::ptrdiff_t>(hi))));
                }
            }
            const double baseline = median(levels.front());
            for (std::size_t e = 1; e < spans.size() && ok; ++e)
                ok = median(levels[e]) <= 2.0 * baseline;
        }
        add("network error stays within 2x the pre-perturbation level after each rewiring",
            ok);
    } else if (config.name == "fig7b_truth") {
        const long switch_at = config.perturbation.theta_switches.front().iteration;
        const long budget = 3 * default_burn_in(config.delta);
        std::vector<double> recoveries;
        for (const RunSeries& run : result.runs) {
            const long steps = recovery_iterations(run, switch_at, 0.9);
            recoveries.push_back(steps < 0 ? static_cast<double>(config.n_iterations)
                                           : static_cast<double>(steps));
        }
        add("classification recovers above 0.9 within three adaptation time constants",
            median(recoveries) <= static_cast<double>(budget));
    }
}

inline void write_scenario_csv(std::ostream& out, const ScenarioResult& result) {
    out << "run_id,seed,i,a_error,llr_error,r_i\n";
    out.precision(17);
    for (const RunSeries& run : result.runs) {
        for (std::size_t j = 0; j < run.rate.size(); ++j) {
            out << run.run_id << ',' << run.seed << ','
                << run.first_iteration + static_cast<long>(j) << ',';
            if (j < run.a_error.size()) out << run.a_error[j];
            else out << "nan";
            out << ',';
            if (j < run.llr_error.size()) out << run.llr_error[j];
            else out << "nan";
            out << ',' << run.rate[j] << '\n';
        }
    }
}

inline nlohmann::json scenario_result_to_json(const ScenarioResult& result) {
    auto number_or_null = [](double value) {
        return std::isnan(value) ? nlohmann::json() : nlohmann::json(value);
    };
    auto map_to_json = [&](const std::map<std::string, double>& values) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [key, value] : values) out[key] = number_or_null(value);
        return out;
    };
    nlohmann::json checks = nlohmann::json::array();
    for (const ScenarioCheck& check : result.checks)
        checks.push_back({{"message", check.message}, {"passed", check.passed}});
    nlohmann::json scores = nlohmann::json::array();
    for (const RunSeries& run : result.runs) {
        if (std::isnan(run.planted_overlap) && std::isnan(run.truth_overlap)) continue;
        scores.push_back({{"run_id", run.run_id},
                          {"seed", run.seed},
                          {"planted_overlap", number_or_null(run.planted_overlap)},
                          {"truth_overlap", number_or_null(run.truth_overlap)}});
    }
    return {{"name", result.config.name},
            {"passed", result.passed},
            {"checks", checks},
            {"steady_a_error", map_to_json(result.summary.steady_a_error)},
            {"steady_llr_error", map_to_json(result.summary.steady_llr_error)},
            {"terminal_rate", map_to_json(result.summary.terminal_rate)},
            {"planted_overlap", map_to_json(result.summary.planted_overlap)},
            {"influence_scores", scores}};
}

namespace detail {

inline VariantSpec paper_variant(std::string name, double mu, int window, double delta,
                                 bool known = false) {
    VariantSpec variant;
    variant.name = std::move(name);
    variant.learner.mu = mu;
    variant.learner.window = window;
    variant.learner.delta = delta;
    variant.known_llr = known;
    return variant;
}

}  // namespace detail

// Named reference scenarios. Window sizes pair with the step sizes that keep
// the noise floors comparable: (50, 0.1), (10, 0.01), (1, 0.001).
inline ScenarioConfig builtin_scenario(const std::string& name) {
    ScenarioConfig config;
    config.name = name;
    const long burn = default_burn_in(config.delta);
    config.burn_in = burn;
    if (name == "fig3_msd") {
        config.n_iterations = burn + 5000;
        config.variants = {detail::paper_variant("known", 0.1, 50, config.delta, true),
                           detail::paper_variant("M50", 0.1, 50, config.delta),
                           detail::paper_variant("M10", 0.01, 10, config.delta),
                           detail::paper_variant("M1", 0.001, 1, config.delta)};
    } else if (name == "fig4_llr") {
        config.n_iterations = burn + 5000;
        config.rolling_window = 50;
        config.variants = {detail::paper_variant("M1", 0.001, 1, config.delta),
                           detail::paper_variant("M10", 0.01, 10, config.delta),
                           detail::paper_variant("M50", 0.1, 50, config.delta)};
    } else if (name == "fig5_influence") {
        config.n_iterations = burn + 5000;
        config.score_influence = true;
        config.variants = {detail::paper_variant("M50", 0.1, 50, config.delta)};
    } else if (name == "fig6_rate") {
        config.n_iterations = burn + 2000;
        config.seeds.resize(15);
        for (std::size_t s = 0; s < config.seeds.size(); ++s) config.seeds[s] = s + 1;
        config.regimes = {ModelRegime{"influential", {0, 1, 2}, 0.5, 0.05},
                          ModelRegime{"uniform", {}, 0.5, 0.05}};
    } else if (name == "fig7a_topology") {
        config.n_iterations = burn + 5000;
        config.perturbation.topology_period = 1000;
        config.perturbation.flip_prob = 0.005;
        config.variants = {detail::paper_variant("M50", 0.1, 50, config.delta)};
    } else if (name == "fig7b_truth") {
        config.n_iterations = burn + 5000;
        config.perturbation.theta_switches = {{burn + 2500, 1}};
        config.variants = {detail::paper_variant("M50", 0.1, 50, config.delta)};
    } else {
        throw std::invalid_argument("unknown scenario: " + name);
    }
    return config;
}

inline ScenarioConfig scenario_from_json(const nlohmann::json& spec) {
    ScenarioConfig config;
    config.name = spec.value("name", config.name);
    config.n_agents = spec.value("n_agents", config.n_agents);
    config.edge_prob = spec.value("edge_prob", config.edge_prob);
    config.n_hypotheses = spec.value("n_hypotheses", config.n_hypotheses);
    config.delta = spec.value("delta", config.delta);
    config.theta_star = spec.value("theta_star", config.theta_star);
    config.theta_ref = spec.value("theta_ref", config.theta_ref);
    config.n_iterations = spec.value("n_iterations", config.n_iterations);
    config.burn_in = spec.value("burn_in", config.burn_in);
    if (spec.contains("seeds")) config.seeds = spec.at("seeds").get<std::vector<std::uint64_t>>();
    config.rolling_window = spec.value("rolling_window", config.rolling_window);
    config.score_influence = spec.value("score_influence", config.score_influence);
    if (spec.contains("perturbation")) {
        const nlohmann::json& p = spec.at("perturbation");
        config.perturbation.topology_period =
            p.value("topology_period", config.perturbation.topology_period);
        config.perturbation.flip_prob = p.value("flip_prob", config.perturbation.flip_prob);
        for (const nlohmann::json& s : p.value("theta_switches", nlohmann::json::array()))
            config.perturbation.theta_switches.push_back(
                {s.at("iteration").get<long>(), s.at("theta").get<int>()});
    }
    if (spec.contains("regimes")) {
        config.regimes.clear();
        for (const nlohmann::json& r : spec.at("regimes")) {
            ModelRegime regime;
            regime.name = r.value("name", regime.name);
            if (r.contains("influential"))
                regime.influential = r.at("influential").get<std::vector<int>>();
            regime.sigma_influential = r.value("sigma_influential", regime.sigma_influential);
            regime.sigma_base = r.value("sigma_base", regime.sigma_base);
            config.regimes.push_back(std::move(regime));
        }
    }
    for (const nlohmann::json& v : spec.value("variants", nlohmann::json::array())) {
        VariantSpec variant;
        variant.name = v.at("name").get<std::string>();
        variant.learner.mu = v.value("mu", variant.learner.mu);
        variant.learner.delta = v.value("delta", config.delta);
        variant.learner.window = v.value("window", variant.learner.window);
        variant.learner.batch = v.value("batch", variant.learner.batch);
        variant.learner.l1_weight = v.value("l1_weight", variant.learner.l1_weight);
        variant.learner.burn_in = v.value("burn_in", variant.learner.burn_in);
        variant.known_llr = v.value("known_llr", variant.known_llr);
        config.variants.push_back(std::move(variant));
    }
    return config;
}

}  // namespace graphsl
