// Command line front end: simulate social learning traces, learn the network
// back from them, rank agent influence, ingest sentiment exports and run the
// packaged experiment scenarios.

#include <graphsl/experiment.hpp>
#include <graphsl/ingest.hpp>
#include <graphsl/trace_io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace graphsl;

nlohmann::json matrix_rows_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(k, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_rows(const nlohmann::json& rows, const char* what) {
    require(rows.is_array() && !rows.empty(), std::string(what) + " must be a non-empty array");
    const auto first = rows.at(0).get<std::vector<double>>();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(first.size()));
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const auto row = rows.at(static_cast<std::size_t>(k)).get<std::vector<double>>();
        require(row.size() == static_cast<std::size_t>(m.cols()),
                std::string(what) + " rows differ in width");
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(k, c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

void ensure_parent(const std::string& path) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

struct SimulateArgs {
    int n = 20;
    double p = 0.2;
    int hypotheses = 5;
    double delta = 0.05;
    int theta_star = 0;
    int theta_ref = 0;
    long iterations = 0;
    long burn_in = -1;
    std::uint64_t seed = 1;
    std::vector<int> influential{0, 1, 2};
    double sigma_influential = 0.5;
    double sigma_base = 0.05;
    long topology_period = 0;
    double flip_prob = 0.0;
    std::vector<std::string> switches;
    std::string out;
    std::string graph_out;
    std::string matrix_out;
    std::string models_out;
};

int run_simulate(const SimulateArgs& args) {
    const DirectedGraph graph = generate_erdos_renyi(args.n, args.p, args.seed);
    const CombinationMatrix matrix = uniform_combination_matrix(graph);
    const BernoulliLikelihood models = generate_models(
        args.hypotheses,
        make_sigma_profile(args.n, args.influential, args.sigma_influential, args.sigma_base),
        args.seed + 100);

    SimulationConfig config{graph, matrix, models};
    config.theta_star = args.theta_star;
    config.theta_ref = args.theta_ref;
    config.delta = args.delta;
    config.n_iterations = args.iterations;
    config.burn_in = args.burn_in >= 0 ? args.burn_in : default_burn_in(args.delta);
    config.seed = args.seed + 200;
    config.perturbation.topology_period = args.topology_period;
    config.perturbation.flip_prob = args.flip_prob;
    for (const std::string& text : args.switches) {
        const auto colon = text.find(':');
        require(colon != std::string::npos, "switch format is ITERATION:THETA");
        config.perturbation.theta_switches.push_back(
            {std::stol(text.substr(0, colon)), std::stoi(text.substr(colon + 1))});
    }

    const SimulationTrace trace = run_simulation(config);
    ensure_parent(args.out);
    write_trace_jsonl(args.out, trace);
    if (!args.graph_out.empty()) save_json(args.graph_out, graph_to_json(graph));
    if (!args.matrix_out.empty()) save_json(args.matrix_out, combination_to_json(matrix));
    if (!args.models_out.empty())
        save_json(args.models_out, models_to_json(models, args.theta_star, args.theta_ref));

    const std::vector<double> rate = classification_rate(trace.records);
    std::cout << "simulated " << trace.records.size() << " iterations for " << args.n
              << " agents; final classification rate "
              << (rate.empty() ? 0.0 : rate.back()) << "\n";
    return 0;
}

struct LearnArgs {
    std::string trace;
    std::string config;
    std::string out_dir;
    std::string truth;
    std::string models;
};

int run_learn(const LearnArgs& args) {
    const LoadedTrace trace = read_trace_jsonl(args.trace);
    require(!trace.records.empty(), "trace holds no records");

    const nlohmann::json spec = args.config.empty() ? nlohmann::json::object()
                                                    : load_json(args.config);
    GslConfig config;
    config.mu = spec.value("mu", config.mu);
    config.delta = spec.value("delta", config.delta);
    config.window = spec.value("M", config.window);
    config.batch = spec.value("W", config.batch);
    config.l1_weight = spec.value("l1_weight", config.l1_weight);
    config.burn_in = spec.value("burn_in", config.burn_in);
    const bool known = spec.value("known_llr", false);

    std::optional<Matrix> truth_a;
    if (!args.truth.empty()) truth_a = matrix_from_json_fields(load_json(args.truth));
    std::optional<Matrix> truth_llr;
    int theta_ref = 0;
    if (!args.models.empty()) {
        const LoadedModels loaded = models_from_json(load_json(args.models));
        theta_ref = loaded.theta_ref;
        truth_llr = loaded.models.expected_llr_matrix(loaded.theta_star, loaded.theta_ref);
        require(truth_llr->rows() == trace.agents && truth_llr->cols() == trace.width,
                "models disagree with the trace shape");
    }
    require(!known || truth_llr.has_value(), "known_llr requires --models");

    GslLearner learner = known ? GslLearner(trace.agents, trace.width, config, *truth_llr)
                               : GslLearner(trace.agents, trace.width, config);

    std::filesystem::create_directories(args.out_dir);
    const std::string csv_path = args.out_dir + "/learn.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << "i,a_error,llr_error\n";
    csv.precision(17);
    for (const LoadedTraceRecord& rec : trace.records) {
        learner.advance(rec.lambda);
        csv << rec.iteration << ',';
        if (truth_a) csv << reconstruction_error(learner.a_estimate(), *truth_a);
        else csv << "nan";
        csv << ',';
        if (truth_llr) csv << (learner.llr() - *truth_llr).squaredNorm();
        else csv << "nan";
        csv << '\n';
    }

    nlohmann::json learned;
    learned["agents"] = trace.agents;
    learned["width"] = trace.width;
    learned["theta_ref"] = theta_ref;
    learned["steps"] = learner.steps();
    learned["a"] = matrix_rows_json(learner.a_estimate());
    learned["llr"] = matrix_rows_json(learner.llr());
    save_json(args.out_dir + "/learned.json", learned);

    std::cout << "learned from " << trace.records.size() << " records; estimates in "
              << args.out_dir << "/learned.json\n";
    return 0;
}

struct InfluenceArgs {
    std::string learned;
    std::string trace;
    int theta_ref = -1;
    std::string out;
    std::string csv;
};

int run_influence(const InfluenceArgs& args) {
    const nlohmann::json learned = load_json(args.learned);
    const Matrix a = matrix_from_rows(learned.at("a"), "learned matrix");
    const Matrix llr = matrix_from_rows(learned.at("llr"), "llr estimate");
    const LoadedTrace trace = read_trace_jsonl(args.trace);
    require(!trace.records.empty(), "trace holds no records");
    require(trace.agents == a.rows(), "trace and learned matrix disagree on agents");

    const int theta_ref = args.theta_ref >= 0 ? args.theta_ref
                                              : learned.value("theta_ref", 0);
    const InfluenceReport report =
        build_influence_report(a, llr, trace.records.back().lambda, theta_ref);

    ensure_parent(args.out);
    save_json(args.out, influence_report_to_json(report));
    if (!args.csv.empty()) {
        ensure_parent(args.csv);
        std::ofstream out(args.csv);
        if (!out) throw std::runtime_error("cannot write " + args.csv);
        write_influence_csv(out, report);
    }

    std::cout << "estimated true state " << report.estimated_state << "; top agents:";
    for (std::size_t pos = 0; pos < report.ranking.size() && pos < 3; ++pos)
        std::cout << ' ' << report.ranking[pos];
    std::cout << "\n";
    return 0;
}

struct IngestArgs {
    std::string posts;
    std::string out;
    double tz_offset = 0.0;
};

int run_ingest(const IngestArgs& args) {
    const std::vector<SentimentRecord> records = read_sentiment_csv_file(args.posts);
    std::size_t dropped = 0;
    const BeliefSeries series = build_belief_series(records, args.tz_offset, &dropped);
    ensure_parent(args.out);
    export_trace(series, args.out);
    std::cout << "ingested " << records.size() << " posts (" << dropped
              << " without polarity) into " << series.values.rows() << " days x "
              << series.agents.size() << " agents\n";
    return 0;
}

struct ExperimentArgs {
    std::string scenario;
    std::string out_dir;
};

int run_experiment(const ExperimentArgs& args) {
    static const std::vector<std::string> builtins{"fig3_msd",       "fig4_llr",
                                                   "fig5_influence", "fig6_rate",
                                                   "fig7a_topology", "fig7b_truth"};
    ScenarioConfig config;
    if (std::find(builtins.begin(), builtins.end(), args.scenario) != builtins.end())
        config = builtin_scenario(args.scenario);
    else
        config = scenario_from_json(load_json(args.scenario));

    ScenarioResult result = run_scenario(config);
    apply_scenario_checks(result);

    std::filesystem::create_directories(args.out_dir);
    const std::string csv_path = args.out_dir + "/" + config.name + ".csv";
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    write_scenario_csv(csv, result);
    save_json(args.out_dir + "/" + config.name + "_summary.json",
              scenario_result_to_json(result));

    for (const ScenarioCheck& check : result.checks)
        std::cout << (check.passed ? "[ok]   " : "[FAIL] ") << check.message << "\n";
    std::cout << "scenario " << config.name << (result.passed ? " passed" : " failed")
              << "; series in " << csv_path << "\n";
    return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social learning simulation and network inference toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic belief trace");
    simulate->add_option("--n", sim.n, "Number of agents");
    simulate->add_option("--p", sim.p, "Edge probability");
    simulate->add_option("--hypotheses", sim.hypotheses, "Number of hypotheses");
    simulate->add_option("--delta", sim.delta, "Adaptation weight");
    simulate->add_option("--theta-star", sim.theta_star, "True hypothesis");
    simulate->add_option("--theta-ref", sim.theta_ref, "Reference hypothesis");
    simulate->add_option("--iterations", sim.iterations, "Total iterations")->required();
    simulate->add_option("--burn-in", sim.burn_in, "Burn-in iterations (default from delta)");
    simulate->add_option("--seed", sim.seed, "Base seed")->required();
    simulate->add_option("--influential", sim.influential, "Influential agent ids");
    simulate->add_option("--sigma-influential", sim.sigma_influential,
                         "Model variance of influential agents");
    simulate->add_option("--sigma-base", sim.sigma_base, "Model variance of the rest");
    simulate->add_option("--topology-period", sim.topology_period,
                         "Iterations between topology rewirings (0 disables)");
    simulate->add_option("--flip-prob", sim.flip_prob, "Edge flip probability per rewiring");
    simulate->add_option("--theta-switch", sim.switches,
                         "Scheduled true-state change, ITERATION:THETA");
    simulate->add_option("--out", sim.out, "Trace output path (.jsonl or .jsonl.gz)")
        ->required();
    simulate->add_option("--graph-out", sim.graph_out, "Optional adjacency JSON output");
    simulate->add_option("--matrix-out", sim.matrix_out, "Optional combination matrix output");
    simulate->add_option("--models-out", sim.models_out, "Optional likelihood model output");

    LearnArgs learn;
    CLI::App* learn_cmd = app.add_subcommand("learn", "Recover the network from a trace");
    learn_cmd->add_option("--trace", learn.trace, "Input trace")->required();
    learn_cmd->add_option("--config", learn.config,
                          "Learner config JSON (mu, delta, M, W, l1_weight, burn_in, known_llr)");
    learn_cmd->add_option("--out", learn.out_dir, "Output directory")->required();
    learn_cmd->add_option("--truth", learn.truth, "True combination matrix JSON for the error column");
    learn_cmd->add_option("--models", learn.models, "True models JSON for the llr error column");

    InfluenceArgs influence;
    CLI::App* influence_cmd =
        app.add_subcommand("influence", "Rank agents from learned estimates");
    influence_cmd->add_option("--learned", influence.learned, "learned.json from the learn step")
        ->required();
    influence_cmd->add_option("--trace", influence.trace, "Trace used for the state vote")
        ->required();
    influence_cmd->add_option("--theta-ref", influence.theta_ref, "Reference hypothesis");
    influence_cmd->add_option("--out", influence.out, "Report JSON output")->required();
    influence_cmd->add_option("--csv", influence.csv, "Optional per-agent CSV output");

    IngestArgs ingest;
    CLI::App* ingest_cmd =
        app.add_subcommand("ingest", "Convert a sentiment CSV into a belief trace");
    ingest_cmd->add_option("--posts", ingest.posts, "Input CSV")->required();
    ingest_cmd->add_option("--out", ingest.out, "Trace output path")->required();
    ingest_cmd->add_option("--tz-offset", ingest.tz_offset, "Day bucketing offset in hours");

    ExperimentArgs experiment;
    CLI::App* experiment_cmd =
        app.add_subcommand("experiment", "Run a packaged or custom scenario");
    experiment_cmd->add_option("--scenario", experiment.scenario, "Builtin name or JSON path")
        ->required();
    experiment_cmd->add_option("--out", experiment.out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return run_simulate(sim);
        if (*learn_cmd) return run_learn(learn);
        if (*influence_cmd) return run_influence(influence);
        if (*ingest_cmd) return run_ingest(ingest);
        if (*experiment_cmd) return run_experiment(experiment);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 0;
}
