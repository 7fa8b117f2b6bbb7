#include "gwr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "gwr/config.hpp"
#include "gwr/dataset.hpp"
#include "gwr/protocols.hpp"
#include "gwr/snapshot.hpp"

namespace gwr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Validation failures map to exit code 2, everything else to 1.
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------- gen-data

struct GenDataArgs {
    SyntheticSpec spec;
    std::uint64_t seed = 7;
    std::string out;
};

int cmd_gen_data(const GenDataArgs& args, std::ostream& out) {
    try {
        args.spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationFailure(e.what());
    }
    const Dataset data = generate_synthetic(args.spec, args.seed);
    std::ostringstream text;
    write_features(text, data);
    write_file(args.out, text.str());
    out << "wrote " << data.frame_count() << " frames in " << data.sequences.size()
        << " sequences (" << data.categories().size() << " categories, "
        << data.instances().size() << " instances, " << data.sessions().size()
        << " sessions, dim " << data.dim << ") to " << args.out << '\n';
    return kOk;
}

// --------------------------------------------------------------------- run

json config_json(const RunConfig& cfg) {
    const HyperParams& h = cfg.protocol.hyper;
    const ProtocolSpec& p = cfg.protocol;
    json model = {{"insertion_threshold", h.insertion_threshold},
                  {"habituation_threshold", h.habituation_threshold},
                  {"tau_bmu", h.tau_bmu},
                  {"tau_neighbor", h.tau_neighbor},
                  {"kappa", h.kappa},
                  {"eps_bmu", h.eps_bmu},
                  {"eps_neighbor", h.eps_neighbor},
                  {"alpha", h.alpha},
                  {"beta", h.beta},
                  {"context_depth", h.context_depth},
                  {"max_neurons", h.max_neurons},
                  {"context_form", to_string(h.context_form)}};
    json protocol = {{"kind", to_string(p.kind)},   {"mode", to_string(p.mode)},
                     {"replay", p.replay},          {"trials", p.trials},
                     {"seed", p.seed},              {"test_sessions", p.test_sessions},
                     {"record_timing", p.record_timing}};
    if (cfg.epochs_set) protocol["epochs"] = p.epochs;
    json data;
    if (cfg.features) {
        data = {{"features", cfg.features->string()}};
    } else {
        const SyntheticSpec& s = cfg.synthetic;
        data = {{"categories", s.categories}, {"instances", s.instances},
                {"sessions", s.sessions},     {"dim", s.dim},
                {"frames", s.frames_per_sequence}, {"spread", s.cluster_spread},
                {"walk_step", s.walk_step},   {"noise", s.noise},
                {"seed", cfg.data_seed}};
    }
    return {{"model", model}, {"protocol", protocol}, {"data", data}};
}

json summary_json(const RunConfig& cfg, const RunResult& result) {
    json checkpoints = json::array();
    for (const auto& s : summarize(result.records())) {
        checkpoints.push_back({{"checkpoint", s.checkpoint},
                               {"trials", s.trials},
                               {"acc_overall_mean", s.acc_overall_mean},
                               {"acc_overall_std", s.acc_overall_std},
                               {"acc_seen_mean", s.acc_seen_mean},
                               {"acc_seen_std", s.acc_seen_std},
                               {"n_neurons_mean", s.n_neurons_mean},
                               {"n_neurons_std", s.n_neurons_std},
                               {"forgetting_mean", s.forgetting_mean},
                               {"forgetting_std", s.forgetting_std},
                               {"replay_steps_mean", s.replay_steps_mean}});
    }
    return {{"schema_version", 1},
            {"config", config_json(cfg)},
            {"categories", result.categories},
            {"checkpoints", checkpoints}};
}

Dataset load_dataset(const RunConfig& cfg) {
    if (!cfg.features) return generate_synthetic(cfg.synthetic, cfg.data_seed);
    if (!fs::is_regular_file(*cfg.features))
        throw ValidationFailure("dataset file not found: " + cfg.features->string());
    try {
        return load_features(*cfg.features);
    } catch (const ParseError& e) {
        throw ValidationFailure(cfg.features->string() + ": " + e.what());
    }
}

int cmd_run(RunConfig cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ValidationFailure(e.what());
    }
    const Dataset data = load_dataset(cfg);
    if (cfg.protocol.test_sessions.empty()) cfg.protocol.test_sessions = default_test_sessions(data);
    Split split;
    try {
        split = split_by_sessions(data, cfg.protocol.test_sessions);
    } catch (const std::invalid_argument& e) {
        throw ValidationFailure(e.what());
    }
    for (const auto& w : split.warnings) err << "warning: " << w << '\n';
    if (split.train.sequences.empty() || split.test.sequences.empty())
        throw ValidationFailure("both training and test splits must be non-empty");
    if (fs::exists(cfg.output_dir / "metrics.csv"))
        throw ValidationFailure("output directory " + cfg.output_dir.string() +
                                " already holds a run");

    const RunResult result = run_protocol(cfg.protocol, split);

    fs::create_directories(cfg.output_dir);
    std::ostringstream metrics;
    write_metrics_csv(metrics, result.records(), result.categories);
    write_file(cfg.output_dir / "metrics.csv", metrics.str());
    write_file(cfg.output_dir / "summary.json", summary_json(cfg, result).dump(2) + "\n");
    std::ostringstream resolved;
    write_config(resolved, cfg);
    write_file(cfg.output_dir / "config.ini", resolved.str());
    if (cfg.snapshot) {
        fs::create_directories(cfg.output_dir / "snapshots");
        for (std::size_t t = 0; t < result.trials.size(); ++t) {
            std::ostringstream name;
            name << "trial_" << std::setw(3) << std::setfill('0') << t << ".gwr";
            save_snapshot(cfg.output_dir / "snapshots" / name.str(), result.trials[t].network,
                          result.trials[t].tables);
        }
    }

    const auto summary = summarize(result.records());
    const auto& last = summary.back();
    out << to_string(cfg.protocol.kind) << ' ' << to_string(cfg.protocol.mode)
        << (cfg.protocol.replay ? " +replay" : "") << ": " << result.trials.size()
        << " trials, final accuracy " << std::fixed << std::setprecision(4)
        << last.acc_overall_mean << " +/- " << last.acc_overall_std << ", neurons "
        << std::setprecision(1) << last.n_neurons_mean << '\n'
        << "outputs written to " << cfg.output_dir.string() << '\n';
    return kOk;
}

// ----------------------------------------------------------------- compare

int cmd_compare(const std::vector<std::string>& dirs, const std::string& csv_path,
                std::ostream& out) {
    if (dirs.size() < 2) throw ValidationFailure("compare needs at least two run directories");
    std::vector<json> summaries;
    for (const auto& dir : dirs) {
        const fs::path path = fs::path(dir) / "summary.json";
        std::ifstream in(path);
        if (!in) throw ValidationFailure("run directory " + dir + " has no summary.json");
        try {
            summaries.push_back(json::parse(in));
        } catch (const json::exception& e) {
            throw ValidationFailure("run directory " + dir + ": malformed summary.json (" +
                                    e.what() + ")");
        }
    }

    auto grid = [](const json& s) {
        std::vector<int> cps;
        for (const auto& c : s.at("checkpoints")) cps.push_back(c.at("checkpoint").get<int>());
        return cps;
    };
    const auto reference = grid(summaries.front());
    for (std::size_t i = 1; i < summaries.size(); ++i) {
        const auto g = grid(summaries[i]);
        if (g != reference) {
            std::ostringstream msg;
            msg << "incompatible checkpoint grids: " << dirs.front() << " has "
                << reference.size() << " checkpoints, " << dirs[i] << " has " << g.size();
            if (g.size() == reference.size()) msg << " with different indices";
            throw ValidationFailure(msg.str());
        }
    }

    auto label = [&](std::size_t i) {
        const auto& p = summaries[i].at("config").at("protocol");
        return p.at("mode").get<std::string>() + (p.at("replay").get<bool>() ? "+replay" : "");
    };

    std::ostringstream csv;
    csv << "checkpoint";
    for (std::size_t i = 0; i < dirs.size(); ++i) csv << ",run" << i << "_mean,run" << i << "_std";
    for (std::size_t i = 1; i < dirs.size(); ++i) csv << ",delta" << i;
    csv << '\n';

    out << "runs:\n";
    for (std::size_t i = 0; i < dirs.size(); ++i)
        out << "  [" << i << "] " << dirs[i] << " (" << label(i) << ")\n";
    out << "\ncheckpoint";
    for (std::size_t i = 0; i < dirs.size(); ++i) out << "  " << std::setw(17) << ("run" + std::to_string(i));
    for (std::size_t i = 1; i < dirs.size(); ++i) out << "  " << std::setw(8) << ("d" + std::to_string(i));
    out << '\n';

    std::vector<double> final_delta(dirs.size(), 0.0);
    for (std::size_t row = 0; row < reference.size(); ++row) {
        out << std::setw(10) << reference[row];
        csv << reference[row];
        std::vector<double> means;
        for (const auto& s : summaries) {
            const auto& c = s.at("checkpoints").at(row);
            const double mean = c.at("acc_overall_mean").get<double>();
            const double sd = c.at("acc_overall_std").get<double>();
            means.push_back(mean);
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(4) << mean << " +/- " << sd;
            out << "  " << std::setw(17) << cell.str();
            csv << ',' << mean << ',' << sd;
        }
        for (std::size_t i = 1; i < means.size(); ++i) {
            const double d = means[i] - means[0];
            out << "  " << std::setw(8) << std::showpos << std::fixed << std::setprecision(4) << d
                << std::noshowpos;
            csv << ',' << d;
            final_delta[i] = d;
        }
        out << '\n';
        csv << '\n';
    }
    out << "\nfinal-checkpoint accuracy deltas versus run0:\n";
    for (std::size_t i = 1; i < dirs.size(); ++i)
        out << "  run" << i << " - run0 = " << std::showpos << std::fixed << std::setprecision(2)
            << 100.0 * final_delta[i] << std::noshowpos << " points\n";
    if (!csv_path.empty()) write_file(csv_path, csv.str());
    return kOk;
}

// ----------------------------------------------------------- snapshot-dump

int cmd_snapshot_dump(const std::string& path, bool vectors, std::ostream& out) {
    if (!fs::is_regular_file(path)) throw ValidationFailure("snapshot not found: " + path);
    dump_snapshot(out, load_snapshot(path), vectors);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grow-when-required self-organizing memory: data generation, experiments, "
                 "comparisons"};
    app.require_subcommand(1);

    // gen-data
    GenDataArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic feature CSV");
    gen_cmd->add_option("--categories", gen.spec.categories, "Number of categories")
        ->capture_default_str();
    gen_cmd->add_option("--instances", gen.spec.instances, "Instances per category")
        ->capture_default_str();
    gen_cmd->add_option("--sessions", gen.spec.sessions, "Acquisition sessions")
        ->capture_default_str();
    gen_cmd->add_option("--dim", gen.spec.dim, "Feature dimension")->capture_default_str();
    gen_cmd->add_option("--frames", gen.spec.frames_per_sequence, "Frames per sequence")
        ->capture_default_str();
    gen_cmd->add_option("--spread", gen.spec.cluster_spread, "Instance spread around categories")
        ->capture_default_str();
    gen_cmd->add_option("--walk-step", gen.spec.walk_step, "Random-walk step")
        ->capture_default_str();
    gen_cmd->add_option("--noise", gen.spec.noise, "Observation noise")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();

    // run
    auto* run_cmd = app.add_subcommand("run", "Run a batch or incremental experiment");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "Configuration file");
    std::vector<std::pair<std::string, std::string>> flag_map = {
        {"--protocol", "protocol.kind"},      {"--mode", "protocol.mode"},
        {"--nmax", "model.max_neurons"},      {"--epochs", "protocol.epochs"},
        {"--trials", "protocol.trials"},      {"--seed", "protocol.seed"},
        {"--test-sessions", "protocol.test_sessions"},
        {"--parallel-trials", "protocol.parallel_trials"},
        {"--data", "data.features"},          {"--data-seed", "data.seed"},
        {"--categories", "data.categories"},  {"--instances", "data.instances"},
        {"--sessions", "data.sessions"},      {"--dim", "data.dim"},
        {"--frames", "data.frames"},          {"--spread", "data.spread"},
        {"--walk-step", "data.walk_step"},    {"--noise", "data.noise"},
        {"--out", "output.dir"}};
    std::map<std::string, std::string> flag_values;
    for (const auto& [flag, key] : flag_map)
        run_cmd->add_option(flag, flag_values[flag], "Sets " + key);
    bool replay = false, no_replay = false, snapshot = false, timing = false;
    run_cmd->add_flag("--replay", replay, "Replay activity trajectories after each episode");
    run_cmd->add_flag("--no-replay", no_replay, "Disable replay");
    run_cmd->add_flag("--snapshot", snapshot, "Write the final model of every trial");
    run_cmd->add_flag("--record-timing", timing, "Fill wall_ms (outputs stop being reproducible)");
    std::vector<std::string> overrides;
    run_cmd->add_option("--set", overrides, "Override any setting: section.key=value");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Align and compare completed runs");
    std::vector<std::string> run_dirs;
    std::string cmp_csv;
    cmp_cmd->add_option("runs", run_dirs, "Run directories")->required();
    cmp_cmd->add_option("--out", cmp_csv, "Also write the table as CSV");

    // snapshot-dump
    auto* dump_cmd = app.add_subcommand("snapshot-dump", "Pretty-print a model snapshot");
    std::string snapshot_path;
    bool vectors = false;
    dump_cmd->add_option("snapshot", snapshot_path, "Snapshot file")->required();
    dump_cmd->add_flag("--vectors", vectors, "Include weight vectors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen_data(gen, out);
        if (run_cmd->parsed()) {
            RunConfig cfg;
            try {
                if (!config_path.empty()) apply_config_file(cfg, config_path);
                for (const auto& [flag, key] : flag_map)
                    if (run_cmd->count(flag) > 0) cfg.set(key, flag_values[flag]);
                if (replay) cfg.set("protocol.replay", "true");
                if (no_replay) cfg.set("protocol.replay", "false");
                if (snapshot) cfg.set("output.snapshot", "true");
                if (timing) cfg.set("protocol.record_timing", "true");
                for (const auto& o : overrides) {
                    const auto eq = o.find('=');
                    if (eq == std::string::npos)
                        throw ConfigError("--set expects section.key=value, got '" + o + "'");
                    cfg.set(o.substr(0, eq), o.substr(eq + 1));
                }
            } catch (const ConfigError& e) {
                throw ValidationFailure(e.what());
            }
            return cmd_run(std::move(cfg), out, err);
        }
        if (cmp_cmd->parsed()) return cmd_compare(run_dirs, cmp_csv, out);
        if (dump_cmd->parsed()) return cmd_snapshot_dump(snapshot_path, vectors, out);
    } catch (const ValidationFailure& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kValidationError;
}

}  // namespace gwr::cli
