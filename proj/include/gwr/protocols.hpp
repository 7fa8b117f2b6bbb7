#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gwr/dataset.hpp"
#include "gwr/learning.hpp"

namespace gwr {

enum class ProtocolKind { batch, incremental };

const char* to_string(ProtocolKind kind);
ProtocolKind parse_protocol(const std::string& text);

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::incremental;
    Mode mode = Mode::growing;
    bool replay = false;
    HyperParams hyper;  // hyper.max_neurons is the shared capacity
    int epochs = 0;     // batch only
    int trials = 10;
    std::uint64_t seed = 1;
    std::vector<int> test_sessions;  // empty selects default_test_sessions()
    int parallel_trials = 1;
    bool record_timing = false;  // wall_ms stays 0 otherwise, keeping outputs reproducible

    void validate() const;
};

struct MetricsRecord {
    int trial = 0;
    int checkpoint = 0;  // epoch (batch) or encountered-category count (incremental)
    Mode mode = Mode::growing;
    bool replay = false;
    std::size_t n_neurons = 0;
    double acc_overall = 0.0;
    double acc_seen = 0.0;
    double forgetting_mean = 0.0;
    std::size_t replay_steps = 0;
    double wall_ms = 0.0;
    std::vector<double> acc_category;  // full test split, one per category
    std::vector<bool> encountered;

    bool operator==(const MetricsRecord&) const = default;
};

struct Evaluation {
    double overall = 0.0;
    std::vector<double> per_category;  // NaN where the category has no test frames
    std::vector<std::size_t> correct;
    std::vector<std::size_t> frames;
};

/// Frame-level instance accuracy. Each test sequence starts from a reset
/// context; unlabelled winners count as wrong.
Evaluation evaluate(const Network& net, const LabelAssociations& labels, const Dataset& test,
                    const std::vector<std::string>& categories);

/// Per category: peak accuracy over checkpoints where it was encountered
/// minus its final accuracy. Absent for categories never encountered.
std::vector<std::optional<double>> forgetting_metrics(const std::vector<MetricsRecord>& records);

struct StepEvent {
    int trial = 0;
    const Network* network = nullptr;
    const StepOutcome* outcome = nullptr;
};
using StepObserver = std::function<void(const StepEvent&)>;

struct TrialResult {
    std::vector<MetricsRecord> records;
    Network network;
    SideTables tables;
};

struct RunResult {
    ProtocolSpec spec;
    std::vector<std::string> categories;
    std::vector<TrialResult> trials;

    std::vector<MetricsRecord> records() const;
};

/// Seed of trial `trial` derived from the master seed.
std::uint64_t trial_seed(std::uint64_t master, int trial);

RunResult run_batch(const ProtocolSpec& spec, const Split& split,
                    const StepObserver& observer = {});
RunResult run_incremental(const ProtocolSpec& spec, const Split& split,
                          const StepObserver& observer = {});
RunResult run_protocol(const ProtocolSpec& spec, const Split& split,
                       const StepObserver& observer = {});

struct CheckpointSummary {
    int checkpoint = 0;
    std::size_t trials = 0;
    double acc_overall_mean = 0.0, acc_overall_std = 0.0;
    double acc_seen_mean = 0.0, acc_seen_std = 0.0;
    double n_neurons_mean = 0.0, n_neurons_std = 0.0;
    double forgetting_mean = 0.0, forgetting_std = 0.0;
    double replay_steps_mean = 0.0;
};

/// Mean and sample standard deviation across trials per checkpoint.
std::vector<CheckpointSummary> summarize(const std::vector<MetricsRecord>& records);

/// First checkpoint (1-based) whose value reaches `fraction` of the last one.
int checkpoints_to_fraction(const std::vector<double>& trace, double fraction);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records,
                       const std::vector<std::string>& categories);

}  // namespace gwr
