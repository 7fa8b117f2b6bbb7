#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "gwr/label_associations.hpp"
#include "gwr/network.hpp"
#include "gwr/temporal_synapses.hpp"

namespace gwr {

/// Tables updated alongside the network at every training step.
struct SideTables {
    TemporalSynapses synapses;
    LabelAssociations labels;

    /// Grows both tables to cover every neuron of `net`.
    void sync(const Network& net);

    bool operator==(const SideTables&) const = default;
};

struct Sample {
    std::span<const double> features;
    std::optional<std::string_view> label;
};

struct StepOutcome {
    NeuronId bmu_id = 0;
    NeuronId second_id = 0;
    double distance = 0.0;
    double activity = 0.0;
    std::optional<NeuronId> inserted;
    std::vector<NeuronId> adapted_ids;
    // Winner habituation and network size as seen by the insertion test.
    double bmu_habituation = 1.0;
    std::size_t neurons_before = 0;
};

struct StepOptions {
    bool allow_insertion = true;
    bool record_transition = true;
    LabelSource label_source = LabelSource::training;
    bool count_step = true;
};

/// One learning iteration: context update, winner search, bookkeeping, then
/// either growth (which replaces adaptation for this step) or adaptation and
/// Hebbian wiring of winner and runner-up.
StepOutcome step(Network& net, const Sample& sample, SideTables& tables,
                 const StepOptions& options = {});

/// Evaluation-mode readout. Advances `ctx` exactly as training would but
/// leaves the network and tables untouched. Reset `ctx` at sequence starts.
std::optional<LabelId> classify_sample(const Network& net, const LabelAssociations& labels,
                                       std::span<const double> input, ContextState& ctx);

}  // namespace gwr
