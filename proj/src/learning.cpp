#include "gwr/learning.hpp"

namespace gwr {

void SideTables::sync(const Network& net) {
    synapses.resize(net.size());
    labels.resize(net.size());
}

StepOutcome step(Network& net, const Sample& sample, SideTables& tables,
                 const StepOptions& options) {
    net.update_global_context();
    const Match match = net.find_bmu(sample.features);

    StepOutcome out;
    out.bmu_id = match.bmu;
    out.second_id = match.second;
    out.distance = match.distance;
    out.activity = activity(match.distance);
    out.bmu_habituation = net.neuron(match.bmu).habituation;
    out.neurons_before = net.size();

    tables.sync(net);
    if (options.record_transition && net.context().prev_bmu)
        tables.synapses.record(*net.context().prev_bmu, match.bmu);

    if (options.allow_insertion)
        out.inserted = net.maybe_insert(sample.features, match.bmu, match.second, out.activity);
    tables.sync(net);

    if (!out.inserted) {
        out.adapted_ids = net.adapt(match.bmu, sample.features);
        net.connect(match.bmu, match.second);
    }
    if (sample.label)
        tables.labels.record(out.inserted.value_or(match.bmu), *sample.label,
                             options.label_source);

    net.finish_step(match.bmu, options.count_step);
    return out;
}

std::optional<LabelId> classify_sample(const Network& net, const LabelAssociations& labels,
                                       std::span<const double> input, ContextState& ctx) {
    net.advance_context(ctx);
    const Match match = net.find_bmu(input, ctx);
    ctx.prev_bmu = match.bmu;
    if (match.bmu >= labels.neuron_count()) return std::nullopt;
    return labels.predict_id(match.bmu);
}

}  // namespace gwr
