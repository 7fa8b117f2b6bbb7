#include "gwr/replay.hpp"

#include <algorithm>

namespace gwr {

Rnat generate_rnat(const Network& net, const TemporalSynapses& synapses,
                   const LabelAssociations& labels, NeuronId source_id) {
    net.neuron(source_id);  // lookup check
    const std::size_t length = net.hyper().context_depth + 1;

    Rnat rnat;
    rnat.source_id = source_id;
    rnat.ids.push_back(source_id);
    for (std::size_t i = 1; i <= length; ++i) {
        const NeuronId current = rnat.ids.back();
        if (current >= synapses.neuron_count()) break;
        std::optional<NeuronId> best;
        std::uint64_t best_count = 0;
        for (const auto& [pred, count] : synapses.predecessors(current)) {
            if (pred >= net.size()) continue;
            if (std::find(rnat.ids.begin(), rnat.ids.end(), pred) != rnat.ids.end()) continue;
            if (count > best_count) {
                best = pred;
                best_count = count;
            }
        }
        if (!best) break;
        rnat.ids.push_back(*best);
    }

    for (NeuronId id : rnat.ids) {
        rnat.weights.push_back(net.neuron(id).weight);
        rnat.labels.push_back(id < labels.neuron_count() ? labels.predict(id) : std::nullopt);
    }
    return rnat;
}

ReplayReport replay_episode(Network& net, SideTables& tables) {
    tables.sync(net);
    std::vector<Rnat> trajectories;
    trajectories.reserve(net.size());
    for (NeuronId id = 0; id < net.size(); ++id)
        trajectories.push_back(generate_rnat(net, tables.synapses, tables.labels, id));

    constexpr StepOptions options{.allow_insertion = false,
                                  .record_transition = false,
                                  .label_source = LabelSource::replay,
                                  .count_step = false};
    ReplayReport report;
    report.trajectories = trajectories.size();
    for (const Rnat& rnat : trajectories) {
        if (rnat.ids.size() < 2) continue;
        net.reset_sequence();
        for (std::size_t i = rnat.ids.size(); i-- > 0;) {
            Sample sample{rnat.weights[i], std::nullopt};
            if (rnat.labels[i]) sample.label = *rnat.labels[i];
            step(net, sample, tables, options);
            ++report.steps;
        }
    }
    net.reset_sequence();
    return report;
}

}  // namespace gwr
