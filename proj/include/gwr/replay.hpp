#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gwr/learning.hpp"

namespace gwr {

/// Recurrent neural activity trajectory seeded at `source_id`.
///
/// `ids[0]` is the source; each following element is the most frequent
/// predecessor of the one before it, so the list runs backwards in time.
/// At most K + 2 elements (indices 0..K+1); shorter when the synapses hold
/// no unvisited predecessor.
struct Rnat {
    NeuronId source_id = 0;
    std::vector<NeuronId> ids;
    std::vector<Vector> weights;
    std::vector<std::optional<std::string>> labels;

    bool operator==(const Rnat&) const = default;
};

/// Builds the trajectory for one neuron. Pure in (synapses, weights, labels).
Rnat generate_rnat(const Network& net, const TemporalSynapses& synapses,
                   const LabelAssociations& labels, NeuronId source_id);

struct ReplayReport {
    std::size_t trajectories = 0;
    std::size_t steps = 0;
};

/// Generates one trajectory per neuron from a frozen snapshot and presents
/// each, oldest element first, through the learning step with growth and
/// transition recording disabled. Labels go to the replay tally.
ReplayReport replay_episode(Network& net, SideTables& tables);

}  // namespace gwr
