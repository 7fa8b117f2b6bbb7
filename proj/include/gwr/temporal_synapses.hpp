#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "gwr/network.hpp"

namespace gwr {

/// Directed transition counts P(i, j): how often neuron i won immediately
/// before neuron j within a sequence. Stored by target so the predecessor
/// column of a neuron is a single lookup.
class TemporalSynapses {
public:
    using Entry = std::tuple<NeuronId, NeuronId, std::uint64_t>;

    explicit TemporalSynapses(std::size_t neuron_count = 0) : incoming_(neuron_count) {}

    std::size_t neuron_count() const { return incoming_.size(); }
    /// Tracks network growth; never shrinks.
    void resize(std::size_t neuron_count);

    void record(NeuronId prev, NeuronId curr);
    std::uint64_t count(NeuronId prev, NeuronId curr) const;
    /// Predecessor -> count for transitions into `curr`, ascending by id.
    const std::map<NeuronId, std::uint64_t>& predecessors(NeuronId curr) const;

    std::uint64_t total() const { return total_; }
    /// Nonzero entries sorted by (prev, curr).
    std::vector<Entry> entries() const;
    void set(NeuronId prev, NeuronId curr, std::uint64_t count);

    bool operator==(const TemporalSynapses&) const = default;

private:
    void check(NeuronId id) const;

    std::vector<std::map<NeuronId, std::uint64_t>> incoming_;
    std::uint64_t total_ = 0;
};

}  // namespace gwr
