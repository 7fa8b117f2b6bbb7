#include "gwr/temporal_synapses.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gwr {

void TemporalSynapses::resize(std::size_t neuron_count) {
    if (neuron_count > incoming_.size()) incoming_.resize(neuron_count);
}

void TemporalSynapses::check(NeuronId id) const {
    if (id >= incoming_.size())
        throw std::out_of_range("temporal synapses: unknown neuron id " + std::to_string(id));
}

void TemporalSynapses::record(NeuronId prev, NeuronId curr) {
    check(prev);
    check(curr);
    ++incoming_[curr][prev];
    ++total_;
}

std::uint64_t TemporalSynapses::count(NeuronId prev, NeuronId curr) const {
    check(prev);
    check(curr);
    const auto& col = incoming_[curr];
    const auto it = col.find(prev);
    return it == col.end() ? 0 : it->second;
}

const std::map<NeuronId, std::uint64_t>& TemporalSynapses::predecessors(NeuronId curr) const {
    check(curr);
    return incoming_[curr];
}

std::vector<TemporalSynapses::Entry> TemporalSynapses::entries() const {
    std::vector<Entry> out;
    for (NeuronId curr = 0; curr < incoming_.size(); ++curr)
        for (const auto& [prev, c] : incoming_[curr])
            if (c > 0) out.emplace_back(prev, curr, c);
    std::sort(out.begin(), out.end());
    return out;
}

void TemporalSynapses::set(NeuronId prev, NeuronId curr, std::uint64_t count) {
    check(prev);
    check(curr);
    auto& slot = incoming_[curr][prev];
    total_ = total_ - slot + count;
    slot = count;
    if (count == 0) incoming_[curr].erase(prev);
}

}  // namespace gwr
