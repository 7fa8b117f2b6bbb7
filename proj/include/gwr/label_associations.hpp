#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gwr/network.hpp"

namespace gwr {

using LabelId = std::uint32_t;

enum class LabelSource { training, replay };

/// Frequency table H(j, l): how many labelled presentations had neuron j as
/// winner. The label universe grows as labels are first seen. Each row keeps
/// its labels in first-seen order, which is also the tie-break order.
class LabelAssociations {
public:
    using Cell = std::pair<LabelId, std::uint64_t>;

    explicit LabelAssociations(std::size_t neuron_count = 0) : rows_(neuron_count) {}

    std::size_t neuron_count() const { return rows_.size(); }
    void resize(std::size_t neuron_count);

    LabelId intern(std::string_view label);
    std::optional<LabelId> find_label(std::string_view label) const;
    const std::string& label_name(LabelId id) const;
    const std::vector<std::string>& labels() const { return names_; }

    void record(NeuronId neuron, std::string_view label,
                LabelSource source = LabelSource::training);
    void add(NeuronId neuron, LabelId label, std::uint64_t count);

    std::uint64_t count(NeuronId neuron, std::string_view label) const;
    std::span<const Cell> row(NeuronId neuron) const;

    /// Most frequent label of the neuron; absent for a neuron never labelled.
    std::optional<LabelId> predict_id(NeuronId neuron) const;
    std::optional<std::string> predict(NeuronId neuron) const;

    std::uint64_t total() const { return training_total_ + replay_total_; }
    std::uint64_t training_total() const { return training_total_; }
    std::uint64_t replay_total() const { return replay_total_; }
    void set_totals(std::uint64_t training, std::uint64_t replay);

    bool operator==(const LabelAssociations& other) const {
        return rows_ == other.rows_ && names_ == other.names_ &&
               training_total_ == other.training_total_ && replay_total_ == other.replay_total_;
    }

private:
    void check(NeuronId id) const;

    std::vector<std::vector<Cell>> rows_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, LabelId> index_;
    std::uint64_t training_total_ = 0;
    std::uint64_t replay_total_ = 0;
};

}  // namespace gwr
