#include "gwr/label_associations.hpp"

#include <algorithm>
#include <stdexcept>

namespace gwr {

void LabelAssociations::resize(std::size_t neuron_count) {
    if (neuron_count > rows_.size()) rows_.resize(neuron_count);
}

void LabelAssociations::check(NeuronId id) const {
    if (id >= rows_.size())
        throw std::out_of_range("label associations: unknown neuron id " + std::to_string(id));
}

LabelId LabelAssociations::intern(std::string_view label) {
    std::string key(label);
    if (const auto it = index_.find(key); it != index_.end()) return it->second;
    const auto id = static_cast<LabelId>(names_.size());
    names_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
}

std::optional<LabelId> LabelAssociations::find_label(std::string_view label) const {
    const auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& LabelAssociations::label_name(LabelId id) const {
    if (id >= names_.size()) throw std::out_of_range("unknown label id " + std::to_string(id));
    return names_[id];
}

void LabelAssociations::record(NeuronId neuron, std::string_view label, LabelSource source) {
    check(neuron);
    add(neuron, intern(label), 1);
    if (source == LabelSource::training)
        ++training_total_;
    else
        ++replay_total_;
}

void LabelAssociations::add(NeuronId neuron, LabelId label, std::uint64_t count) {
    check(neuron);
    if (label >= names_.size()) throw std::out_of_range("unknown label id " + std::to_string(label));
    auto& row = rows_[neuron];
    auto it = std::find_if(row.begin(), row.end(), [&](const Cell& c) { return c.first == label; });
    if (it == row.end())
        row.emplace_back(label, count);
    else
        it->second += count;
}

std::uint64_t LabelAssociations::count(NeuronId neuron, std::string_view label) const {
    check(neuron);
    const auto id = find_label(label);
    if (!id) return 0;
    for (const auto& [l, c] : rows_[neuron])
        if (l == *id) return c;
    return 0;
}

std::span<const LabelAssociations::Cell> LabelAssociations::row(NeuronId neuron) const {
    check(neuron);
    return rows_[neuron];
}

std::optional<LabelId> LabelAssociations::predict_id(NeuronId neuron) const {
    check(neuron);
    std::optional<LabelId> best;
    std::uint64_t best_count = 0;
    for (const auto& [l, c] : rows_[neuron]) {
        if (c > best_count) {
            best = l;
            best_count = c;
        }
    }
    return best;
}

std::optional<std::string> LabelAssociations::predict(NeuronId neuron) const {
    const auto id = predict_id(neuron);
    if (!id) return std::nullopt;
    return names_[*id];
}

void LabelAssociations::set_totals(std::uint64_t training, std::uint64_t replay) {
    training_total_ = training;
    replay_total_ = replay;
}

}  // namespace gwr
