#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "gwr/hyper_params.hpp"

namespace gwr {

using Vector = std::vector<double>;
using NeuronId = std::uint32_t;

enum class Mode { fixed, growing };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct Neuron {
    NeuronId id = 0;
    Vector weight;
    std::vector<Vector> contexts;  // c_{j,1} .. c_{j,K}
    double habituation = 1.0;

    bool operator==(const Neuron&) const = default;
};

/// Global temporal context C_1..C_K plus the winner of the previous step.
/// Training keeps one inside the Network; evaluation uses its own copy so a
/// frozen network can be queried without mutation.
struct ContextState {
    std::vector<Vector> global;
    std::optional<NeuronId> prev_bmu;

    ContextState() = default;
    ContextState(std::size_t depth, std::size_t dim);

    /// Sequence boundary: zero every C_k and forget the previous winner.
    void reset();

    bool operator==(const ContextState&) const = default;
};

struct Match {
    NeuronId bmu = 0;
    NeuronId second = 0;
    double distance = 0.0;
};

/// Dynamic neuron set with undirected topology and temporal context.
///
/// Neuron ids are dense and stable: neurons are never removed, so id equals
/// the position in `neurons()`.
class Network {
public:
    /// Two neurons copying the first inputs, zero contexts, no edges.
    static Network growing(std::size_t dim, HyperParams hyper,
                           std::span<const double> first, std::span<const double> second);

    /// `hyper.max_neurons` neurons drawn uniformly inside [low, high] per dimension.
    static Network fixed(std::size_t dim, HyperParams hyper, std::span<const double> low,
                         std::span<const double> high, std::uint64_t seed);

    /// Rebuilds a network from serialized parts; validates every invariant.
    static Network restore(Mode mode, HyperParams hyper, std::size_t dim, std::uint64_t seed,
                           std::vector<Neuron> neurons,
                           const std::vector<std::pair<NeuronId, NeuronId>>& edges,
                           ContextState context, std::uint64_t step_count);

    std::size_t size() const { return neurons_.size(); }
    std::size_t dim() const { return dim_; }
    Mode mode() const { return mode_; }
    const HyperParams& hyper() const { return hyper_; }
    std::uint64_t rng_seed() const { return rng_seed_; }
    std::uint64_t step_count() const { return step_count_; }

    const std::vector<Neuron>& neurons() const { return neurons_; }
    const Neuron& neuron(NeuronId id) const;
    Neuron& mutable_neuron(NeuronId id);

    const std::set<NeuronId>& neighbors(NeuronId id) const;
    bool has_edge(NeuronId a, NeuronId b) const;
    std::size_t edge_count() const;
    /// Every edge once, as (smaller, larger), sorted.
    std::vector<std::pair<NeuronId, NeuronId>> edges() const;

    const ContextState& context() const { return context_; }
    ContextState& mutable_context() { return context_; }
    ContextState fresh_context() const { return ContextState(hyper_.context_depth, dim_); }

    /// Context-weighted squared distance of `input` to neuron `id` under `ctx`.
    double distance(NeuronId id, std::span<const double> input, const ContextState& ctx) const;
    double distance(NeuronId id, std::span<const double> input) const {
        return distance(id, input, context_);
    }

    /// Winner and runner-up; ties go to the smaller id.
    Match find_bmu(std::span<const double> input, const ContextState& ctx) const;
    Match find_bmu(std::span<const double> input) const { return find_bmu(input, context_); }

    /// Recomputes `ctx.global` from `ctx.prev_bmu` (zero when absent).
    void advance_context(ContextState& ctx) const;
    void update_global_context() { advance_context(context_); }

    /// Moves the winner and its topological neighbours towards the input and
    /// current context, then habituates them. Returns the ids touched,
    /// winner first.
    std::vector<NeuronId> adapt(NeuronId bmu, std::span<const double> input);

    /// Growth rule. Only fires in growing mode when activity and winner
    /// habituation are both under threshold and capacity remains.
    std::optional<NeuronId> maybe_insert(std::span<const double> input, NeuronId bmu,
                                         NeuronId second, double activity);

    void connect(NeuronId a, NeuronId b);
    void disconnect(NeuronId a, NeuronId b);

    void reset_sequence() { context_.reset(); }
    /// Bookkeeping at the end of a training step.
    void finish_step(NeuronId bmu, bool count_step);

    bool operator==(const Network&) const = default;

private:
    Network(Mode mode, HyperParams hyper, std::size_t dim, std::uint64_t seed);

    void check_id(NeuronId id) const;
    void check_input(std::span<const double> input) const;
    NeuronId push_neuron(Vector weight, std::vector<Vector> contexts);

    Mode mode_ = Mode::growing;
    HyperParams hyper_;
    std::size_t dim_ = 0;
    std::uint64_t rng_seed_ = 0;
    std::uint64_t step_count_ = 0;
    std::vector<Neuron> neurons_;
    std::vector<std::set<NeuronId>> adjacency_;
    ContextState context_;
};

/// Network activity for a winner distance: exp(-d), in (0, 1].
double activity(double distance);

/// One habituation update h + tau*kappa*(1-h) - tau, clamped to [0, 1].
double habituate(double h, double tau, double kappa);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace gwr
