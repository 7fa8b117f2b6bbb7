#include "gwr/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace gwr {

const char* to_string(Mode mode) { return mode == Mode::fixed ? "static" : "growing"; }

Mode parse_mode(const std::string& text) {
    if (text == "static") return Mode::fixed;
    if (text == "growing") return Mode::growing;
    throw std::invalid_argument("unknown mode '" + text + "' (expected static|growing)");
}

ContextState::ContextState(std::size_t depth, std::size_t dim) : global(depth, Vector(dim, 0.0)) {}

void ContextState::reset() {
    for (auto& c : global) std::fill(c.begin(), c.end(), 0.0);
    prev_bmu.reset();
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double activity(double distance) {
    if (!(distance >= 0.0)) throw std::invalid_argument("activity: distance must be >= 0");
    return std::exp(-distance);
}

double habituate(double h, double tau, double kappa) {
    return std::clamp(h + tau * kappa * (1.0 - h) - tau, 0.0, 1.0);
}

Network::Network(Mode mode, HyperParams hyper, std::size_t dim, std::uint64_t seed)
    : mode_(mode), hyper_(std::move(hyper)), dim_(dim), rng_seed_(seed),
      context_(hyper_.context_depth, dim) {
    hyper_.validate();
    if (dim_ == 0) throw std::invalid_argument("network dimension must be >= 1");
}

Network Network::growing(std::size_t dim, HyperParams hyper, std::span<const double> first,
                         std::span<const double> second) {
    Network net(Mode::growing, std::move(hyper), dim, 0);
    net.check_input(first);
    net.check_input(second);
    const std::vector<Vector> zero(net.hyper_.context_depth, Vector(dim, 0.0));
    net.push_neuron(Vector(first.begin(), first.end()), zero);
    net.push_neuron(Vector(second.begin(), second.end()), zero);
    return net;
}

Network Network::fixed(std::size_t dim, HyperParams hyper, std::span<const double> low,
                       std::span<const double> high, std::uint64_t seed) {
    Network net(Mode::fixed, std::move(hyper), dim, seed);
    if (low.size() != dim || high.size() != dim)
        throw std::invalid_argument("static init: bounds must match the input dimension");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(low[i] <= high[i]) || !std::isfinite(low[i]) || !std::isfinite(high[i]))
            throw std::invalid_argument("static init: invalid bounds in dimension " +
                                        std::to_string(i));
    }
    std::mt19937_64 rng(seed);
    const std::vector<Vector> zero(net.hyper_.context_depth, Vector(dim, 0.0));
    for (std::size_t n = 0; n < net.hyper_.max_neurons; ++n) {
        Vector w(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (low[i] == high[i]) {
                w[i] = low[i];
            } else {
                std::uniform_real_distribution<double> u(low[i], high[i]);
                w[i] = u(rng);
            }
        }
        net.push_neuron(std::move(w), zero);
    }
    return net;
}

Network Network::restore(Mode mode, HyperParams hyper, std::size_t dim, std::uint64_t seed,
                         std::vector<Neuron> neurons,
                         const std::vector<std::pair<NeuronId, NeuronId>>& edges,
                         ContextState context, std::uint64_t step_count) {
    Network net(mode, std::move(hyper), dim, seed);
    if (neurons.size() < 2 || neurons.size() > net.hyper_.max_neurons)
        throw std::invalid_argument("restore: neuron count outside [2, max_neurons]");
    for (std::size_t i = 0; i < neurons.size(); ++i) {
        auto& n = neurons[i];
        if (n.id != i) throw std::invalid_argument("restore: neuron ids must be dense");
        net.check_input(n.weight);
        if (n.contexts.size() != net.hyper_.context_depth)
            throw std::invalid_argument("restore: wrong number of neuron contexts");
        for (const auto& c : n.contexts) net.check_input(c);
        if (n.habituation < 0.0 || n.habituation > 1.0)
            throw std::invalid_argument("restore: habituation outside [0,1]");
        net.push_neuron(std::move(n.weight), std::move(n.contexts));
        net.neurons_.back().habituation = n.habituation;
    }
    for (const auto& [a, b] : edges) net.connect(a, b);
    if (context.global.size() != net.hyper_.context_depth)
        throw std::invalid_argument("restore: wrong global context depth");
    for (const auto& c : context.global) net.check_input(c);
    if (context.prev_bmu) net.check_id(*context.prev_bmu);
    net.context_ = std::move(context);
    net.step_count_ = step_count;
    return net;
}

void Network::check_id(NeuronId id) const {
    if (id >= neurons_.size())
        throw std::out_of_range("unknown neuron id " + std::to_string(id));
}

void Network::check_input(std::span<const double> input) const {
    if (input.size() != dim_)
        throw std::invalid_argument("input dimension " + std::to_string(input.size()) +
                                    " does not match network dimension " + std::to_string(dim_));
}

NeuronId Network::push_neuron(Vector weight, std::vector<Vector> contexts) {
    const auto id = static_cast<NeuronId>(neurons_.size());
    neurons_.push_back(Neuron{id, std::move(weight), std::move(contexts), 1.0});
    adjacency_.emplace_back();
    return id;
}

const Neuron& Network::neuron(NeuronId id) const {
    check_id(id);
    return neurons_[id];
}

Neuron& Network::mutable_neuron(NeuronId id) {
    check_id(id);
    return neurons_[id];
}

const std::set<NeuronId>& Network::neighbors(NeuronId id) const {
    check_id(id);
    return adjacency_[id];
}

bool Network::has_edge(NeuronId a, NeuronId b) const {
    check_id(a);
    check_id(b);
    return adjacency_[a].contains(b);
}

std::size_t Network::edge_count() const {
    std::size_t twice = 0;
    for (const auto& adj : adjacency_) twice += adj.size();
    return twice / 2;
}

std::vector<std::pair<NeuronId, NeuronId>> Network::edges() const {
    std::vector<std::pair<NeuronId, NeuronId>> out;
    for (NeuronId a = 0; a < adjacency_.size(); ++a)
        for (NeuronId b : adjacency_[a])
            if (a < b) out.emplace_back(a, b);
    return out;
}

double Network::distance(NeuronId id, std::span<const double> input,
                         const ContextState& ctx) const {
    check_id(id);
    check_input(input);
    const Neuron& n = neurons_[id];
    double d = hyper_.alpha[0] * squared_distance(input, n.weight);
    for (std::size_t k = 0; k < hyper_.context_depth; ++k)
        d += hyper_.alpha[k + 1] * squared_distance(ctx.global[k], n.contexts[k]);
    return d;
}

Match Network::find_bmu(std::span<const double> input, const ContextState& ctx) const {
    if (neurons_.size() < 2) throw std::logic_error("find_bmu needs at least two neurons");
    check_input(input);
    constexpr double inf = std::numeric_limits<double>::infinity();
    Match m;
    double best = inf;
    double runner = inf;
    for (NeuronId id = 0; id < neurons_.size(); ++id) {
        const double d = distance(id, input, ctx);
        if (d < best) {
            runner = best;
            m.second = m.bmu;
            best = d;
            m.bmu = id;
        } else if (d < runner) {
            runner = d;
            m.second = id;
        }
    }
    // Only reachable when distances are not finite.
    if (m.second == m.bmu) {
        runner = inf;
        for (NeuronId id = 0; id < neurons_.size(); ++id) {
            if (id == m.bmu) continue;
            const double d = distance(id, input, ctx);
            if (d < runner) {
                runner = d;
                m.second = id;
            }
        }
    }
    m.distance = best;
    return m;
}

void Network::advance_context(ContextState& ctx) const {
    if (!ctx.prev_bmu) {
        ctx.reset();
        return;
    }
    const Neuron& b = neuron(*ctx.prev_bmu);
    const double beta = hyper_.beta;
    for (std::size_t k = 0; k < hyper_.context_depth; ++k) {
        const Vector* blend = nullptr;
        if (hyper_.context_form == ContextForm::literal)
            blend = &b.contexts[k];
        else
            blend = k == 0 ? &b.weight : &b.contexts[k - 1];
        Vector& out = ctx.global[k];
        for (std::size_t i = 0; i < dim_; ++i)
            out[i] = beta * b.weight[i] + (1.0 - beta) * (*blend)[i];
    }
}

std::vector<NeuronId> Network::adapt(NeuronId bmu, std::span<const double> input) {
    check_id(bmu);
    check_input(input);
    std::vector<NeuronId> touched;
    touched.reserve(adjacency_[bmu].size() + 1);
    touched.push_back(bmu);
    touched.insert(touched.end(), adjacency_[bmu].begin(), adjacency_[bmu].end());

    for (NeuronId id : touched) {
        Neuron& n = neurons_[id];
        const double rate = (id == bmu ? hyper_.eps_bmu : hyper_.eps_neighbor) * n.habituation;
        for (std::size_t i = 0; i < dim_; ++i) n.weight[i] += rate * (input[i] - n.weight[i]);
        for (std::size_t k = 0; k < hyper_.context_depth; ++k) {
            const Vector& target = context_.global[k];
            Vector& c = n.contexts[k];
            for (std::size_t i = 0; i < dim_; ++i) c[i] += rate * (target[i] - c[i]);
        }
    }
    for (NeuronId id : touched) {
        Neuron& n = neurons_[id];
        const double tau = id == bmu ? hyper_.tau_bmu : hyper_.tau_neighbor;
        n.habituation = habituate(n.habituation, tau, hyper_.kappa);
    }
    return touched;
}

std::optional<NeuronId> Network::maybe_insert(std::span<const double> input, NeuronId bmu,
                                              NeuronId second, double activity) {
    if (mode_ != Mode::growing) return std::nullopt;
    check_id(bmu);
    check_id(second);
    check_input(input);
    if (!(activity < hyper_.insertion_threshold)) return std::nullopt;
    if (!(neurons_[bmu].habituation < hyper_.habituation_threshold)) return std::nullopt;
    if (neurons_.size() >= hyper_.max_neurons) return std::nullopt;

    const Neuron& b = neurons_[bmu];
    Vector w(dim_);
    for (std::size_t i = 0; i < dim_; ++i) w[i] = 0.5 * (b.weight[i] + input[i]);
    std::vector<Vector> contexts(hyper_.context_depth, Vector(dim_));
    for (std::size_t k = 0; k < hyper_.context_depth; ++k)
        for (std::size_t i = 0; i < dim_; ++i)
            contexts[k][i] = 0.5 * (context_.global[k][i] + b.contexts[k][i]);

    const NeuronId id = push_neuron(std::move(w), std::move(contexts));
    connect(id, bmu);
    if (second != bmu) connect(id, second);
    disconnect(bmu, second);
    return id;
}

void Network::connect(NeuronId a, NeuronId b) {
    check_id(a);
    check_id(b);
    if (a == b) throw std::invalid_argument("connect: self-edge on neuron " + std::to_string(a));
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
}

void Network::disconnect(NeuronId a, NeuronId b) {
    check_id(a);
    check_id(b);
    adjacency_[a].erase(b);
    adjacency_[b].erase(a);
}

void Network::finish_step(NeuronId bmu, bool count_step) {
    check_id(bmu);
    context_.prev_bmu = bmu;
    if (count_step) ++step_count_;
}

}  // namespace gwr
