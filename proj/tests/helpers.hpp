#pragma once

#include <vector>

#include "gwr/network.hpp"
#include "oracles.hpp"

namespace testing {

inline gwr::HyperParams plain_hyper(std::size_t depth = 0) {
    gwr::HyperParams h;
    h.context_depth = depth;
    h.alpha.assign(depth + 1, 0.0);
    h.alpha[0] = 1.0;
    for (std::size_t k = 1; k <= depth; ++k) h.alpha[k] = 0.5 / double(k);
    return h;
}

/// Network with the given weights, zero contexts, full habituation.
inline gwr::Network make_network(const std::vector<gwr::Vector>& weights, gwr::HyperParams hyper,
                                 gwr::Mode mode = gwr::Mode::growing) {
    std::vector<gwr::Neuron> neurons;
    for (std::size_t i = 0; i < weights.size(); ++i)
        neurons.push_back(gwr::Neuron{
            gwr::NeuronId(i), weights[i],
            std::vector<gwr::Vector>(hyper.context_depth, gwr::Vector(weights[i].size(), 0.0)),
            1.0});
    const std::size_t dim = weights.front().size();
    gwr::ContextState ctx(hyper.context_depth, dim);
    return gwr::Network::restore(mode, hyper, dim, 0, std::move(neurons), {}, ctx, 0);
}

/// Random network for oracle comparisons; returns the oracle's view too.
inline gwr::Network random_network(std::mt19937_64& rng, std::size_t count, std::size_t dim,
                                   std::size_t depth, std::vector<oracle::Unit>& units,
                                   std::vector<oracle::Vec>& global) {
    gwr::HyperParams h = plain_hyper(depth);
    std::uniform_real_distribution<double> a(0.0, 1.0);
    for (auto& x : h.alpha) x = a(rng);
    h.max_neurons = std::max<std::size_t>(count, 2);
    std::vector<gwr::Neuron> neurons;
    units.clear();
    for (std::size_t i = 0; i < count; ++i) {
        oracle::Unit u{oracle::random_vec(rng, dim), {}};
        for (std::size_t k = 0; k < depth; ++k) u.c.push_back(oracle::random_vec(rng, dim));
        neurons.push_back(gwr::Neuron{gwr::NeuronId(i), u.w, u.c, 1.0});
        units.push_back(u);
    }
    gwr::ContextState ctx(depth, dim);
    global.clear();
    for (std::size_t k = 0; k < depth; ++k) {
        global.push_back(oracle::random_vec(rng, dim));
        ctx.global[k] = global.back();
    }
    return gwr::Network::restore(gwr::Mode::growing, h, dim, 0, std::move(neurons), {}, ctx, 0);
}

}  // namespace testing
