#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gwr {

/// How the global context C_k is derived from the previous winner.
///
/// `recursive` blends the winner's weight with its context one level
/// shallower (c_{b,k-1}, with c_{b,0} = w_b), so every depth carries a
/// different delay. `literal` blends with c_{b,k} at the same depth, which
/// makes all K contexts evolve identically; it is kept for comparison runs.
enum class ContextForm { recursive, literal };

std::string to_string(ContextForm form);
ContextForm parse_context_form(const std::string& text);

/// Training hyperparameters of the recurrent grow-when-required network.
/// Defaults are the published settings used for both static and growing
/// networks; `max_neurons` is the shared capacity bound.
struct HyperParams {
    double insertion_threshold = 0.3;    // a_T, activity below which growth is allowed
    double habituation_threshold = 0.1;  // h_T, winner must be this habituated
    double tau_bmu = 0.3;
    double tau_neighbor = 0.1;
    double kappa = 1.05;
    double eps_bmu = 0.5;
    double eps_neighbor = 0.005;
    std::vector<double> alpha{0.67, 0.24, 0.09};  // alpha_0 (input) .. alpha_K
    double beta = 0.7;
    std::size_t context_depth = 2;  // K
    std::size_t max_neurons = 2500;
    ContextForm context_form = ContextForm::recursive;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    /// Lower bound that habituation counters approach, 1 - 1/kappa.
    double habituation_floor() const { return 1.0 - 1.0 / kappa; }

    bool operator==(const HyperParams&) const = default;
};

}  // namespace gwr
