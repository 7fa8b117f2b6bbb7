#include "gwr/hyper_params.hpp"

#include <stdexcept>

namespace gwr {

std::string to_string(ContextForm form) {
    return form == ContextForm::recursive ? "recursive" : "literal";
}

ContextForm parse_context_form(const std::string& text) {
    if (text == "recursive") return ContextForm::recursive;
    if (text == "literal") return ContextForm::literal;
    throw std::invalid_argument("unknown context form '" + text + "'");
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool open_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

void HyperParams::validate() const {
    require(open_unit(insertion_threshold), "insertion_threshold must lie in (0,1)");
    require(open_unit(habituation_threshold), "habituation_threshold must lie in (0,1)");
    require(tau_bmu > 0.0 && tau_neighbor > 0.0, "tau_bmu and tau_neighbor must be > 0");
    require(kappa > 1.0, "kappa must be > 1");
    require(open_unit(eps_bmu) && open_unit(eps_neighbor), "learning rates must lie in (0,1)");
    require(eps_neighbor < eps_bmu, "eps_neighbor must be smaller than eps_bmu");
    require(alpha.size() == context_depth + 1, "alpha must have context_depth + 1 entries");
    for (double a : alpha) require(a >= 0.0, "alpha entries must be >= 0");
    require(open_unit(beta), "beta must lie in (0,1)");
    require(max_neurons >= 2, "max_neurons must be >= 2");
}

}  // namespace gwr
