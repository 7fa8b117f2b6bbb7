#pragma once

// Brute-force reference implementations used only by tests. They work on
// plain nested vectors and share no code with the library.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

struct Unit {
    Vec w;
    std::vector<Vec> c;
};

inline double sq(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

/// alpha_0 |x - w|^2 + sum_k alpha_k |C_k - c_k|^2, written out term by term.
inline double weighted_distance(const Unit& u, const Vec& x, const std::vector<Vec>& global,
                                const Vec& alpha) {
    double d = alpha[0] * sq(x, u.w);
    for (std::size_t k = 0; k < u.c.size(); ++k) d += alpha[k + 1] * sq(global[k], u.c[k]);
    return d;
}

struct Ranked {
    std::size_t bmu;
    std::size_t second;
    double distance;
};

/// Full sort of (distance, index) pairs; first two entries are winner and runner-up.
inline Ranked exhaustive_bmu(const std::vector<Unit>& units, const Vec& x,
                             const std::vector<Vec>& global, const Vec& alpha) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < units.size(); ++j)
        all.emplace_back(weighted_distance(units[j], x, global, alpha), j);
    std::sort(all.begin(), all.end());
    return {all[0].second, all[1].second, all[0].first};
}

/// Dense-matrix predecessor walk: s(i) = argmax_n P[n][s(i-1)] over neurons
/// not yet in the walk, smallest index on ties, stop at zero evidence.
inline std::vector<std::size_t> predecessor_walk(const std::vector<std::vector<std::uint64_t>>& p,
                                                 std::size_t source, std::size_t length) {
    std::vector<std::size_t> ids{source};
    for (std::size_t i = 1; i <= length; ++i) {
        const std::size_t cur = ids.back();
        std::size_t best = p.size();
        std::uint64_t best_count = 0;
        for (std::size_t n = 0; n < p.size(); ++n) {
            if (std::find(ids.begin(), ids.end(), n) != ids.end()) continue;
            if (p[n][cur] > best_count) {
                best_count = p[n][cur];
                best = n;
            }
        }
        if (best == p.size()) break;
        ids.push_back(best);
    }
    return ids;
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace oracle
