#pragma once

#include <filesystem>
#include <iosfwd>

#include "gwr/learning.hpp"

namespace gwr {

inline constexpr int kSnapshotVersion = 1;

struct Snapshot {
    Network network;
    SideTables tables;
};

/// Line-oriented text document holding the complete learner state:
/// hyperparameters, neurons, edges, temporal context, P and H as sparse
/// triples. Doubles are written in shortest round-trip form, so
/// write(read(text)) == text.
void write_snapshot(std::ostream& out, const Network& net, const SideTables& tables);
Snapshot read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const Network& net,
                   const SideTables& tables);
Snapshot load_snapshot(const std::filesystem::path& path);

/// Human-readable summary: hyperparameters, sizes, per-neuron label and degree.
void dump_snapshot(std::ostream& out, const Snapshot& snap, bool with_vectors = false);

}  // namespace gwr
