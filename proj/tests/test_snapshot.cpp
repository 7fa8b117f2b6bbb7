#include <doctest.h>

#include <random>
#include <sstream>

#include "gwr/learning.hpp"
#include "gwr/snapshot.hpp"
#include "helpers.hpp"

using namespace gwr;

namespace {

void train(Network& net, SideTables& tables, std::mt19937_64& rng, int steps) {
    for (int i = 0; i < steps; ++i) {
        if (i % 12 == 0) net.reset_sequence();
        const auto x = oracle::random_vec(rng, 3, 2.0);
        step(net, Sample{x, i % 3 ? "a" : "b,\"c\" d"}, tables);
    }
}

std::string serialize(const Network& net, const SideTables& tables) {
    std::ostringstream out;
    write_snapshot(out, net, tables);
    return out.str();
}

}  // namespace

TEST_CASE("snapshot round-trip") {
    HyperParams h;
    h.max_neurons = 25;
    std::mt19937_64 rng(12);
    auto net = Network::growing(3, h, Vector{0, 0, 0}, Vector{1, 1, 1});
    SideTables tables;
    train(net, tables, rng, 300);
    tables.labels.record(0, "extra", LabelSource::replay);

    const std::string first = serialize(net, tables);
    std::istringstream in(first);
    const Snapshot snap = read_snapshot(in);
    CHECK(snap.network == net);
    CHECK(snap.tables == tables);
    CHECK(serialize(snap.network, snap.tables) == first);

    std::ostringstream dump;
    dump_snapshot(dump, snap, true);
    CHECK(dump.str().find("neurons") != std::string::npos);
}

TEST_CASE("static snapshot keeps mode and seed") {
    HyperParams h;
    h.max_neurons = 8;
    auto net = Network::fixed(2, h, Vector{0, 0}, Vector{1, 1}, 99);
    SideTables tables;
    tables.sync(net);
    std::istringstream in(serialize(net, tables));
    const Snapshot snap = read_snapshot(in);
    CHECK(snap.network.mode() == Mode::fixed);
    CHECK(snap.network.rng_seed() == 99);
    CHECK(snap.network == net);
}

TEST_CASE("malformed snapshots are rejected") {
    std::istringstream wrong_version("gwr-snapshot 2\n");
    CHECK_THROWS(read_snapshot(wrong_version));
    std::istringstream garbage("hello\n");
    CHECK_THROWS(read_snapshot(garbage));

    auto net = testing::make_network({{0, 0}, {1, 1}}, HyperParams{});
    SideTables tables;
    tables.sync(net);
    std::string text = serialize(net, tables);
    text = text.substr(0, text.size() / 2);
    std::istringstream truncated(text);
    CHECK_THROWS(read_snapshot(truncated));
}
