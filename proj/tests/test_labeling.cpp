#include <doctest.h>

#include "gwr/label_associations.hpp"
#include "gwr/learning.hpp"
#include "helpers.hpp"

using namespace gwr;

TEST_CASE("record_label") {
    LabelAssociations h(6);
    h.record(3, "cup");
    CHECK(h.count(3, "cup") == 1);
    for (int i = 0; i < 3; ++i) h.record(3, "cup");
    h.record(3, "can");
    h.record(3, "can");
    CHECK(h.count(3, "cup") == 4);
    CHECK(h.count(3, "can") == 2);
    CHECK(h.row(5).empty());
    CHECK(h.count(5, "cup") == 0);
    CHECK(h.count(3, "never") == 0);
    CHECK_THROWS_AS(h.record(6, "cup"), std::out_of_range);
    CHECK(h.training_total() == 6);
    h.record(3, "cup", LabelSource::replay);
    CHECK(h.training_total() == 6);
    CHECK(h.replay_total() == 1);
    CHECK(h.total() == 7);
}

TEST_CASE("predict") {
    LabelAssociations h(4);
    for (int i = 0; i < 4; ++i) h.record(0, "cup");
    h.record(0, "can");
    h.record(0, "can");
    CHECK(h.predict(0) == std::optional<std::string>("cup"));
    CHECK_FALSE(h.predict(1));
    for (int i = 0; i < 3; ++i) h.record(2, "a");
    for (int i = 0; i < 3; ++i) h.record(2, "b");
    CHECK(h.predict(2) == std::optional<std::string>("a"));

    SUBCASE("argmax is invariant under uniform scaling") {
        LabelAssociations scaled(4);
        const LabelId a = scaled.intern("a"), b = scaled.intern("b");
        scaled.add(1, b, 3);
        scaled.add(1, a, 5);
        for (std::uint64_t k : {1u, 2u, 7u, 100u}) {
            LabelAssociations s(4);
            s.intern("a");
            s.intern("b");
            s.add(1, b, 3 * k);
            s.add(1, a, 5 * k);
            CHECK(s.predict(1) == scaled.predict(1));
        }
    }
}

TEST_CASE("classify_sample") {
    auto net = testing::make_network({{0, 0}, {1, 0}, {0, 1}, {5, 5}}, HyperParams{});
    LabelAssociations h(4);
    for (int i = 0; i < 4; ++i) h.record(3, "cup");
    const auto before_net = net;
    const auto before_h = h;
    ContextState ctx = net.fresh_context();
    const Vector x{5, 5};
    const auto id = classify_sample(net, h, x, ctx);
    REQUIRE(id);
    CHECK(h.label_name(*id) == "cup");
    CHECK(ctx.prev_bmu == NeuronId{3});
    CHECK_FALSE(classify_sample(net, h, Vector{0, 0}, ctx));
    CHECK(net == before_net);
    CHECK(h == before_h);
    CHECK(net.step_count() == 0);

    ContextState a = net.fresh_context(), b = net.fresh_context();
    for (const Vector& v : {Vector{0, 0}, Vector{5, 4}, Vector{1, 0}})
        CHECK(classify_sample(net, h, v, a) == classify_sample(net, h, v, b));
}

TEST_CASE("training labels sum to labelled presentations") {
    HyperParams hp;
    hp.max_neurons = 30;
    std::mt19937_64 rng(8);
    auto net = Network::growing(2, hp, Vector{0, 0}, Vector{1, 1});
    SideTables tables;
    std::uint64_t labelled = 0;
    for (int i = 0; i < 600; ++i) {
        if (i % 15 == 0) net.reset_sequence();
        const auto x = oracle::random_vec(rng, 2, 3.0);
        const bool has = i % 3 != 0;
        labelled += has;
        step(net, Sample{x, has ? std::optional<std::string_view>(i % 2 ? "p" : "q") : std::nullopt},
             tables);
    }
    std::uint64_t sum = 0;
    for (NeuronId j = 0; j < net.size(); ++j)
        for (const auto& cell : tables.labels.row(j)) sum += cell.second;
    CHECK(sum == labelled);
    CHECK(tables.labels.training_total() == labelled);
}
