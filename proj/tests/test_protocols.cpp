#include <doctest.h>

#include <cmath>

#include "gwr/protocols.hpp"
#include "helpers.hpp"

using namespace gwr;

namespace {

Split small_split(std::uint64_t seed = 3) {
    SyntheticSpec s;
    s.categories = 4;
    s.instances = 2;
    s.sessions = 5;
    s.dim = 6;
    s.frames_per_sequence = 8;
    const Dataset d = generate_synthetic(s, seed);
    return split_by_sessions(d, {2, 4});
}

ProtocolSpec small_spec(ProtocolKind kind, Mode mode) {
    ProtocolSpec p;
    p.kind = kind;
    p.mode = mode;
    p.hyper.max_neurons = 40;
    p.trials = 2;
    p.seed = 5;
    p.epochs = kind == ProtocolKind::batch ? 3 : 0;
    return p;
}

MetricsRecord trace_point(double acc, bool seen) {
    MetricsRecord r;
    r.acc_category = {acc};
    r.encountered = {seen};
    return r;
}

}  // namespace

TEST_CASE("protocol spec validation") {
    auto p = small_spec(ProtocolKind::batch, Mode::growing);
    p.epochs = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = small_spec(ProtocolKind::incremental, Mode::growing);
    p.epochs = 2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.epochs = 0;
    p.trials = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(parse_protocol("online"), std::invalid_argument);
    CHECK(parse_protocol("batch") == ProtocolKind::batch);
}

TEST_CASE("run_incremental shape and bookkeeping") {
    const Split split = small_split();
    auto spec = small_spec(ProtocolKind::incremental, Mode::growing);
    std::size_t steps = 0;
    const RunResult r = run_incremental(spec, split, [&](const StepEvent&) { ++steps; });
    CHECK(r.categories.size() == 4);
    REQUIRE(r.trials.size() == 2);
    CHECK(steps == 2 * split.train.frame_count());
    for (const auto& t : r.trials) {
        REQUIRE(t.records.size() == 4);
        std::size_t prev = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& m = t.records[i];
            CHECK(m.checkpoint == int(i) + 1);
            CHECK(m.n_neurons >= prev);
            CHECK(m.n_neurons <= 40);
            CHECK(m.acc_overall >= 0.0);
            CHECK(m.acc_overall <= 1.0);
            CHECK(std::count(m.encountered.begin(), m.encountered.end(), true) == long(i) + 1);
            CHECK(m.wall_ms == 0.0);
            prev = m.n_neurons;
        }
        CHECK(t.tables.labels.training_total() == split.train.frame_count());
        CHECK(t.tables.labels.replay_total() == 0);
    }
    CHECK(run_incremental(spec, split).records() == r.records());
}

TEST_CASE("static runs keep their size") {
    const Split split = small_split();
    for (auto kind : {ProtocolKind::incremental, ProtocolKind::batch}) {
        const RunResult r = run_protocol(small_spec(kind, Mode::fixed), split);
        for (const auto& m : r.records()) CHECK(m.n_neurons == 40);
    }
}

TEST_CASE("run_batch") {
    const Split split = small_split();
    auto spec = small_spec(ProtocolKind::batch, Mode::growing);
    const RunResult r = run_batch(spec, split);
    for (const auto& t : r.trials) {
        REQUIRE(t.records.size() == 3);
        for (std::size_t i = 1; i < 3; ++i) CHECK(t.records[i].n_neurons >= t.records[i - 1].n_neurons);
        CHECK(t.tables.labels.training_total() == 3 * split.train.frame_count());
    }
    CHECK_THROWS_AS(run_batch(small_spec(ProtocolKind::incremental, Mode::growing), split),
                    std::invalid_argument);
}

TEST_CASE("replay is counted per checkpoint") {
    const Split split = small_split();
    auto spec = small_spec(ProtocolKind::incremental, Mode::growing);
    spec.replay = true;
    const RunResult r = run_incremental(spec, split);
    for (const auto& t : r.trials) {
        CHECK(t.tables.labels.training_total() == split.train.frame_count());
        std::size_t total = 0;
        for (const auto& m : t.records) total += m.replay_steps;
        CHECK(total > 0);
    }
}

TEST_CASE("trial results do not depend on scheduling") {
    const Split split = small_split();
    auto spec = small_spec(ProtocolKind::incremental, Mode::growing);
    spec.trials = 4;
    const auto serial = run_incremental(spec, split).records();
    spec.parallel_trials = 3;
    CHECK(run_incremental(spec, split).records() == serial);
    spec.trials = 1;
    spec.parallel_trials = 1;
    const auto first = run_incremental(spec, split).records();
    REQUIRE(first.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(first[i] == serial[i]);
}

TEST_CASE("evaluate") {
    Dataset test;
    test.dim = 2;
    test.sequences.push_back(Sequence{1, 0, "c0", "c0-i0", {{0, {0, 0}}, {1, {0.01, 0}}}});
    auto net = testing::make_network({{0, 0}, {5, 5}}, testing::plain_hyper(0));
    LabelAssociations h(2);
    CHECK(evaluate(net, h, test, {"c0"}).overall == 0.0);
    h.record(0, "c0-i0");
    const Evaluation e = evaluate(net, h, test, {"c0", "c1"});
    CHECK(e.overall == 1.0);
    CHECK(e.per_category[0] == 1.0);
    CHECK(std::isnan(e.per_category[1]));
    h.record(1, "c0-i0");
    CHECK(evaluate(net, h, test, {"c0"}).overall == 1.0);

    Dataset empty;
    empty.dim = 2;
    CHECK_THROWS_AS(evaluate(net, h, empty, {"c0"}), std::invalid_argument);
}

TEST_CASE("forgetting_metrics") {
    auto value = [](std::vector<MetricsRecord> t) { return forgetting_metrics(t).at(0); };
    CHECK(value({trace_point(0.9, true), trace_point(0.9, true), trace_point(0.9, true)}) == 0.0);
    CHECK(*value({trace_point(0.9, true), trace_point(0.5, true), trace_point(0.4, true)}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(*value({trace_point(1.0, false), trace_point(0.5, true), trace_point(0.4, true)}) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK_FALSE(value({trace_point(0.7, false), trace_point(0.6, false)}));
}

TEST_CASE("summaries") {
    std::vector<MetricsRecord> rs(2);
    rs[0].checkpoint = rs[1].checkpoint = 1;
    rs[0].acc_overall = 0.4;
    rs[1].acc_overall = 0.6;
    rs[1].trial = 1;
    const auto s = summarize(rs);
    REQUIRE(s.size() == 1);
    CHECK(s[0].acc_overall_mean == doctest::Approx(0.5));
    CHECK(s[0].acc_overall_std == doctest::Approx(std::sqrt(0.02)));
    CHECK(checkpoints_to_fraction({0.1, 0.5, 0.96, 1.0}, 0.95) == 3);
    CHECK(checkpoints_to_fraction({1.0}, 0.95) == 1);
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}
