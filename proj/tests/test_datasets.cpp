#include <doctest.h>

#include <set>
#include <sstream>

#include "gwr/dataset.hpp"

using namespace gwr;

TEST_CASE("generate_synthetic") {
    const SyntheticSpec spec;
    const Dataset d = generate_synthetic(spec, 7);
    CHECK(d.sequences.size() == 550);
    CHECK(d.frame_count() == 11000);
    CHECK(d.dim == 16);
    CHECK(d.sessions().size() == 11);
    CHECK(d.categories().size() == 10);
    CHECK(d.instances().size() == 50);
    for (const auto& s : d.sequences)
        for (const auto& f : s.frames) CHECK(f.features.size() == 16);

    CHECK(generate_synthetic(spec, 7) == d);
    CHECK_FALSE(generate_synthetic(spec, 8) == d);

    SUBCASE("no walk and no noise gives constant sequences") {
        SyntheticSpec flat = spec;
        flat.noise = 0.0;
        flat.walk_step = 0.0;
        const Dataset f = generate_synthetic(flat, 3);
        for (const auto& s : f.sequences)
            for (const auto& fr : s.frames) CHECK(fr.features == s.frames.front().features);
        CHECK_FALSE(f.sequences[0].frames[0].features == f.sequences[1].frames[0].features);
    }
    SUBCASE("invalid specs") {
        SyntheticSpec bad = spec;
        bad.dim = 1;
        CHECK_THROWS_AS(generate_synthetic(bad, 1), std::invalid_argument);
        bad = spec;
        bad.categories = 0;
        CHECK_THROWS_AS(generate_synthetic(bad, 1), std::invalid_argument);
        bad = spec;
        bad.noise = -1.0;
        CHECK_THROWS_AS(generate_synthetic(bad, 1), std::invalid_argument);
    }
}

TEST_CASE("default benchmark is separable by a nearest-prototype classifier") {
    const Dataset d = generate_synthetic(SyntheticSpec{}, 42);
    const Split s = split_by_sessions(d, default_test_sessions(d));
    CHECK(nearest_prototype_accuracy(s.train, s.test) > 0.95);
}

TEST_CASE("read_features") {
    const std::string header = "label_category,label_instance,session,sequence,frame,f0,f1\n";
    SUBCASE("three valid rows") {
        std::istringstream in(header +
                              "cup,cup-1,1,0,0,0.5,1\n"
                              "cup,cup-1,1,0,1,0.25,2\n"
                              "can,can-2,2,1,0,-1,3e-2\n");
        const Dataset d = read_features(in);
        CHECK(d.dim == 2);
        CHECK(d.frame_count() == 3);
        CHECK(d.sequences.size() == 2);
        CHECK(d.sessions() == std::vector<int>{1, 2});
        CHECK(d.sequences[1].frames[0].features == Vector{-1, 0.03});
        const Split s = split_by_sessions(d, {2});
        CHECK(s.train.frame_count() == 2);
        CHECK(s.test.frame_count() == 1);
    }
    auto error_line = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_features(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(error_line(header + "cup,cup-1,1,0,0,0.5,1\ncup,cup-1,1,0,1,0.5\n") == 3);
    CHECK(error_line(header + "cup,cup-1,1,0,1,0.5,1\ncup,cup-1,1,0,1,0.5,1\n") == 3);
    CHECK(error_line(header + "cup,cup-1,1,0,0,abc,1\n") == 2);
    CHECK(error_line("label_category,label_instance,session,seq,frame,f0\n") == 1);
    CHECK(error_line(header + "cup,cup-1,2,0,0,1,1\ncup,cup-1,1,1,0,1,1\n") == 3);
    CHECK(error_line(header) != 0);
    CHECK_THROWS(load_features("/nonexistent/features.csv"));
}

TEST_CASE("write and read round-trip") {
    SyntheticSpec small;
    small.categories = 2;
    small.instances = 2;
    small.sessions = 3;
    small.frames_per_sequence = 4;
    const Dataset d = generate_synthetic(small, 5);
    std::stringstream buf;
    write_features(buf, d);
    CHECK(read_features(buf) == d);
}

TEST_CASE("split_by_sessions") {
    const Dataset d = generate_synthetic(SyntheticSpec{}, 7);
    CHECK(default_test_sessions(d) == std::vector<int>{3, 7, 10});
    const Split s = split_by_sessions(d, {3, 7, 10});
    CHECK(s.train.sessions().size() == 8);
    CHECK(s.test.sessions() == std::vector<int>{3, 7, 10});
    CHECK(s.train.frame_count() + s.test.frame_count() == d.frame_count());
    std::set<std::pair<int, int>> train_keys;
    for (const auto& q : s.train.sequences) train_keys.insert({q.session, q.sequence});
    for (const auto& q : s.test.sequences) CHECK_FALSE(train_keys.count({q.session, q.sequence}));
    CHECK(s.warnings.empty());

    const Split all = split_by_sessions(d, d.sessions());
    CHECK(all.train.frame_count() == 0);
    CHECK_FALSE(all.warnings.empty());
    CHECK_THROWS_AS(split_by_sessions(d, {12}), std::invalid_argument);
}
