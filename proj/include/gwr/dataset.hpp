#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwr/network.hpp"

namespace gwr {

struct Frame {
    int frame_index = 0;
    Vector features;

    bool operator==(const Frame&) const = default;
};

/// One (category, instance, session) recording: frames in temporal order.
struct Sequence {
    int session = 0;
    int sequence = 0;
    std::string category;
    std::string instance;
    std::vector<Frame> frames;

    bool operator==(const Sequence&) const = default;
};

/// Labelled feature streams, sequences ordered by (session, sequence).
struct Dataset {
    std::size_t dim = 0;
    std::vector<Sequence> sequences;

    std::size_t frame_count() const;
    std::vector<int> sessions() const;
    /// Category and instance labels in order of first appearance.
    std::vector<std::string> categories() const;
    std::vector<std::string> instances() const;

    bool operator==(const Dataset&) const = default;
};

struct SyntheticSpec {
    int categories = 10;
    int instances = 5;  // per category
    int sessions = 11;
    std::size_t dim = 16;
    int frames_per_sequence = 20;
    double cluster_spread = 0.5;
    double walk_step = 0.12;
    double noise = 0.12;

    void validate() const;
};

/// Deterministic in (spec, seed). Sessions are numbered from 1.
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Instance-level accuracy of a nearest-prototype classifier on `test`,
/// using per-instance mean features of `train` as prototypes.
double nearest_prototype_accuracy(const Dataset& train, const Dataset& test);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Feature CSV: label_category,label_instance,session,sequence,frame,f0..f{n-1}
Dataset read_features(std::istream& in);
Dataset load_features(const std::filesystem::path& path);
void write_features(std::ostream& out, const Dataset& data);
void save_features(const std::filesystem::path& path, const Dataset& data);

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::string> warnings;
};

Split split_by_sessions(const Dataset& data, const std::vector<int>& test_sessions);

/// {3, 7, 10} when present, otherwise three sessions at the same relative
/// positions.
std::vector<int> default_test_sessions(const Dataset& data);

}  // namespace gwr
