#include "gwr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "gwr/numeric_text.hpp"

namespace gwr {

std::size_t Dataset::frame_count() const {
    std::size_t n = 0;
    for (const auto& s : sequences) n += s.frames.size();
    return n;
}

std::vector<int> Dataset::sessions() const {
    std::set<int> ids;
    for (const auto& s : sequences) ids.insert(s.session);
    return {ids.begin(), ids.end()};
}

namespace {

std::vector<std::string> first_seen(const std::vector<Sequence>& seqs,
                                    std::string Sequence::*field) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& s : seqs)
        if (seen.insert(s.*field).second) out.push_back(s.*field);
    return out;
}

}  // namespace

std::vector<std::string> Dataset::categories() const {
    return first_seen(sequences, &Sequence::category);
}

std::vector<std::string> Dataset::instances() const {
    return first_seen(sequences, &Sequence::instance);
}

void SyntheticSpec::validate() const {
    if (categories < 1 || instances < 1 || sessions < 1)
        throw std::invalid_argument("synthetic spec: categories, instances and sessions must be >= 1");
    if (dim < 2) throw std::invalid_argument("synthetic spec: dim must be >= 2");
    if (frames_per_sequence < 1)
        throw std::invalid_argument("synthetic spec: frames_per_sequence must be >= 1");
    if (!(cluster_spread >= 0.0) || !(walk_step >= 0.0) || !(noise >= 0.0))
        throw std::invalid_argument("synthetic spec: spread, walk_step and noise must be >= 0");
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t n = spec.dim;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&](double stddev) { return stddev == 0.0 ? 0.0 : stddev * gauss(rng); };

    std::vector<Vector> centers(spec.categories, Vector(n));
    for (auto& c : centers) {
        double norm = 0.0;
        for (auto& v : c) {
            v = gauss(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (auto& v : c) v /= norm;
    }

    const int instance_total = spec.categories * spec.instances;
    std::vector<Vector> prototypes(instance_total, Vector(n));
    for (int c = 0; c < spec.categories; ++c)
        for (int i = 0; i < spec.instances; ++i)
            for (std::size_t d = 0; d < n; ++d)
                prototypes[c * spec.instances + i][d] = centers[c][d] + draw(spec.cluster_spread);

    Dataset data;
    data.dim = n;
    const double bound = 3.0 * spec.walk_step;
    for (int session = 1; session <= spec.sessions; ++session) {
        for (int idx = 0; idx < instance_total; ++idx) {
            const int c = idx / spec.instances;
            Sequence seq;
            seq.session = session;
            seq.sequence = idx;
            seq.category = "c" + std::to_string(c);
            seq.instance = seq.category + "-i" + std::to_string(idx % spec.instances);

            Vector base = prototypes[idx];
            for (auto& v : base) v += draw(spec.cluster_spread / 2.0);
            Vector offset(n, 0.0);
            for (int f = 0; f < spec.frames_per_sequence; ++f) {
                Frame frame{f, Vector(n)};
                for (std::size_t d = 0; d < n; ++d) {
                    offset[d] = std::clamp(offset[d] + draw(spec.walk_step), -bound, bound);
                    frame.features[d] = base[d] + offset[d] + draw(spec.noise);
                }
                seq.frames.push_back(std::move(frame));
            }
            data.sequences.push_back(std::move(seq));
        }
    }
    return data;
}

double nearest_prototype_accuracy(const Dataset& train, const Dataset& test) {
    std::map<std::string, std::pair<Vector, std::size_t>> sums;
    for (const auto& s : train.sequences) {
        auto& [sum, count] = sums[s.instance];
        if (sum.empty()) sum.assign(train.dim, 0.0);
        for (const auto& f : s.frames) {
            for (std::size_t d = 0; d < train.dim; ++d) sum[d] += f.features[d];
            ++count;
        }
    }
    std::size_t correct = 0;
    std::size_t total = 0;
    for (const auto& s : test.sequences) {
        for (const auto& f : s.frames) {
            double best = std::numeric_limits<double>::infinity();
            const std::string* label = nullptr;
            for (const auto& [name, acc] : sums) {
                double d2 = 0.0;
                for (std::size_t d = 0; d < test.dim; ++d) {
                    const double diff = f.features[d] - acc.first[d] / double(acc.second);
                    d2 += diff * diff;
                }
                if (d2 < best) {
                    best = d2;
                    label = &name;
                }
            }
            correct += label && *label == s.instance;
            ++total;
        }
    }
    return total == 0 ? 0.0 : double(correct) / double(total);
}

namespace {

constexpr const char* kFixedColumns[] = {"label_category", "label_instance", "session",
                                         "sequence", "frame"};

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Dataset read_features(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    if (header.size() < 6) throw ParseError(lineno, "header needs the 5 key columns and >= 1 feature");
    for (std::size_t i = 0; i < 5; ++i)
        if (header[i] != kFixedColumns[i])
            throw ParseError(lineno, "expected column '" + std::string(kFixedColumns[i]) + "'");
    Dataset data;
    data.dim = header.size() - 5;
    for (std::size_t d = 0; d < data.dim; ++d)
        if (header[5 + d] != "f" + std::to_string(d))
            throw ParseError(lineno, "expected feature column 'f" + std::to_string(d) + "'");

    auto parse_int = [&](std::string_view text, const char* what) {
        const auto v = parse_number<int>(text);
        if (!v) throw ParseError(lineno, std::string("invalid ") + what + " '" + std::string(text) + "'");
        return *v;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw ParseError(lineno, "expected " + std::to_string(header.size()) + " columns, got " +
                                         std::to_string(cells.size()));
        const int session = parse_int(cells[2], "session");
        const int sequence = parse_int(cells[3], "sequence");
        const int frame = parse_int(cells[4], "frame");
        if (cells[0].empty() || cells[1].empty()) throw ParseError(lineno, "empty label");

        Sequence* seq = data.sequences.empty() ? nullptr : &data.sequences.back();
        if (!seq || seq->session != session || seq->sequence != sequence) {
            if (seq && std::pair(session, sequence) <= std::pair(seq->session, seq->sequence))
                throw ParseError(lineno, "rows must be ordered by (session, sequence)");
            data.sequences.push_back(Sequence{session, sequence, std::string(cells[0]),
                                              std::string(cells[1]), {}});
            seq = &data.sequences.back();
        } else {
            if (seq->category != cells[0] || seq->instance != cells[1])
                throw ParseError(lineno, "labels change within a sequence");
            if (frame <= seq->frames.back().frame_index)
                throw ParseError(lineno, "frame indices must strictly increase within a sequence");
        }
        Frame f{frame, Vector(data.dim)};
        for (std::size_t d = 0; d < data.dim; ++d) {
            const auto v = parse_number<double>(cells[5 + d]);
            if (!v || !std::isfinite(*v))
                throw ParseError(lineno, "invalid feature value '" + std::string(cells[5 + d]) + "'");
            f.features[d] = *v;
        }
        seq->frames.push_back(std::move(f));
    }
    if (data.sequences.empty()) throw ParseError(lineno, "no data rows");
    return data;
}

Dataset load_features(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature file " + path.string());
    return read_features(in);
}

void write_features(std::ostream& out, const Dataset& data) {
    out << "label_category,label_instance,session,sequence,frame";
    for (std::size_t d = 0; d < data.dim; ++d) out << ",f" << d;
    out << '\n';
    for (const auto& s : data.sequences) {
        if (s.category.find_first_of(",\n") != std::string::npos ||
            s.instance.find_first_of(",\n") != std::string::npos)
            throw std::invalid_argument("labels must not contain commas or newlines");
        for (const auto& f : s.frames) {
            out << s.category << ',' << s.instance << ',' << s.session << ',' << s.sequence << ','
                << f.frame_index;
            for (double v : f.features) out << ',' << format_double(v);
            out << '\n';
        }
    }
}

void save_features(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_features(out, data);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Split split_by_sessions(const Dataset& data, const std::vector<int>& test_sessions) {
    const auto present = data.sessions();
    for (int id : test_sessions)
        if (!std::binary_search(present.begin(), present.end(), id))
            throw std::invalid_argument("unknown test session " + std::to_string(id));
    const std::set<int> test_ids(test_sessions.begin(), test_sessions.end());

    Split split;
    split.train.dim = split.test.dim = data.dim;
    for (const auto& s : data.sequences)
        (test_ids.contains(s.session) ? split.test : split.train).sequences.push_back(s);
    if (split.train.sequences.empty())
        split.warnings.push_back("every session is a test session; the training split is empty");
    if (split.test.sequences.empty())
        split.warnings.push_back("no test sessions selected; the test split is empty");
    return split;
}

std::vector<int> default_test_sessions(const Dataset& data) {
    const auto ids = data.sessions();
    const std::vector<int> preferred{3, 7, 10};
    if (std::all_of(preferred.begin(), preferred.end(),
                    [&](int s) { return std::binary_search(ids.begin(), ids.end(), s); }))
        return preferred;
    if (ids.size() < 2) return {};
    std::set<int> picked;
    for (int rank : preferred) {
        const std::size_t pos = std::min(ids.size() - 1, ids.size() * std::size_t(rank) / 11);
        picked.insert(ids[pos]);
    }
    if (picked.size() == ids.size()) picked.erase(ids.front());
    return {picked.begin(), picked.end()};
}

}  // namespace gwr
