#include "gwr/snapshot.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gwr/numeric_text.hpp"

namespace gwr {

namespace {

void write_vector(std::ostream& out, const Vector& v) {
    for (double x : v) out << ' ' << format_double(x);
}

}  // namespace

void write_snapshot(std::ostream& out, const Network& net, const SideTables& tables) {
    const HyperParams& h = net.hyper();
    out << "gwr-snapshot " << kSnapshotVersion << '\n';
    out << "mode " << to_string(net.mode()) << '\n';
    out << "dim " << net.dim() << '\n';
    out << "rng_seed " << net.rng_seed() << '\n';
    out << "step_count " << net.step_count() << '\n';
    out << "hyper insertion_threshold " << format_double(h.insertion_threshold) << '\n';
    out << "hyper habituation_threshold " << format_double(h.habituation_threshold) << '\n';
    out << "hyper tau_bmu " << format_double(h.tau_bmu) << '\n';
    out << "hyper tau_neighbor " << format_double(h.tau_neighbor) << '\n';
    out << "hyper kappa " << format_double(h.kappa) << '\n';
    out << "hyper eps_bmu " << format_double(h.eps_bmu) << '\n';
    out << "hyper eps_neighbor " << format_double(h.eps_neighbor) << '\n';
    out << "hyper beta " << format_double(h.beta) << '\n';
    out << "hyper context_depth " << h.context_depth << '\n';
    out << "hyper max_neurons " << h.max_neurons << '\n';
    out << "hyper context_form " << to_string(h.context_form) << '\n';
    out << "hyper alpha";
    write_vector(out, h.alpha);
    out << '\n';

    const ContextState& ctx = net.context();
    out << "prev_bmu ";
    if (ctx.prev_bmu)
        out << *ctx.prev_bmu;
    else
        out << "none";
    out << '\n';
    for (const auto& c : ctx.global) {
        out << "context";
        write_vector(out, c);
        out << '\n';
    }

    out << "neurons " << net.size() << '\n';
    for (const auto& n : net.neurons()) {
        out << "neuron " << n.id << ' ' << format_double(n.habituation);
        write_vector(out, n.weight);
        for (const auto& c : n.contexts) write_vector(out, c);
        out << '\n';
    }

    const auto edges = net.edges();
    out << "edges " << edges.size() << '\n';
    for (const auto& [a, b] : edges) out << "edge " << a << ' ' << b << '\n';

    const auto synapses = tables.synapses.entries();
    out << "synapses " << tables.synapses.neuron_count() << ' ' << synapses.size() << '\n';
    for (const auto& [i, j, c] : synapses) out << "synapse " << i << ' ' << j << ' ' << c << '\n';

    const LabelAssociations& labels = tables.labels;
    out << "labels " << labels.labels().size() << '\n';
    for (const auto& name : labels.labels()) out << "label " << std::quoted(name) << '\n';
    out << "label_totals " << labels.training_total() << ' ' << labels.replay_total() << '\n';
    std::size_t cells = 0;
    for (NeuronId j = 0; j < labels.neuron_count(); ++j) cells += labels.row(j).size();
    out << "associations " << labels.neuron_count() << ' ' << cells << '\n';
    for (NeuronId j = 0; j < labels.neuron_count(); ++j)
        for (const auto& [l, c] : labels.row(j)) out << "assoc " << j << ' ' << l << ' ' << c << '\n';
    out << "end\n";
}

namespace {

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next line as a stream, after checking its leading keyword.
    std::istringstream& expect(const std::string& keyword) {
        std::string text;
        if (!std::getline(in_, text)) fail("unexpected end of snapshot, expected '" + keyword + "'");
        ++line_;
        current_.clear();
        current_.str(text);
        std::string word;
        current_ >> word;
        if (word != keyword) fail("expected '" + keyword + "', found '" + word + "'");
        return current_;
    }

    template <typename T>
    T number() {
        std::string token;
        if (!(current_ >> token)) fail("missing value");
        const auto v = parse_number<T>(token);
        if (!v) fail("invalid number '" + token + "'");
        return *v;
    }

    std::string word() {
        std::string token;
        if (!(current_ >> token)) fail("missing value");
        return token;
    }

    Vector vector(std::size_t n) {
        Vector v(n);
        for (auto& x : v) x = number<double>();
        return v;
    }

    void end_of_line() {
        std::string extra;
        if (current_ >> extra) fail("unexpected trailing token '" + extra + "'");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("snapshot line " + std::to_string(line_) + ": " + what);
    }

    std::istringstream& current() { return current_; }

private:
    std::istream& in_;
    std::istringstream current_;
    std::size_t line_ = 0;
};

}  // namespace

Snapshot read_snapshot(std::istream& in) {
    Reader r(in);
    r.expect("gwr-snapshot");
    if (r.number<int>() != kSnapshotVersion) r.fail("unsupported snapshot version");
    r.expect("mode");
    const Mode mode = parse_mode(r.word());
    r.expect("dim");
    const auto dim = r.number<std::size_t>();
    r.expect("rng_seed");
    const auto seed = r.number<std::uint64_t>();
    r.expect("step_count");
    const auto steps = r.number<std::uint64_t>();

    HyperParams h;
    auto hyper_double = [&](const char* name, double& field) {
        r.expect("hyper");
        if (r.word() != name) r.fail(std::string("expected hyper ") + name);
        field = r.number<double>();
        r.end_of_line();
    };
    hyper_double("insertion_threshold", h.insertion_threshold);
    hyper_double("habituation_threshold", h.habituation_threshold);
    hyper_double("tau_bmu", h.tau_bmu);
    hyper_double("tau_neighbor", h.tau_neighbor);
    hyper_double("kappa", h.kappa);
    hyper_double("eps_bmu", h.eps_bmu);
    hyper_double("eps_neighbor", h.eps_neighbor);
    hyper_double("beta", h.beta);
    r.expect("hyper");
    if (r.word() != "context_depth") r.fail("expected hyper context_depth");
    h.context_depth = r.number<std::size_t>();
    r.expect("hyper");
    if (r.word() != "max_neurons") r.fail("expected hyper max_neurons");
    h.max_neurons = r.number<std::size_t>();
    r.expect("hyper");
    if (r.word() != "context_form") r.fail("expected hyper context_form");
    h.context_form = parse_context_form(r.word());
    r.expect("hyper");
    if (r.word() != "alpha") r.fail("expected hyper alpha");
    h.alpha = r.vector(h.context_depth + 1);
    r.end_of_line();

    ContextState ctx;
    r.expect("prev_bmu");
    if (const std::string prev = r.word(); prev != "none") {
        const auto id = parse_number<NeuronId>(prev);
        if (!id) r.fail("invalid prev_bmu '" + prev + "'");
        ctx.prev_bmu = *id;
    }
    for (std::size_t k = 0; k < h.context_depth; ++k) {
        r.expect("context");
        ctx.global.push_back(r.vector(dim));
        r.end_of_line();
    }

    r.expect("neurons");
    const auto count = r.number<std::size_t>();
    std::vector<Neuron> neurons;
    neurons.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        r.expect("neuron");
        Neuron n;
        n.id = r.number<NeuronId>();
        n.habituation = r.number<double>();
        n.weight = r.vector(dim);
        for (std::size_t k = 0; k < h.context_depth; ++k) n.contexts.push_back(r.vector(dim));
        r.end_of_line();
        neurons.push_back(std::move(n));
    }

    r.expect("edges");
    const auto edge_count = r.number<std::size_t>();
    std::vector<std::pair<NeuronId, NeuronId>> edges;
    for (std::size_t i = 0; i < edge_count; ++i) {
        r.expect("edge");
        const auto a = r.number<NeuronId>();
        const auto b = r.number<NeuronId>();
        r.end_of_line();
        edges.emplace_back(a, b);
    }

    Network net = Network::restore(mode, h, dim, seed, std::move(neurons), edges, std::move(ctx), steps);

    SideTables tables;
    r.expect("synapses");
    tables.synapses.resize(r.number<std::size_t>());
    const auto synapse_count = r.number<std::size_t>();
    for (std::size_t s = 0; s < synapse_count; ++s) {
        r.expect("synapse");
        const auto i = r.number<NeuronId>();
        const auto j = r.number<NeuronId>();
        const auto c = r.number<std::uint64_t>();
        r.end_of_line();
        tables.synapses.set(i, j, c);
    }

    r.expect("labels");
    const auto label_count = r.number<std::size_t>();
    for (std::size_t l = 0; l < label_count; ++l) {
        r.expect("label");
        std::string name;
        if (!(r.current() >> std::quoted(name))) r.fail("invalid label");
        if (tables.labels.intern(name) != l) r.fail("duplicate label '" + name + "'");
    }
    r.expect("label_totals");
    const auto training = r.number<std::uint64_t>();
    const auto replay = r.number<std::uint64_t>();
    tables.labels.set_totals(training, replay);
    r.expect("associations");
    tables.labels.resize(r.number<std::size_t>());
    const auto cells = r.number<std::size_t>();
    for (std::size_t c = 0; c < cells; ++c) {
        r.expect("assoc");
        const auto j = r.number<NeuronId>();
        const auto l = r.number<LabelId>();
        const auto n = r.number<std::uint64_t>();
        r.end_of_line();
        tables.labels.add(j, l, n);
    }
    r.expect("end");
    if (tables.synapses.neuron_count() > net.size() || tables.labels.neuron_count() > net.size())
        r.fail("side tables reference more neurons than the network holds");
    return Snapshot{std::move(net), std::move(tables)};
}

void save_snapshot(const std::filesystem::path& path, const Network& net,
                   const SideTables& tables) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write snapshot " + path.string());
    write_snapshot(out, net, tables);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot " + path.string());
    return read_snapshot(in);
}

void dump_snapshot(std::ostream& out, const Snapshot& snap, bool with_vectors) {
    const Network& net = snap.network;
    const HyperParams& h = net.hyper();
    out << "mode:         " << to_string(net.mode()) << '\n'
        << "dimension:    " << net.dim() << '\n'
        << "neurons:      " << net.size() << " / " << h.max_neurons << '\n'
        << "edges:        " << net.edge_count() << '\n'
        << "steps:        " << net.step_count() << '\n'
        << "transitions:  " << snap.tables.synapses.total() << '\n'
        << "labels:       " << snap.tables.labels.labels().size() << " (training "
        << snap.tables.labels.training_total() << ", replay " << snap.tables.labels.replay_total()
        << ")\n"
        << "hyper:        a_T=" << h.insertion_threshold << " h_T=" << h.habituation_threshold
        << " tau_b=" << h.tau_bmu << " tau_n=" << h.tau_neighbor << " kappa=" << h.kappa
        << " eps_b=" << h.eps_bmu << " eps_n=" << h.eps_neighbor << " beta=" << h.beta
        << " K=" << h.context_depth << " context=" << to_string(h.context_form) << '\n';

    out << "\n  id  habituation  degree  label\n";
    for (const auto& n : net.neurons()) {
        std::optional<std::string> label;
        if (n.id < snap.tables.labels.neuron_count()) label = snap.tables.labels.predict(n.id);
        out << std::setw(4) << n.id << "  " << std::setw(11) << std::fixed << std::setprecision(6)
            << n.habituation << "  " << std::setw(6) << net.neighbors(n.id).size() << "  "
            << label.value_or("-") << '\n';
        out.unsetf(std::ios::floatfield);
        if (with_vectors) {
            out << "      w:";
            write_vector(out, n.weight);
            out << '\n';
        }
    }
}

}  // namespace gwr
