#include "gwr/config.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gwr/numeric_text.hpp"

namespace gwr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T number(const std::string& key, const std::string& value) {
    const auto v = parse_number<T>(trim(value));
    if (!v) throw ConfigError(key + ": invalid number '" + value + "'");
    return *v;
}

bool boolean(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

template <typename T>
std::vector<T> list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(number<T>(key, item));
    return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_floating_point_v<T>)
            out += format_double(xs[i]);
        else
            out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    HyperParams& h = protocol.hyper;
    try {
        if (key == "model.insertion_threshold") h.insertion_threshold = number<double>(key, value);
        else if (key == "model.habituation_threshold") h.habituation_threshold = number<double>(key, value);
        else if (key == "model.tau_bmu") h.tau_bmu = number<double>(key, value);
        else if (key == "model.tau_neighbor") h.tau_neighbor = number<double>(key, value);
        else if (key == "model.kappa") h.kappa = number<double>(key, value);
        else if (key == "model.eps_bmu") h.eps_bmu = number<double>(key, value);
        else if (key == "model.eps_neighbor") h.eps_neighbor = number<double>(key, value);
        else if (key == "model.alpha") h.alpha = list<double>(key, value);
        else if (key == "model.beta") h.beta = number<double>(key, value);
        else if (key == "model.context_depth") h.context_depth = number<std::size_t>(key, value);
        else if (key == "model.max_neurons") h.max_neurons = number<std::size_t>(key, value);
        else if (key == "model.context_form") h.context_form = parse_context_form(value);
        else if (key == "protocol.kind") protocol.kind = parse_protocol(value);
        else if (key == "protocol.mode") protocol.mode = parse_mode(value);
        else if (key == "protocol.replay") protocol.replay = boolean(key, value);
        else if (key == "protocol.epochs") {
            protocol.epochs = number<int>(key, value);
            epochs_set = true;
        }
        else if (key == "protocol.trials") protocol.trials = number<int>(key, value);
        else if (key == "protocol.seed") protocol.seed = number<std::uint64_t>(key, value);
        else if (key == "protocol.test_sessions") protocol.test_sessions = list<int>(key, value);
        else if (key == "protocol.parallel_trials") protocol.parallel_trials = number<int>(key, value);
        else if (key == "protocol.record_timing") protocol.record_timing = boolean(key, value);
        else if (key == "data.features") {
            if (value.empty()) features.reset();
            else features = value;
        }
        else if (key == "data.categories") synthetic.categories = number<int>(key, value);
        else if (key == "data.instances") synthetic.instances = number<int>(key, value);
        else if (key == "data.sessions") synthetic.sessions = number<int>(key, value);
        else if (key == "data.dim") synthetic.dim = number<std::size_t>(key, value);
        else if (key == "data.frames") synthetic.frames_per_sequence = number<int>(key, value);
        else if (key == "data.spread") synthetic.cluster_spread = number<double>(key, value);
        else if (key == "data.walk_step") synthetic.walk_step = number<double>(key, value);
        else if (key == "data.noise") synthetic.noise = number<double>(key, value);
        else if (key == "data.seed") data_seed = number<std::uint64_t>(key, value);
        else if (key == "output.dir") output_dir = value;
        else if (key == "output.snapshot") snapshot = boolean(key, value);
        else throw ConfigError("unknown configuration key '" + key + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

void RunConfig::validate() const {
    if (protocol.kind == ProtocolKind::batch && !epochs_set)
        throw ConfigError("batch protocol requires protocol.epochs (--epochs)");
    if (protocol.kind == ProtocolKind::incremental && epochs_set)
        throw ConfigError("protocol.epochs only applies to the batch protocol");
    if (!features) synthetic.validate();
    if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
    try {
        protocol.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void apply_config(RunConfig& cfg, std::istream& in, const std::string& source) {
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "setting outside of a section");
        try {
            cfg.set(section + "." + trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    apply_config(cfg, in, path.string());
}

void write_config(std::ostream& out, const RunConfig& cfg) {
    const HyperParams& h = cfg.protocol.hyper;
    const ProtocolSpec& p = cfg.protocol;
    out << "[model]\n"
        << "insertion_threshold = " << format_double(h.insertion_threshold) << '\n'
        << "habituation_threshold = " << format_double(h.habituation_threshold) << '\n'
        << "tau_bmu = " << format_double(h.tau_bmu) << '\n'
        << "tau_neighbor = " << format_double(h.tau_neighbor) << '\n'
        << "kappa = " << format_double(h.kappa) << '\n'
        << "eps_bmu = " << format_double(h.eps_bmu) << '\n'
        << "eps_neighbor = " << format_double(h.eps_neighbor) << '\n'
        << "alpha = " << join(h.alpha) << '\n'
        << "beta = " << format_double(h.beta) << '\n'
        << "context_depth = " << h.context_depth << '\n'
        << "max_neurons = " << h.max_neurons << '\n'
        << "context_form = " << to_string(h.context_form) << '\n'
        << "\n[protocol]\n"
        << "kind = " << to_string(p.kind) << '\n'
        << "mode = " << to_string(p.mode) << '\n'
        << "replay = " << (p.replay ? "true" : "false") << '\n';
    if (cfg.epochs_set) out << "epochs = " << p.epochs << '\n';
    out << "trials = " << p.trials << '\n'
        << "seed = " << p.seed << '\n'
        << "test_sessions = " << join(p.test_sessions) << '\n'
        << "parallel_trials = " << p.parallel_trials << '\n'
        << "record_timing = " << (p.record_timing ? "true" : "false") << '\n'
        << "\n[data]\n";
    if (cfg.features) {
        out << "features = " << cfg.features->string() << '\n';
    } else {
        const SyntheticSpec& s = cfg.synthetic;
        out << "categories = " << s.categories << '\n'
            << "instances = " << s.instances << '\n'
            << "sessions = " << s.sessions << '\n'
            << "dim = " << s.dim << '\n'
            << "frames = " << s.frames_per_sequence << '\n'
            << "spread = " << format_double(s.cluster_spread) << '\n'
            << "walk_step = " << format_double(s.walk_step) << '\n'
            << "noise = " << format_double(s.noise) << '\n'
            << "seed = " << cfg.data_seed << '\n';
    }
    out << "\n[output]\n"
        << "dir = " << cfg.output_dir.string() << '\n'
        << "snapshot = " << (cfg.snapshot ? "true" : "false") << '\n';
}

}  // namespace gwr
