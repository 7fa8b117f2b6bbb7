#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "gwr/dataset.hpp"
#include "gwr/protocols.hpp"

namespace gwr {

/// Rejected configuration: unknown key, bad value, conflicting settings.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    ProtocolSpec protocol;
    bool epochs_set = false;

    std::optional<std::filesystem::path> features;  // feature CSV; synthetic data otherwise
    SyntheticSpec synthetic;
    std::uint64_t data_seed = 7;

    std::filesystem::path output_dir = "run";
    bool snapshot = false;

    /// Applies one `section.key = value` setting.
    void set(const std::string& key, const std::string& value);

    /// Cross-field checks that need the complete document.
    void validate() const;
};

/// Flat INI-style document: `[section]` headers, `key = value` lines, `#`
/// comments. Sections are model, protocol, data and output.
void apply_config(RunConfig& cfg, std::istream& in, const std::string& source = "config");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Fully resolved document; reading it back reproduces `cfg`.
void write_config(std::ostream& out, const RunConfig& cfg);

}  // namespace gwr
