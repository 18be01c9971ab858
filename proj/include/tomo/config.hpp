#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string_view>

namespace tomo {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the TOML subset used by sweep configs: [tables] and [dotted.tables],
/// key = value pairs with strings, integers, floats, booleans, and (possibly
/// multi-line) arrays of those, plus # comments.
nlohmann::json parse_toml(std::string_view text);

/// Reads a config as JSON when it parses as such, TOML otherwise.
nlohmann::json load_config_file(const std::filesystem::path& path);

}  // namespace tomo
