/** \file config.hpp
 * \brief INI run configuration with a fixed schema.
 *
 * Sections [physics], [grid], [numerics], [output]. Every key has a default;
 * unknown sections or keys are rejected with ConfigError naming the key. */
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bragg/mzi_core.hpp"

namespace bragg {

enum class ValueType { real, integer, text };

struct KeyDef {
    const char* key;      ///< "section.name"
    ValueType type;
    const char* fallback; ///< default value
    const char* doc;
};

/// The documented schema, in echo order.
const std::vector<KeyDef>& config_schema();

/// Inclusive linear grid "min:max:count".
struct LinearGrid {
    double min = 0.0, max = 0.0;
    int count = 1;
    std::vector<double> values() const;
};

class RunConfig {
public:
    /// Defaults only.
    RunConfig();
    /// \throws ConfigError for unreadable files, unknown keys or malformed values
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& ini);

    /// Override one key (validated).
    void set(const std::string& key, const std::string& value);

    double real(const std::string& key) const;
    int integer(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    LinearGrid grid(const std::string& key) const;

    Backend backend() const;
    std::vector<Backend> backends() const;
    PulseShape shape() const;
    ClassRange classes() const;
    RkOptions rk() const;

    /// Effective configuration in schema order, as an INI document.
    std::string echo_ini() const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return values_; }

private:
    const std::string& raw(const std::string& key) const;
    std::vector<std::pair<std::string, std::string>> values_;
};

Backend parse_backend(const std::string& s);
PulseShape parse_shape(const std::string& s);

} // namespace bragg
