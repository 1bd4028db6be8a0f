#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace sp {

enum class KeyKind { integer, real, text, real_list, optional_real, optional_integer };

struct KeySpec {
    const char* name;
    const char* default_value;
    KeyKind kind;
    const char* help;
};

// Flat key=value experiment configuration. Values are kept as validated text,
// so echoing and re-parsing is lossless.
class ExperimentConfig {
public:
    ExperimentConfig();

    static const std::vector<KeySpec>& keys();
    static const KeySpec* find_key(const std::string& name);

    // Parse "key = value" lines; '#' starts a comment. Throws InvalidInput naming the offending key or line.
    static ExperimentConfig parse_text(const std::string& text);
    static ExperimentConfig load_file(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    void merge(const ExperimentConfig& other, bool only_explicit = true);

    const std::string& get(const std::string& key) const;
    bool has(const std::string& key) const { return !get(key).empty(); }
    bool is_explicit(const std::string& key) const { return explicit_.count(key) != 0; }
    std::int64_t get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::optional<double> get_optional_double(const std::string& key) const;
    std::optional<std::int64_t> get_optional_int(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;

    std::string to_text() const;
    nlohmann::json to_json() const;

    bool operator==(const ExperimentConfig& o) const { return values_ == o.values_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> explicit_;
};

}  // namespace sp
