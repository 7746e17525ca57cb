#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace riverbank {

// Minimal TOML reader covering the subset this toolkit's spec files use:
// [section] headers, bare keys, strings, integers, floats, booleans, and
// flat arrays of those. Nested tables and datetimes are out of scope.
struct TomlValue {
    enum class Kind { String, Int, Float, Bool, Array };
    Kind kind = Kind::String;
    std::string str;
    std::int64_t integer = 0;
    double real = 0.0;
    bool boolean = false;
    std::vector<TomlValue> array;

    double as_number() const;  // Int or Float
};

class TomlTable {
public:
    // Keys are "section.key" for values under a [section] header.
    std::map<std::string, TomlValue> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    // Typed lookups with defaults. Throws SchemaMismatch on a type mismatch.
    std::string get_string(const std::string& key, const std::string& def) const;
    std::int64_t get_int(const std::string& key, std::int64_t def) const;
    double get_double(const std::string& key, double def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<std::string> get_string_array(const std::string& key) const;
    std::vector<std::int64_t> get_int_array(const std::string& key) const;
};

// Throws SchemaMismatch on syntax errors, IoError on unreadable files.
TomlTable parse_toml(const std::string& text);
TomlTable load_toml(const std::string& path);

}  // namespace riverbank
