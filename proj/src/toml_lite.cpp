#include "riverbank/toml_lite.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "riverbank/error.hpp"

namespace riverbank {

double TomlValue::as_number() const {
    if (kind == Kind::Int) return static_cast<double>(integer);
    if (kind == Kind::Float) return real;
    throw SchemaMismatch("toml value is not a number");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

TomlValue parse_scalar(const std::string& raw, int lineno) {
    const std::string s = trim(raw);
    if (s.empty()) throw SchemaMismatch("toml: empty value at line " + std::to_string(lineno));
    TomlValue v;
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw SchemaMismatch("toml: unterminated string at line " + std::to_string(lineno));
        v.kind = TomlValue::Kind::String;
        v.str = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = TomlValue::Kind::Bool;
        v.boolean = s == "true";
        return v;
    }
    const bool looks_float = s.find_first_of(".eE") != std::string::npos;
    try {
        std::size_t used = 0;
        if (looks_float) {
            v.kind = TomlValue::Kind::Float;
            v.real = std::stod(s, &used);
        } else {
            v.kind = TomlValue::Kind::Int;
            v.integer = std::stoll(s, &used);
        }
        if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw SchemaMismatch("toml: cannot parse value '" + s + "' at line " +
                             std::to_string(lineno));
    }
    return v;
}

TomlValue parse_value(const std::string& raw, int lineno) {
    const std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']')
            throw SchemaMismatch("toml: unterminated array at line " + std::to_string(lineno));
        TomlValue v;
        v.kind = TomlValue::Kind::Array;
        std::string body = s.substr(1, s.size() - 2);
        std::string item;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                if (!trim(item).empty()) v.array.push_back(parse_scalar(item, lineno));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) v.array.push_back(parse_scalar(item, lineno));
        return v;
    }
    return parse_scalar(s, lineno);
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SchemaMismatch("toml: bad section header at line " +
                                     std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw SchemaMismatch("toml: empty section name at line " +
                                     std::to_string(lineno));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaMismatch("toml: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw SchemaMismatch("toml: empty key at line " + std::to_string(lineno));
        const std::string full_key = section.empty() ? key : section + "." + key;
        table.values[full_key] = parse_value(line.substr(eq + 1), lineno);
    }
    return table;
}

TomlTable load_toml(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_toml(ss.str());
}

std::string TomlTable::get_string(const std::string& key, const std::string& def) const {
    const auto it = values.find(key);
    if (it == values.end()) return def;
    if (it->second.kind != TomlValue::Kind::String)
        throw SchemaMismatch("toml key '" + key + "' is not a string");
    return it->second.str;
}

std::int64_t TomlTable::get_int(const std::string& key, std::int64_t def) const {
    const auto it = values.find(key);
    if (it == values.end()) return def;
    if (it->second.kind != TomlValue::Kind::Int)
        throw SchemaMismatch("toml key '" + key + "' is not an integer");
    return it->second.integer;
}

double TomlTable::get_double(const std::string& key, double def) const {
    const auto it = values.find(key);
    if (it == values.end()) return def;
    return it->second.as_number();
}

bool TomlTable::get_bool(const std::string& key, bool def) const {
    const auto it = values.find(key);
    if (it == values.end()) return def;
    if (it->second.kind != TomlValue::Kind::Bool)
        throw SchemaMismatch("toml key '" + key + "' is not a boolean");
    return it->second.boolean;
}

std::vector<std::string> TomlTable::get_string_array(const std::string& key) const {
    const auto it = values.find(key);
    std::vector<std::string> out;
    if (it == values.end()) return out;
    if (it->second.kind != TomlValue::Kind::Array)
        throw SchemaMismatch("toml key '" + key + "' is not an array");
    for (const TomlValue& v : it->second.array) {
        if (v.kind != TomlValue::Kind::String)
            throw SchemaMismatch("toml key '" + key + "' holds a non-string element");
        out.push_back(v.str);
    }
    return out;
}

std::vector<std::int64_t> TomlTable::get_int_array(const std::string& key) const {
    const auto it = values.find(key);
    std::vector<std::int64_t> out;
    if (it == values.end()) return out;
    if (it->second.kind != TomlValue::Kind::Array)
        throw SchemaMismatch("toml key '" + key + "' is not an array");
    for (const TomlValue& v : it->second.array) {
        if (v.kind != TomlValue::Kind::Int)
            throw SchemaMismatch("toml key '" + key + "' holds a non-integer element");
        out.push_back(v.integer);
    }
    return out;
}

}  // namespace riverbank
