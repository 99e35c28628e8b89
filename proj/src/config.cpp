#include "orlicz/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace orlicz {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Strips an unquoted trailing comment.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

std::string fnv1a_hex(const std::string& text) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Config::Scalar parse_scalar(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    if (s.empty()) throw ConfigError(where + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ConfigError(where + ": unterminated string");
        std::string out;
        for (size_t i = 1; i + 1 < s.size(); ++i) {
            if (s[i] == '\\' && i + 2 < s.size() && (s[i + 1] == '"' || s[i + 1] == '\\'))
                out += s[++i];
            else
                out += s[i];
        }
        return out;
    }
    if (s == "true") return true;
    if (s == "false") return false;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno != 0)
        throw ConfigError(where + ": cannot parse value '" + s + "'");
    return v;
}

const char* scalar_kind(const Config::Scalar& s) {
    if (std::holds_alternative<std::string>(s)) return "string";
    if (std::holds_alternative<bool>(s)) return "boolean";
    return "number";
}

} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Config Config::parse(const std::string& text) {
    Config cfg;
    cfg.hash_ = fnv1a_hex(text);
    std::istringstream in(text);
    std::string line;
    std::string section;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        std::string where = "config line " + std::to_string(lineno);
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string raw = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (cfg.kv_.count(key)) throw ConfigError(where + ": duplicate key " + key);
        if (!raw.empty() && raw.front() == '[') {
            if (raw.back() != ']') throw ConfigError(where + ": unterminated array");
            std::vector<Scalar> items;
            std::string body = raw.substr(1, raw.size() - 2);
            std::string item;
            bool in_string = false;
            for (char c : body) {
                if (c == '"') in_string = !in_string;
                if (c == ',' && !in_string) {
                    items.push_back(parse_scalar(item, where));
                    item.clear();
                } else {
                    item += c;
                }
            }
            if (!trim(item).empty()) items.push_back(parse_scalar(item, where));
            cfg.kv_.emplace(key, std::move(items));
        } else {
            cfg.kv_.emplace(key, parse_scalar(raw, where));
        }
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return kv_.count(key) != 0; }

namespace {

const Config::Scalar& scalar_at(const std::map<std::string, Config::Value>& kv,
                                const std::string& key, const char* want) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing config key " + key);
    const auto* s = std::get_if<Config::Scalar>(&it->second);
    if (!s) throw ConfigError("config key " + key + " is an array, expected " + want);
    return *s;
}

} // namespace

double Config::number(const std::string& key) const {
    const Scalar& s = scalar_at(kv_, key, "number");
    const double* v = std::get_if<double>(&s);
    if (!v)
        throw ConfigError("config key " + key + " is a " + scalar_kind(s) + ", expected number");
    return *v;
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int Config::integer(const std::string& key) const {
    double v = number(key);
    if (std::floor(v) != v || std::fabs(v) > 2147483647.0)
        throw ConfigError("config key " + key + " must be an integer");
    return static_cast<int>(v);
}

int Config::integer_or(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Scalar& s = scalar_at(kv_, key, "boolean");
    const bool* v = std::get_if<bool>(&s);
    if (!v)
        throw ConfigError("config key " + key + " is a " + scalar_kind(s) + ", expected boolean");
    return *v;
}

std::string Config::text(const std::string& key) const {
    const Scalar& s = scalar_at(kv_, key, "string");
    const std::string* v = std::get_if<std::string>(&s);
    if (!v)
        throw ConfigError("config key " + key + " is a " + scalar_kind(s) + ", expected string");
    return *v;
}

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

std::vector<double> Config::numbers(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key " + key);
    const auto* arr = std::get_if<std::vector<Scalar>>(&it->second);
    if (!arr) throw ConfigError("config key " + key + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(arr->size());
    for (const Scalar& s : *arr) {
        const double* v = std::get_if<double>(&s);
        if (!v) throw ConfigError("config key " + key + " has a non-numeric element");
        out.push_back(*v);
    }
    return out;
}

void Config::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : kv_)
        if (!allowed.count(key)) throw ConfigError("unknown config key " + key);
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    out.reserve(kv_.size());
    for (const auto& [key, value] : kv_) out.push_back(key);
    return out;
}

double ToleranceBook::use(const std::string& name, double base_value) {
    double v = base_value * scale_;
    used_[name] = v;
    return v;
}

} // namespace orlicz
