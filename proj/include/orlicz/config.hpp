#pragma once

#include "orlicz/errors.hpp"

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace orlicz {

// Minimal TOML-style config: [section] headers, key = value lines, # comments.
// Values are strings ("..."), numbers, booleans, or flat arrays of those.
// Key lookups are spelled "section.key" ("key" alone for the preamble).
class Config {
  public:
    using Scalar = std::variant<std::string, double, bool>;
    using Value = std::variant<Scalar, std::vector<Scalar>>;

    static Config parse_file(const std::string& path);
    static Config parse(const std::string& text);

    bool has(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    int integer_or(const std::string& key, int fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key) const;

    // ConfigError when a present key is not in the allowed set: commands
    // reject configs they do not fully understand.
    void require_known(const std::set<std::string>& allowed) const;

    std::vector<std::string> keys() const;
    // FNV-1a over the raw text, hex encoded; stamped into the manifest.
    const std::string& content_hash() const { return hash_; }

  private:
    std::map<std::string, Value> kv_;
    std::string hash_;
};

// Scaled-tolerance bookkeeping for the CLI: every tolerance a command consumes
// is registered here and lands in the run manifest.
class ToleranceBook {
  public:
    explicit ToleranceBook(double scale = 1.0) : scale_(scale) {}
    double use(const std::string& name, double base_value);
    const std::map<std::string, double>& entries() const { return used_; }
    double scale() const { return scale_; }

  private:
    double scale_;
    std::map<std::string, double> used_;
};

} // namespace orlicz
