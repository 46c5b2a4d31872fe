#pragma once

#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dualmeissner/errors.hpp"

namespace dm {

// Flat key=value configuration. Lines are `key = value`, `#` starts a
// comment, blank lines are ignored. Sections are spelled as dotted key
// prefixes (`lattice.beta = 2.3`), not bracket headers, so the file stays
// greppable and diffable. Diagnostics carry the origin and line number.
class Config {
  public:
    Config() = default;

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad()) throw IoError("read failure on config file '" + path + "'");
        return parse_string(ss.str(), path);
    }

    static Config parse_string(const std::string& text, const std::string& origin = "<string>") {
        Config cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected key=value, got '" + t + "'");
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            auto prev = cfg.lines_.find(key);
            if (prev != cfg.lines_.end())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                  key + "' (first set on line " + std::to_string(prev->second) +
                                  ")");
            cfg.values_[key] = value;
            cfg.lines_[key] = lineno;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    // Flags override file values; overlaying re-sets or adds a key.
    void set(const std::string& key, const std::string& value) {
        values_[key] = value;
        lines_[key] = 0;
    }

    std::string get_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError(origin_ + ": missing required key '" + key + "'");
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? to_double(key, get_string(key)) : fallback;
    }

    long long get_int(const std::string& key) const { return to_int(key, get_string(key)); }
    long long get_int(const std::string& key, long long fallback) const {
        return has(key) ? to_int(key, get_string(key)) : fallback;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        std::string v = get_string(key);
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError(bad_value(key, v, "boolean"));
    }

    std::array<int, 4> get_dims(const std::string& key, const std::array<int, 4>& fallback) const {
        if (!has(key)) return fallback;
        std::istringstream ss(get_string(key));
        std::array<int, 4> d{};
        for (int i = 0; i < 4; ++i)
            if (!(ss >> d[i])) throw ConfigError(bad_value(key, get_string(key), "4 integers"));
        int extra;
        if (ss >> extra) throw ConfigError(bad_value(key, get_string(key), "4 integers"));
        return d;
    }

    // Typo guard: every present key must be one the caller understands.
    void check_known(const std::set<std::string>& known) const {
        for (const auto& [key, value] : values_) {
            (void)value;
            if (!known.count(key))
                throw ConfigError(origin_ + ":" + std::to_string(lines_.at(key)) +
                                  ": unknown key '" + key + "'");
        }
    }

    const std::map<std::string, std::string>& entries() const { return values_; }
    const std::string& origin() const { return origin_; }

  private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::string bad_value(const std::string& key, const std::string& v,
                          const char* want) const {
        auto it = lines_.find(key);
        std::string where = origin_;
        if (it != lines_.end() && it->second > 0) where += ":" + std::to_string(it->second);
        return where + ": key '" + key + "': cannot parse '" + v + "' as " + want;
    }

    double to_double(const std::string& key, const std::string& v) const {
        const char* s = v.c_str();
        char* end = nullptr;
        double x = std::strtod(s, &end);
        if (end == s || *end != '\0') throw ConfigError(bad_value(key, v, "a number"));
        return x;
    }

    long long to_int(const std::string& key, const std::string& v) const {
        const char* s = v.c_str();
        char* end = nullptr;
        long long x = std::strtoll(s, &end, 10);
        if (end == s || *end != '\0') throw ConfigError(bad_value(key, v, "an integer"));
        return x;
    }

    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    std::string origin_ = "<empty>";
};

}  // namespace dm
