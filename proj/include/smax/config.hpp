#pragma once

// Plain-text experiment configuration: `key = value` lines, '#' comments.
// Unknown keys are hard errors (silent typos corrupt sweep studies), and all
// module preconditions are validated here before any dispatch.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace smax {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KeyValueConfig {
    std::map<std::string, std::string> entries;

    static KeyValueConfig parse(std::istream& is) {
        KeyValueConfig cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                if (b == std::string::npos) return std::string();
                const auto e = s.find_last_not_of(" \t\r");
                return s.substr(b, e - b + 1);
            };
            if (trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
            const auto key = trim(line.substr(0, eq));
            const auto val = trim(line.substr(eq + 1));
            if (key.empty() || val.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty key or value");
            if (cfg.entries.count(key))
                throw ConfigError("config: duplicate key '" + key + "'");
            cfg.entries[key] = val;
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("config: cannot open " + path);
        return parse(is);
    }
};

// Typed view over a KeyValueConfig that tracks which keys were consumed;
// finish() rejects leftovers.
class ConfigReader {
public:
    explicit ConfigReader(const KeyValueConfig& cfg) : cfg_(cfg) {}

    std::optional<std::string> get_string(const std::string& key) {
        const auto it = cfg_.entries.find(key);
        if (it == cfg_.entries.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    std::string require_string(const std::string& key) {
        const auto v = get_string(key);
        if (!v) throw ConfigError("config: missing required key '" + key + "'");
        return *v;
    }

    double require_double(const std::string& key) {
        return to_double(key, require_string(key));
    }

    double get_double(const std::string& key, double fallback) {
        const auto v = get_string(key);
        return v ? to_double(key, *v) : fallback;
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) {
        const auto v = get_string(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const auto r = std::stoll(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing");
            return r;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' is not an integer: " +
                              *v);
        }
    }

    // positive count (sizes, term counts, sample counts)
    std::size_t get_size(const std::string& key, std::size_t fallback) {
        const auto r = get_int(key, static_cast<std::int64_t>(fallback));
        if (r <= 0)
            throw ConfigError("config: key '" + key + "' must be positive");
        return static_cast<std::size_t>(r);
    }

    std::vector<double> get_double_list(const std::string& key,
                                        std::vector<double> fallback) {
        const auto v = get_string(key);
        if (!v) return fallback;
        std::vector<double> out;
        std::istringstream ss(*v);
        std::string tok;
        while (std::getline(ss, tok, ','))
            out.push_back(to_double(key, tok));
        if (out.empty())
            throw ConfigError("config: key '" + key + "' has an empty list");
        return out;
    }

    void finish() const {
        for (const auto& [k, _] : cfg_.entries)
            if (!used_.count(k))
                throw ConfigError("config: unknown key '" + k + "'");
    }

private:
    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double r = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing");
            return r;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' is not a number: " + v);
        }
    }

    const KeyValueConfig& cfg_;
    std::set<std::string> used_;
};

}  // namespace smax
