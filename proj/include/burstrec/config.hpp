#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "burstrec/grid.hpp"

namespace burstrec {

/// Flat key = value configuration file: one assignment per line, '#' starts a
/// comment, blank lines ignored, duplicate keys rejected. Values are plain
/// scalars, comma-separated number lists, or semicolon-separated tuples.
class ConfigFile {
  public:
    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("config: cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str(), path);
    }

    static ConfigFile parse_text(const std::string& text, const std::string& origin = "<text>") {
        ConfigFile cf;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string::size_type hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const std::string::size_type eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
            if (cf.entries_.count(key))
                throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                   key + "'");
            cf.entries_[key] = value;
        }
        return cf;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        return to_double(it->second, key);
    }

    long get_int(const std::string& key, long fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(it->second, &pos);
        } catch (const std::exception&) {
            throw config_error("config: key '" + key + "' is not an integer: " + it->second);
        }
        if (pos != it->second.size())
            throw config_error("config: key '" + key + "' is not an integer: " + it->second);
        return v;
    }

    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(it->second, &pos);
        } catch (const std::exception&) {
            throw config_error("config: key '" + key + "' is not an unsigned integer: " +
                               it->second);
        }
        if (pos != it->second.size())
            throw config_error("config: key '" + key + "' is not an unsigned integer: " +
                               it->second);
        return static_cast<std::uint64_t>(v);
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::vector<double> out;
        for (const std::string& item : split(it->second, ','))
            out.push_back(to_double(trim(item), key));
        return out;
    }

    /// Semicolon-separated tuples of colon-separated numbers.
    std::vector<std::vector<double>> get_tuple_list(
        const std::string& key, const std::vector<std::vector<double>>& fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::vector<std::vector<double>> out;
        for (const std::string& tuple : split(it->second, ';')) {
            std::vector<double> row;
            for (const std::string& item : split(tuple, ':'))
                row.push_back(to_double(trim(item), key));
            out.push_back(std::move(row));
        }
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    static std::string trim(const std::string& s) {
        std::size_t b = 0;
        std::size_t e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string::size_type start = 0;
        while (true) {
            const std::string::size_type pos = s.find(sep, start);
            if (pos == std::string::npos) {
                out.push_back(s.substr(start));
                return out;
            }
            out.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
    }

    static double to_double(const std::string& s, const std::string& key) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw config_error("config: key '" + key + "' is not a number: " + s);
        }
        if (pos != s.size())
            throw config_error("config: key '" + key + "' is not a number: " + s);
        return v;
    }

    std::map<std::string, std::string> entries_;
};

}  // namespace burstrec
