// SPDX-License-Identifier: Apache-2.0

#include "prom/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace prom {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    size_t cut = line.size();
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '#' || line[i] == ';') {
            cut = i;
            break;
        }
    }
    return line.substr(0, cut);
}

}  // namespace

IniConfig IniConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

IniConfig IniConfig::from_string(const std::string& text) {
    IniConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("config: empty section name at line " +
                                  std::to_string(lineno));
            }
            cfg.sections_[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected 'key = value' at line " +
                              std::to_string(lineno));
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config: empty key at line " + std::to_string(lineno));
        }
        if (section.empty()) {
            throw ConfigError("config: key outside any section at line " +
                              std::to_string(lineno));
        }
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool IniConfig::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string IniConfig::get_string(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s != sections_.end()) {
        auto k = s->second.find(key);
        if (k != s->second.end()) return k->second;
    }
    throw ConfigError("config: missing required key [" + section + "] " + key);
}

std::string IniConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double IniConfig::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: [" + section + "] " + key + " = '" + v +
                          "' is not a number");
    }
}

double IniConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

Index IniConfig::get_index(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    try {
        size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<Index>(x);
    } catch (const std::exception&) {
        throw ConfigError("config: [" + section + "] " + key + " = '" + v +
                          "' is not an integer");
    }
}

Index IniConfig::get_index(const std::string& section, const std::string& key,
                           Index fallback) const {
    return has(section, key) ? get_index(section, key) : fallback;
}

bool IniConfig::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get_string(section, key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError("config: [" + section + "] " + key + " is not a boolean");
}

std::vector<double> IniConfig::get_double_list(const std::string& section,
                                               const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get_string(section, key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config: [" + section + "] " + key +
                              " contains a non-numeric entry '" + item + "'");
        }
    }
    if (out.empty()) {
        throw ConfigError("config: [" + section + "] " + key + " is an empty list");
    }
    return out;
}

std::vector<std::string> IniConfig::get_string_list(const std::string& section,
                                                    const std::string& key) const {
    std::vector<std::string> out;
    std::istringstream in(get_string(section, key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) {
        throw ConfigError("config: [" + section + "] " + key + " is an empty list");
    }
    return out;
}

void IniConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
    sections_[section][key] = value;
}

std::string IniConfig::canonical_text() const {
    std::ostringstream out;
    for (const auto& [section, keys] : sections_) {
        out << "[" << section << "]\n";
        for (const auto& [key, value] : keys) {
            out << key << " = " << value << "\n";
        }
    }
    return out.str();
}

}  // namespace prom
