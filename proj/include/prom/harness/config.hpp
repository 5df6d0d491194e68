// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "prom/common.hpp"

namespace prom {

/// Sectioned key-value configuration:
///
///   [model]
///   kind = burgers        # comments with '#' or ';'
///   n = 2048
///
/// Keys are unique per section (later assignments win). Accessors with a
/// default never throw; the required forms throw ConfigError when missing.
class IniConfig {
public:
    static IniConfig from_file(const std::string& path);
    static IniConfig from_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    Index get_index(const std::string& section, const std::string& key) const;
    Index get_index(const std::string& section, const std::string& key,
                    Index fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& section,
                                             const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

    /// Canonical text form (sorted sections and keys), used for hashing and
    /// the report's configuration echo.
    std::string canonical_text() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace prom
