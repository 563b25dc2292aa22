#pragma once

// Flat `key = value` configuration files.
//
//   # comment
//   theta_t_true = 2, 1
//   n_raw = 10000, 3000
//
// Keys are unique. Every key must be consumed by a reader; leftovers are
// reported by ConfigFile::require_all_used() so that typos fail loudly.

#include "pusurv/model.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pusurv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigFile {
public:
    static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
    static ConfigFile load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> text(const std::string& key);
    std::optional<double> real(const std::string& key);
    std::optional<std::int64_t> integer(const std::string& key);
    std::optional<bool> boolean(const std::string& key);
    std::optional<std::vector<double>> reals(const std::string& key);
    std::optional<std::vector<std::string>> words(const std::string& key);

    void require_all_used() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    const Entry* take(const std::string& key);
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

    std::string origin_;
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

}  // namespace pusurv
