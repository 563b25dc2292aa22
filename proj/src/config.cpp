#include "pusurv/config.hpp"

#include "pusurv/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pusurv {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(number) + ": empty key");
        if (!cfg.entries_.emplace(key, Entry{value, number}).second) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
        }
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

const ConfigFile::Entry* ConfigFile::take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
}

void ConfigFile::fail(const std::string& key, const std::string& message) const {
    const auto it = entries_.find(key);
    const std::string where = it == entries_.end() ? origin_ : origin_ + ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": " + key + ": " + message);
}

std::optional<std::string> ConfigFile::text(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    return e->value;
}

std::optional<double> ConfigFile::real(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    try {
        return parse_double(e->value);
    } catch (const std::exception&) {
        fail(key, "expected a real number, got '" + e->value + "'");
    }
}

std::optional<std::int64_t> ConfigFile::integer(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    std::int64_t v = 0;
    const char* end = e->value.data() + e->value.size();
    const auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(key, "expected an integer, got '" + e->value + "'");
    return v;
}

std::optional<bool> ConfigFile::boolean(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    fail(key, "expected true or false, got '" + e->value + "'");
}

std::optional<std::vector<double>> ConfigFile::reals(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split_commas(e->value)) {
        try {
            out.push_back(parse_double(item));
        } catch (const std::exception&) {
            fail(key, "expected comma-separated reals, got '" + e->value + "'");
        }
    }
    return out;
}

std::optional<std::vector<std::string>> ConfigFile::words(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    auto out = split_commas(e->value);
    for (const auto& w : out) {
        if (w.empty()) fail(key, "empty list item");
    }
    return out;
}

void ConfigFile::require_all_used() const {
    std::string unknown;
    for (const auto& [key, entry] : entries_) {
        if (used_.count(key)) continue;
        if (!unknown.empty()) unknown += ", ";
        unknown += key + " (line " + std::to_string(entry.line) + ")";
    }
    if (!unknown.empty()) throw ConfigError(origin_ + ": unknown keys: " + unknown);
}

}  // namespace pusurv
