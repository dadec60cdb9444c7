#include "siwave/config.hpp"

#include <sstream>

#include "siwave/errors.hpp"
#include "siwave/ioutil.hpp"

namespace siwave {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& file) {
    return from_string(read_text_file(file));
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
    KeyValueConfig cfg;
    cfg.text_ = text;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
        if (cfg.values_.count(key))
            throw config_error("config: duplicate key '" + key + "'");
        cfg.values_[key] = val;
    }
    return cfg;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' is not a number: " + it->second);
    }
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' is not an integer: " + it->second);
    }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw config_error("config: key '" + key + "' is not a boolean: " + v);
}

std::vector<double> KeyValueConfig::get_list(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    try {
        return parse_double_list(it->second);
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' is not a number list: " + it->second);
    }
}

void KeyValueConfig::require_only(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
        if (!allowed.count(key))
            throw config_error("config: unknown key '" + key + "'");
    }
}

}  // namespace siwave
