#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace siwave {

/// Flat `key = value` configuration files; '#' starts a comment.  Unknown
/// keys are rejected by require_only so typos surface as config errors.
class KeyValueConfig {
public:
    static KeyValueConfig from_file(const std::filesystem::path& file);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    void require_only(const std::set<std::string>& allowed) const;
    const std::string& text() const { return text_; }

private:
    std::map<std::string, std::string> values_;
    std::string text_;
};

}  // namespace siwave
