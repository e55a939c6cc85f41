#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ermakov {

/// Sectioned `key = value` scenario document.
///
///     # comment
///     [functions]
///     m = 1 + 0.1*sin(t)
///     omega_tilde_sq = 1
///
/// Only the sections and keys of the scenario schema are accepted; anything
/// else is a ConfigError carrying the line number.
class ConfigDocument {
public:
    using Section = std::map<std::string, std::string, std::less<>>;

    static ConfigDocument parse(std::string_view text);
    static ConfigDocument load(const std::filesystem::path& path);

    void set(std::string_view section, std::string_view key, std::string value);

    /// "section.key=value"
    void apply_override(std::string_view assignment);

    std::optional<std::string> get(std::string_view section, std::string_view key) const;
    bool has(std::string_view section, std::string_view key) const { return get(section, key).has_value(); }

    const std::map<std::string, Section, std::less<>>& sections() const noexcept { return sections_; }

    /// Canonical rendering; parses back to an equal document.
    std::string to_text() const;

private:
    std::map<std::string, Section, std::less<>> sections_;
};

bool is_known_key(std::string_view section, std::string_view key);

} // namespace ermakov
