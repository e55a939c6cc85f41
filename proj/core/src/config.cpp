#include "ermakov/config.hpp"

#include "ermakov/errors.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace ermakov {

namespace {

struct SchemaEntry {
    std::string_view section;
    std::array<std::string_view, 5> keys;
};

constexpr std::array<SchemaEntry, 4> schema{{
    {"functions", {"m", "omega_tilde_sq", "", "", ""}},
    {"coupling", {"V", "W", "F", "G", ""}},
    {"initial", {"q", "q_dot", "f", "f_dot", "t0"}},
    {"integration", {"method", "t_end", "dt", "tol", "output_stride"}},
}};

bool is_known_section(std::string_view section) {
    return std::any_of(schema.begin(), schema.end(), [&](const SchemaEntry& e) { return e.section == section; });
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

} // namespace

bool is_known_key(std::string_view section, std::string_view key) {
    for (const auto& e : schema)
        if (e.section == section)
            return !key.empty() && std::find(e.keys.begin(), e.keys.end(), key) != e.keys.end();
    return false;
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
    ConfigDocument doc;
    std::string current;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!is_known_section(current)) throw ConfigError(where + "unknown section [" + current + "]");
            doc.sections_[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        if (current.empty()) throw ConfigError(where + "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!is_known_key(current, key)) throw ConfigError(where + "unknown key '" + key + "' in [" + current + "]");
        if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
        auto& sec = doc.sections_[current];
        if (sec.count(key)) throw ConfigError(where + "duplicate key '" + key + "' in [" + current + "]");
        sec.emplace(key, value);
    }
    return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ConfigDocument::set(std::string_view section, std::string_view key, std::string value) {
    if (!is_known_key(section, key))
        throw ConfigError("unknown key '" + std::string(section) + "." + std::string(key) + "'");
    auto& sec = sections_[std::string(section)];
    sec.insert_or_assign(std::string(key), std::move(value));
}

void ConfigDocument::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
        throw ConfigError("override must look like section.key=value, got '" + std::string(assignment) + "'");
    const auto value = trim(assignment.substr(eq + 1));
    if (value.empty()) throw ConfigError("empty value in override '" + std::string(assignment) + "'");
    set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)), std::string(value));
}

std::optional<std::string> ConfigDocument::get(std::string_view section, std::string_view key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
}

std::string ConfigDocument::to_text() const {
    std::string out;
    for (const auto& e : schema) {
        const auto s = sections_.find(e.section);
        if (s == sections_.end()) continue;
        out += "[" + std::string(e.section) + "]\n";
        for (const auto& [k, v] : s->second) out += k + " = " + v + "\n";
    }
    return out;
}

} // namespace ermakov
