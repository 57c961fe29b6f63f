#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zonal/errors.hpp"

namespace zonal {

enum class Model { old_model, new_model };

inline std::string model_label(Model m) {
    return m == Model::old_model ? "Old Model" : "New Model";
}

// Province/level selection; empty filter lists mean "all".
struct SubsetSpec {
    std::string name;
    std::vector<std::string> provinces;
    std::vector<std::string> levels;  // "regency" / "municipality"
};

struct NormalitySpec {
    SubsetSpec subset;
    Model model = Model::old_model;
};

struct RunConfig {
    std::filesystem::path regions;
    std::filesystem::path boundaries;   // optional: raster route
    std::filesystem::path settlement;   // optional: raster route
    std::filesystem::path output_dir = "out";
    std::string id_property = "region_id";
    double cell_size = 100.0;
    bool cell_size_set = false;
    double threshold = 0.5;
    double alpha = 0.05;
    std::size_t max_cells = 500'000'000;
    std::vector<NormalitySpec> normality;
    std::vector<SubsetSpec> correlations;
    std::vector<SubsetSpec> ttests;
    std::vector<std::string> warnings;  // unknown keys, soft issues

    bool raster_route() const { return !boundaries.empty() || !settlement.empty(); }
};

namespace toml_lite {

// Minimal TOML subset: comments, `key = value` pairs (strings, numbers,
// booleans, arrays of strings) and [[array-of-table]] sections. Enough for
// run configs; no nested tables, dates or multiline strings.

struct Value {
    std::variant<std::string, double, bool, std::vector<std::string>> data;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<std::vector<std::string>>(data); }
};

struct Table {
    std::vector<std::pair<std::string, Value>> entries;

    const Value* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
};

struct Document {
    Table root;
    std::vector<std::pair<std::string, Table>> sections;  // [[name]] occurrences in order
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string parse_basic_string(const std::string& raw, const std::string& ctx) {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"')
        throw ParseError(ctx + ": expected quoted string, got " + raw);
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        char c = raw[i];
        if (c == '\\') {
            if (i + 2 >= raw.size()) throw ParseError(ctx + ": dangling escape");
            char e = raw[++i];
            switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: throw ParseError(ctx + ": unsupported escape \\" + std::string(1, e));
            }
        } else {
            out += c;
        }
    }
    return out;
}

inline Value parse_value(std::string raw, const std::string& ctx) {
    raw = trim(raw);
    if (raw.empty()) throw ParseError(ctx + ": empty value");
    if (raw.front() == '"') return {parse_basic_string(raw, ctx)};
    if (raw == "true") return {true};
    if (raw == "false") return {false};
    if (raw.front() == '[') {
        if (raw.back() != ']') throw ParseError(ctx + ": unterminated array");
        std::vector<std::string> items;
        std::string body = raw.substr(1, raw.size() - 2);
        std::string cur;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                if (!trim(cur).empty()) items.push_back(parse_basic_string(trim(cur), ctx));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) items.push_back(parse_basic_string(trim(cur), ctx));
        return {items};
    }
    try {
        std::size_t pos = 0;
        const double num = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return {num};
    } catch (const std::exception&) {
        throw ParseError(ctx + ": cannot parse value '" + raw + "'");
    }
}

// Strips a trailing comment that is not inside a string literal.
inline std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

inline Document parse(std::istream& in, const std::string& source) {
    Document doc;
    Table* current = &doc.root;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string ctx = source + ":" + std::to_string(lineno);
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.starts_with("[[") && line.ends_with("]]")) {
            const std::string name = trim(line.substr(2, line.size() - 4));
            if (name.empty()) throw ParseError(ctx + ": empty section name");
            doc.sections.emplace_back(name, Table{});
            current = &doc.sections.back().second;
            continue;
        }
        if (line.starts_with("[")) throw ParseError(ctx + ": plain [table] sections not supported");
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(ctx + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(ctx + ": empty key");
        current->entries.emplace_back(key, parse_value(line.substr(eq + 1), ctx));
    }
    return doc;
}

}  // namespace toml_lite

namespace detail {

inline std::vector<std::string> string_list(const toml_lite::Value& v, const std::string& ctx) {
    if (v.is_string()) return {std::get<std::string>(v.data)};
    if (v.is_array()) return std::get<std::vector<std::string>>(v.data);
    throw ValidationError(ctx + ": expected a string or array of strings");
}

inline SubsetSpec parse_subset(const toml_lite::Table& t, const std::string& ctx,
                               std::vector<std::string>& warnings) {
    SubsetSpec s;
    for (const auto& [key, value] : t.entries) {
        if (key == "name") {
            s.name = std::get<std::string>(value.data);
        } else if (key == "province" || key == "provinces") {
            s.provinces = string_list(value, ctx);
        } else if (key == "level" || key == "levels") {
            s.levels = string_list(value, ctx);
        } else if (key == "model") {
            // consumed by the normality wrapper
        } else {
            warnings.push_back(ctx + ": unknown key '" + key + "' ignored");
        }
    }
    for (const auto& l : s.levels)
        if (l != "regency" && l != "municipality")
            throw ValidationError(ctx + ": unknown level filter '" + l + "'");
    return s;
}

}  // namespace detail

// Loads and validates a run configuration. Relative paths are resolved
// against the directory containing the config file.
inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    const auto doc = toml_lite::parse(in, path.string());
    RunConfig cfg;
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    for (const auto& [key, value] : doc.root.entries) {
        const std::string ctx = path.string() + ": " + key;
        if (key == "regions") cfg.regions = resolve(std::get<std::string>(value.data));
        else if (key == "boundaries") cfg.boundaries = resolve(std::get<std::string>(value.data));
        else if (key == "settlement") cfg.settlement = resolve(std::get<std::string>(value.data));
        else if (key == "output") cfg.output_dir = resolve(std::get<std::string>(value.data));
        else if (key == "id_property") cfg.id_property = std::get<std::string>(value.data);
        else if (key == "cell_size") {
            cfg.cell_size = std::get<double>(value.data);
            cfg.cell_size_set = true;
        }
        else if (key == "threshold") cfg.threshold = std::get<double>(value.data);
        else if (key == "alpha") cfg.alpha = std::get<double>(value.data);
        else if (key == "max_cells") cfg.max_cells = static_cast<std::size_t>(std::get<double>(value.data));
        else cfg.warnings.push_back(ctx + ": unknown key ignored");
    }
    for (const auto& [name, table] : doc.sections) {
        const std::string ctx = path.string() + ": [[" + name + "]]";
        if (name == "normality") {
            NormalitySpec ns;
            ns.subset = detail::parse_subset(table, ctx, cfg.warnings);
            const auto* mv = table.find("model");
            if (!mv) throw ValidationError(ctx + ": missing required key 'model'");
            const std::string m = std::get<std::string>(mv->data);
            if (m == "old") ns.model = Model::old_model;
            else if (m == "new") ns.model = Model::new_model;
            else throw ValidationError(ctx + ": model must be 'old' or 'new', got '" + m + "'");
            cfg.normality.push_back(std::move(ns));
        } else if (name == "correlation") {
            cfg.correlations.push_back(detail::parse_subset(table, ctx, cfg.warnings));
        } else if (name == "ttest") {
            cfg.ttests.push_back(detail::parse_subset(table, ctx, cfg.warnings));
        } else {
            cfg.warnings.push_back(ctx + ": unknown section ignored");
        }
    }

    if (cfg.regions.empty())
        throw ValidationError(path.string() + ": missing required key 'regions'");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ValidationError(path.string() + ": alpha must be in (0, 1)");
    if (!(cfg.cell_size > 0.0))
        throw ValidationError(path.string() + ": cell_size must be > 0");
    if (!std::isfinite(cfg.threshold))
        throw ValidationError(path.string() + ": threshold must be finite");
    if (cfg.boundaries.empty() != cfg.settlement.empty())
        throw ValidationError(path.string() +
                              ": boundaries and settlement must be given together");
    if (cfg.normality.empty() && cfg.correlations.empty() && cfg.ttests.empty())
        throw ValidationError(path.string() + ": at least one analysis subset is required");
    for (const auto& [label, p] : {std::pair{"regions", cfg.regions},
                                   {"boundaries", cfg.boundaries},
                                   {"settlement", cfg.settlement}}) {
        if (!p.empty() && !std::filesystem::exists(p))
            throw ValidationError(path.string() + ": " + label + " path does not exist: " + p.string());
    }
    return cfg;
}

}  // namespace zonal
