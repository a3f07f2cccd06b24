#include "chanqed/keyvalue.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chanqed/errors.hpp"

namespace chanqed {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    return std::all_of(k.begin(), k.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    });
}

std::pair<std::string, std::string> split_assignment(std::string_view line, std::string_view where) {
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(std::string(where) + ": expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
        throw ConfigError(std::string(where) + ": invalid key '" + std::string(key) + "'");
    }
    return {std::string(key), std::string(value)};
}

}  // namespace

KeyValues parse_key_values(std::string_view text, std::string_view source) {
    KeyValues kv;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto where = std::string(source) + ":" + std::to_string(line_no);
        auto [key, value] = split_assignment(line, where);
        if (!kv.emplace(key, value).second) {
            throw ConfigError(where + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues read_key_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str(), path);
}

void apply_override(KeyValues& kv, std::string_view assignment) {
    auto [key, value] = split_assignment(trim(assignment), "--set " + std::string(assignment));
    kv[key] = value;
}

std::string format_key_values(const KeyValues& kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

double parse_double(std::string_view text, std::string_view key) {
    auto t = std::string(trim(text));
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw ConfigError(std::string(key) + ": expected a finite number, got '" + t + "'");
    }
    return v;
}

int parse_int(std::string_view text, std::string_view key) {
    auto t = trim(text);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(t) + "'");
    }
    return v;
}

bool parse_bool(std::string_view text, std::string_view key) {
    auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(std::string(key) + ": expected true/false, got '" + std::string(t) + "'");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace chanqed
