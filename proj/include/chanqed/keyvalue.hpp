#pragma once

#include <map>
#include <string>
#include <string_view>

namespace chanqed {

/// Flat `key = value` text, one entry per line. `#` starts a comment, blank lines are
/// ignored, keys are [A-Za-z0-9_.]+ and must be unique within one document.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text, std::string_view source = "<input>");
KeyValues read_key_values_file(const std::string& path);

/// Applies `key=value` overrides; later entries win.
void apply_override(KeyValues& kv, std::string_view assignment);

std::string format_key_values(const KeyValues& kv);

double parse_double(std::string_view text, std::string_view key);
int parse_int(std::string_view text, std::string_view key);
bool parse_bool(std::string_view text, std::string_view key);

/// Round-trippable decimal form (%.17g).
std::string format_double(double v);

}  // namespace chanqed
