#pragma once

#include <map>
#include <string>

namespace spiraldim {

using KeyValues = std::map<std::string, std::string>;

/// Reads key=value lines. '#' starts a comment; blank lines are skipped;
/// keys and values are trimmed. An optional [section] header prefixes the
/// following keys with "section.".
KeyValues read_key_values(const std::string& path);
KeyValues parse_key_values(const std::string& text);

/// Keys starting with "prefix." with the prefix stripped.
KeyValues config_section(const KeyValues& kv, const std::string& prefix);

double config_get(const KeyValues& kv, const std::string& key, double fallback);
std::string config_get(const KeyValues& kv, const std::string& key, const std::string& fallback);

} // namespace spiraldim
