#include "spiraldim/config.hpp"

#include "spiraldim/errors.hpp"

#include <fstream>
#include <sstream>

namespace spiraldim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        if (!section.empty()) {
            key = section + "." + key;
        }
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

KeyValues config_section(const KeyValues& kv, const std::string& prefix) {
    KeyValues out;
    const std::string p = prefix + ".";
    for (const auto& [k, v] : kv) {
        if (k.rfind(p, 0) == 0) {
            out[k.substr(p.size())] = v;
        }
    }
    return out;
}

double config_get(const KeyValues& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) {
            throw ConfigError("trailing characters in value of '" + key + "'");
        }
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("value of '" + key + "' is not a number: " + it->second);
    }
}

std::string config_get(const KeyValues& kv, const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

} // namespace spiraldim
