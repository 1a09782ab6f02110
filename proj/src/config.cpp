#include "bmfield/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bmfield/errors.hpp"

namespace bm {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& value, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError(path + ": cannot parse '" + value + "' as a number");
    return v;
}
}  // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            cfg.sections_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside of any [section]");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void Config::apply_override(const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + spec + "': expected section.key=value");
    const std::string path = trim(spec.substr(0, eq));
    const std::string value = trim(spec.substr(eq + 1));
    const std::size_t dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
        throw ConfigError("override '" + spec + "': expected section.key=value");
    sections_[path.substr(0, dot)][path.substr(dot + 1)] = value;
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    return &kit->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) throw ConfigError(section + "." + key + ": required key missing");
    return *v;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return parse_double(get_string(section, key), section + "." + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const std::string* v = find(section, key);
    return v ? parse_double(*v, section + "." + key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    const std::string* v = find(section, key);
    return v ? int(parse_double(*v, section + "." + key)) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const {
    return int(get_double(section, key));
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(v->c_str(), &end, 10);
    if (end == v->c_str() || *end != '\0')
        throw ConfigError(section + "." + key + ": cannot parse '" + *v + "' as an integer");
    return parsed;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(section + "." + key + ": cannot parse '" + *v + "' as a boolean");
}

std::vector<double> Config::get_double_list(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    std::string token;
    std::istringstream in(*v);
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        out.push_back(parse_double(token, section + "." + key));
    }
    if (out.empty()) throw ConfigError(section + "." + key + ": empty list");
    return out;
}

std::map<std::string, double> Config::section_doubles(const std::string& section) const {
    std::map<std::string, double> out;
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return out;
    for (const auto& [key, value] : sit->second) {
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && *end == '\0') out[key] = v;
    }
    return out;
}

std::map<std::string, std::vector<double>> Config::section_double_lists(
    const std::string& section) const {
    std::map<std::string, std::vector<double>> out;
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return out;
    for (const auto& [key, value] : sit->second) {
        if (value.find(',') == std::string::npos) continue;
        std::vector<double> list;
        std::string token;
        std::istringstream in(value);
        bool ok = true;
        while (std::getline(in, token, ',')) {
            token = trim(token);
            if (token.empty()) continue;
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end == token.c_str() || *end != '\0') {
                ok = false;
                break;
            }
            list.push_back(v);
        }
        if (ok && !list.empty()) out[key] = list;
    }
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [section, kv] : sections_) {
        out += "[" + section + "]\n";
        for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
    }
    return out;
}

}  // namespace bm
