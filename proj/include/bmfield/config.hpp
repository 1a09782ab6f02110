#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bm {

// Flat sectioned key-value configuration:
//   [section]
//   key = value          # comment
// Overrides use the "section.key=value" form.
class Config {
  public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    void apply_override(const std::string& spec);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    int get_int(const std::string& section, const std::string& key) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const;

    // Scalar params of one section as a double map (non-numeric values skipped).
    std::map<std::string, double> section_doubles(const std::string& section) const;
    std::map<std::string, std::vector<double>> section_double_lists(
        const std::string& section) const;

    // Canonical text (sorted sections/keys) for provenance echo in reports.
    std::string canonical() const;

  private:
    const std::string* find(const std::string& section, const std::string& key) const;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace bm
