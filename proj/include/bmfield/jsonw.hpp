#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bm {

// Minimal JSON emitter. Keys keep insertion order and doubles print with 17
// significant digits, so identical inputs give byte-identical documents.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& begin_object(const std::string& key);
    JsonWriter& end_object();
    JsonWriter& begin_array(const std::string& key);
    JsonWriter& begin_array();
    JsonWriter& end_array();

    JsonWriter& kv(const std::string& key, double v);
    JsonWriter& kv(const std::string& key, int v);
    JsonWriter& kv(const std::string& key, std::int64_t v);
    JsonWriter& kv(const std::string& key, std::uint64_t v);
    JsonWriter& kv(const std::string& key, bool v);
    JsonWriter& kv(const std::string& key, const std::string& v);
    JsonWriter& kv(const std::string& key, const char* v);

    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(const std::string& v);

    std::string str() const;

    static std::string number(double v);
    static std::string escape(const std::string& s);

  private:
    void comma();
    void key_prefix(const std::string& key);
    std::string out_;
    std::vector<bool> first_in_scope_;
};

}  // namespace bm
