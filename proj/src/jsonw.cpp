#include "bmfield/jsonw.hpp"

#include <cmath>
#include <cstdio>

namespace bm {

std::string JsonWriter::number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string JsonWriter::escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::comma() {
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back()) out_ += ",";
        first_in_scope_.back() = false;
    }
}

void JsonWriter::key_prefix(const std::string& key) {
    comma();
    out_ += "\"" + escape(key) + "\":";
}

JsonWriter& JsonWriter::begin_object() {
    comma();
    out_ += "{";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::begin_object(const std::string& key) {
    key_prefix(key);
    out_ += "{";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += "}";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
    key_prefix(key);
    out_ += "[";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma();
    out_ += "[";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += "]";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::kv(const std::string& key, double v) {
    key_prefix(key);
    out_ += number(v);
    return *this;
}

JsonWriter& JsonWriter::kv(const std::string& key, int v) {
    key_prefix(key);
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::kv(const std::string& key, std::int64_t v) {
    key_prefix(key);
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::kv(const std::string& key, std::uint64_t v) {
    key_prefix(key);
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::kv(const std::string& key, bool v) {
    key_prefix(key);
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::kv(const std::string& key, const std::string& v) {
    key_prefix(key);
    out_ += "\"" + escape(v) + "\"";
    return *this;
}

JsonWriter& JsonWriter::kv(const std::string& key, const char* v) {
    return kv(key, std::string(v));
}

JsonWriter& JsonWriter::value(double v) {
    comma();
    out_ += number(v);
    return *this;
}

JsonWriter& JsonWriter::value(int v) {
    comma();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    comma();
    out_ += "\"" + escape(v) + "\"";
    return *this;
}

std::string JsonWriter::str() const { return out_; }

}  // namespace bm
