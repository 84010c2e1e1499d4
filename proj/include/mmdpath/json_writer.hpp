#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mmdpath::jsonw {

// Minimal JSON emitter with insertion-ordered object keys and doubles
// rendered at 17 significant digits, so identical runs serialize to identical
// bytes. Non-finite doubles become null.
class Value {
 public:
  using Array = std::vector<Value>;
  using Object = std::vector<std::pair<std::string, Value>>;

  Value() : data_(nullptr) {}
  Value(std::nullptr_t) : data_(nullptr) {}
  Value(bool b) : data_(b) {}
  Value(double d) : data_(d) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(std::int64_t i) : data_(i) {}
  Value(std::uint64_t u) : data_(u) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(Array a) : data_(std::move(a)) {}
  Value(Object o) : data_(std::move(o)) {}

  static Value object() { return Value(Object{}); }
  static Value array() { return Value(Array{}); }

  Value& set(const std::string& key, Value v) {
    std::get<Object>(data_).emplace_back(key, std::move(v));
    return *this;
  }
  Value& push(Value v) {
    std::get<Array>(data_).push_back(std::move(v));
    return *this;
  }

  template <typename Range>
  static Value number_array(const Range& r) {
    Value out = array();
    for (const auto& x : r) out.push(Value(static_cast<double>(x)));
    return out;
  }
  static Value string_array(const std::vector<std::string>& r) {
    Value out = array();
    for (const auto& s : r) out.push(Value(s));
    return out;
  }
  static Value int_array(const std::vector<int>& r) {
    Value out = array();
    for (int x : r) out.push(Value(static_cast<std::int64_t>(x)));
    return out;
  }

  std::string dump(int indent = 0) const {
    std::string out;
    write(out, indent, 0);
    return out;
  }

 private:
  std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string, Array,
               Object>
      data_;

  static void append_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
          } else {
            out.push_back(c);
          }
      }
    }
    out.push_back('"');
  }

  void newline(std::string& out, int indent, int depth) const {
    if (indent > 0) {
      out.push_back('\n');
      out.append(static_cast<std::size_t>(indent * depth), ' ');
    }
  }

  void write(std::string& out, int indent, int depth) const {
    if (std::holds_alternative<std::nullptr_t>(data_)) {
      out += "null";
    } else if (const bool* b = std::get_if<bool>(&data_)) {
      out += *b ? "true" : "false";
    } else if (const std::int64_t* i = std::get_if<std::int64_t>(&data_)) {
      out += std::to_string(*i);
    } else if (const std::uint64_t* u = std::get_if<std::uint64_t>(&data_)) {
      out += std::to_string(*u);
    } else if (const double* d = std::get_if<double>(&data_)) {
      if (!std::isfinite(*d)) {
        out += "null";
      } else {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.17g", *d);
        out += buf;
      }
    } else if (const std::string* s = std::get_if<std::string>(&data_)) {
      append_escaped(out, *s);
    } else if (const Array* a = std::get_if<Array>(&data_)) {
      out.push_back('[');
      for (std::size_t k = 0; k < a->size(); ++k) {
        if (k) out.push_back(',');
        newline(out, indent, depth + 1);
        (*a)[k].write(out, indent, depth + 1);
      }
      if (!a->empty()) newline(out, indent, depth);
      out.push_back(']');
    } else if (const Object* o = std::get_if<Object>(&data_)) {
      out.push_back('{');
      for (std::size_t k = 0; k < o->size(); ++k) {
        if (k) out.push_back(',');
        newline(out, indent, depth + 1);
        append_escaped(out, (*o)[k].first);
        out.push_back(':');
        if (indent > 0) out.push_back(' ');
        (*o)[k].second.write(out, indent, depth + 1);
      }
      if (!o->empty()) newline(out, indent, depth);
      out.push_back('}');
    }
  }
};

}  // namespace mmdpath::jsonw
