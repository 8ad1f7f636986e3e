#pragma once

#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gearquest/schema_error.hpp"

namespace gearquest::detail {

using nlohmann::json;

[[noreturn]] inline void schema_fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

// Reads one JSON object field by field and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) schema_fail(where_, "expected an object");
  }

  const std::string& where() const { return where_; }
  std::string path(std::string_view key) const { return where_ + "." + std::string(key); }

  const json* find(std::string_view key) {
    seen_.emplace(key);
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const json& required(std::string_view key) {
    const json* v = find(key);
    if (v == nullptr) schema_fail(path(key), "missing required field");
    return *v;
  }

  std::string string(std::string_view key) {
    const json& v = required(key);
    if (!v.is_string()) schema_fail(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::string string_or(std::string_view key, std::string fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) schema_fail(path(key), "expected a string");
    return v->get<std::string>();
  }

  long long integer(std::string_view key) {
    const json& v = required(key);
    if (!v.is_number_integer()) schema_fail(path(key), "expected an integer");
    return v.get<long long>();
  }

  long long integer_or(std::string_view key, long long fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) schema_fail(path(key), "expected an integer");
    return v->get<long long>();
  }

  int small_int(std::string_view key) { return narrow(key, integer(key)); }
  int small_int_or(std::string_view key, int fallback) {
    return narrow(key, integer_or(key, fallback));
  }

  double number(std::string_view key) {
    const json& v = required(key);
    if (!v.is_number()) schema_fail(path(key), "expected a number");
    return v.get<double>();
  }

  bool boolean(std::string_view key) {
    const json& v = required(key);
    if (!v.is_boolean()) schema_fail(path(key), "expected a boolean");
    return v.get<bool>();
  }

  bool boolean_or(std::string_view key, bool fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) schema_fail(path(key), "expected a boolean");
    return v->get<bool>();
  }

  const json& array(std::string_view key) {
    const json& v = required(key);
    if (!v.is_array()) schema_fail(path(key), "expected an array");
    return v;
  }

  const json* array_opt(std::string_view key) {
    const json* v = find(key);
    if (v != nullptr && !v->is_array()) schema_fail(path(key), "expected an array");
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (seen_.count(it.key()) == 0) schema_fail(path(it.key()), "unknown field");
    }
  }

 private:
  int narrow(std::string_view key, long long v) const {
    if (v < -2'000'000'000LL || v > 2'000'000'000LL) schema_fail(path(key), "integer out of range");
    return static_cast<int>(v);
  }

  const json& j_;
  std::string where_;
  std::set<std::string, std::less<>> seen_;
};

inline std::string index_path(const std::string& where, std::size_t i) {
  return where + "[" + std::to_string(i) + "]";
}

}  // namespace gearquest::detail
