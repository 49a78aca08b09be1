#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wifiexp::config {

/// One value of the TOML-style key/value format: bool, number, string or a
/// flat array of those.
struct Value {
  enum class Type { boolean, number, string, array };

  Type type = Type::number;
  bool boolean = false;
  double number = 0.0;
  std::string text;  // string contents, or the raw token for numbers
  std::vector<Value> items;
  int line = 0;
};

class Table {
 public:
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const Value& at(const std::string& key) const;
  void set(const std::string& key, Value value);
  std::vector<std::string> keys() const;

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) const;
  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  /// A scalar number is accepted as a one-element list.
  std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback) const;
  std::vector<std::string> strings_or(const std::string& key,
                                      std::vector<std::string> fallback) const;

  /// Throws config-invalid naming the first key outside allowed.
  void reject_unknown(const std::vector<std::string>& allowed, const std::string& where) const;

 private:
  std::map<std::string, Value> entries_;
};

struct Document {
  Table root;
  std::map<std::string, Table> tables;                     // [name]
  std::map<std::string, std::vector<Table>> table_arrays;  // [[name]]

  const Table* table(const std::string& name) const;
};

/// Parses the subset: comments, [table], [[array]], key = value with
/// strings, numbers, booleans and single-line arrays.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace wifiexp::config
