#include "wifiexp/kv_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "wifiexp/units.hpp"

namespace wifiexp::config {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::parse_error, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void type_error(const std::string& key, const Value& v, const char* wanted) {
  throw Error(ErrorKind::config_invalid,
              "key '" + key + "' (line " + std::to_string(v.line) + ") must be " + wanted);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool only_comment(const std::string& s) {
  const std::string rest = trim(s);
  return rest.empty() || rest.front() == '#';
}

bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

class Cursor {
 public:
  Cursor(const std::string& text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  Value value() {
    skip_space();
    if (pos_ >= text_.size()) fail(line_, "missing value");
    const char c = text_[pos_];
    if (c == '"') return quoted();
    if (c == '[') return array();
    return bare();
  }

 private:
  Value quoted() {
    Value v;
    v.type = Value::Type::string;
    v.line = line_;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) break;
        const char esc = text_[pos_++];
        switch (esc) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(line_, std::string("unsupported escape \\") + esc);
        }
      }
      v.text.push_back(c);
    }
    if (pos_ >= text_.size()) fail(line_, "unterminated string");
    ++pos_;
    return v;
  }

  Value array() {
    Value v;
    v.type = Value::Type::array;
    v.line = line_;
    ++pos_;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) fail(line_, "unterminated array");
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      Value item = value();
      if (item.type == Value::Type::array) fail(line_, "nested arrays are not supported");
      v.items.push_back(std::move(item));
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
    }
  }

  Value bare() {
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != '#' && text_[pos_] != ' ' && text_[pos_] != '\t') {
      ++pos_;
    }
    Value v;
    v.line = line_;
    std::string token = text_.substr(start, pos_ - start);
    if (token == "true" || token == "false") {
      v.type = Value::Type::boolean;
      v.boolean = token == "true";
      v.text = token;
      return v;
    }
    std::string digits;
    std::copy_if(token.begin(), token.end(), std::back_inserter(digits),
                 [](char c) { return c != '_'; });
    if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
    double parsed = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), parsed);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
      fail(line_, "cannot parse value '" + token + "'");
    }
    v.type = Value::Type::number;
    v.number = parsed;
    v.text = digits;
    return v;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

const Value& Table::at(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorKind::config_invalid, "missing key '" + key + "'");
  return it->second;
}

void Table::set(const std::string& key, Value value) { entries_[key] = std::move(value); }

std::vector<std::string> Table::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

double Table::number(const std::string& key) const {
  const Value& v = at(key);
  if (v.type != Value::Type::number) type_error(key, v, "a number");
  return v.number;
}

double Table::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t Table::unsigned_or(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const Value& v = at(key);
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (v.type != Value::Type::number || ec != std::errc() || end != v.text.data() + v.text.size()) {
    type_error(key, v, "an unsigned integer");
  }
  return out;
}

std::int64_t Table::integer_or(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const Value& v = at(key);
  std::int64_t out = 0;
  const auto [end, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (v.type != Value::Type::number || ec != std::errc() || end != v.text.data() + v.text.size()) {
    type_error(key, v, "an integer");
  }
  return out;
}

bool Table::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Value& v = at(key);
  if (v.type != Value::Type::boolean) type_error(key, v, "true or false");
  return v.boolean;
}

std::string Table::string(const std::string& key) const {
  const Value& v = at(key);
  if (v.type != Value::Type::string) type_error(key, v, "a string");
  return v.text;
}

std::string Table::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

std::vector<double> Table::numbers_or(const std::string& key,
                                      std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  const Value& v = at(key);
  if (v.type == Value::Type::number) return {v.number};
  if (v.type != Value::Type::array) type_error(key, v, "a number array");
  std::vector<double> out;
  for (const auto& item : v.items) {
    if (item.type != Value::Type::number) type_error(key, v, "a number array");
    out.push_back(item.number);
  }
  return out;
}

std::vector<std::string> Table::strings_or(const std::string& key,
                                           std::vector<std::string> fallback) const {
  if (!has(key)) return fallback;
  const Value& v = at(key);
  if (v.type == Value::Type::string) return {v.text};
  if (v.type != Value::Type::array) type_error(key, v, "a string array");
  std::vector<std::string> out;
  for (const auto& item : v.items) {
    if (item.type != Value::Type::string) type_error(key, v, "a string array");
    out.push_back(item.text);
  }
  return out;
}

void Table::reject_unknown(const std::vector<std::string>& allowed,
                           const std::string& where) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorKind::config_invalid, "unknown key '" + key + "' in " + where +
                                                 " (line " + std::to_string(value.line) + ")");
    }
  }
}

const Table* Document::table(const std::string& name) const {
  auto it = tables.find(name);
  return it == tables.end() ? nullptr : &it->second;
}

// Text before any comment, and the '[' nesting depth it leaves open.
static std::pair<std::string, int> code_and_depth(const std::string& text) {
  int depth = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '\\') ++i;
      else if (c == '"') quoted = false;
    } else if (c == '"') {
      quoted = true;
    } else if (c == '#') {
      return {text.substr(0, i), depth};
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return {text, depth};
}

Document parse(const std::string& text) {
  Document doc;
  Table* current = &doc.root;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.rfind("[[", 0) == 0) {
      const auto close = line.find("]]");
      if (close == std::string::npos || !valid_key(trim(line.substr(2, close - 2))) ||
          !only_comment(line.substr(close + 2))) {
        fail(line_no, "malformed array-of-tables header");
      }
      const std::string name = trim(line.substr(2, close - 2));
      if (doc.tables.count(name)) fail(line_no, "'" + name + "' already defined as a table");
      auto& list = doc.table_arrays[name];
      list.emplace_back();
      current = &list.back();
      continue;
    }
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos || !valid_key(trim(line.substr(1, close - 1))) ||
          !only_comment(line.substr(close + 1))) {
        fail(line_no, "malformed table header");
      }
      const std::string name = trim(line.substr(1, close - 1));
      if (doc.tables.count(name) || doc.table_arrays.count(name)) {
        fail(line_no, "duplicate table '" + name + "'");
      }
      current = &doc.tables[name];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) fail(line_no, "invalid key '" + key + "'");
    if (current->has(key)) fail(line_no, "duplicate key '" + key + "'");
    std::string rest = line.substr(eq + 1);
    const int start_line = line_no;
    for (auto [code, depth] = code_and_depth(rest); depth > 0; std::tie(code, depth) = code_and_depth(rest)) {
      if (!std::getline(in, raw)) fail(start_line, "unterminated array");
      ++line_no;
      rest = code + ' ' + trim(raw);
    }
    Cursor cursor(rest, start_line);
    Value value = cursor.value();
    if (!cursor.at_end()) fail(line_no, "trailing characters after value");
    current->set(key, std::move(value));
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace wifiexp::config
