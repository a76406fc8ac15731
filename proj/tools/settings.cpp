#include "settings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "parabgmt/io.hpp"

namespace parabgmt::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  s = std::string_view(s.data(), s.size());
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Settings::Settings(std::vector<Param> params) : params_(std::move(params)) {
  for (const auto& p : params_) defaults_[p.key] = {p.fallback, "default"};
}

const Param& Settings::param(const std::string& key) const {
  const auto it = std::find_if(params_.begin(), params_.end(), [&](const Param& p) { return p.key == key; });
  if (it == params_.end()) throw std::logic_error("undeclared setting '" + key + "'");
  return *it;
}

void Settings::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path);
}

void Settings::load_text(const std::string& text, const std::string& source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    load_report(text, source);
    return;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string body = line.substr(0, hash);
    if (trim(body).empty()) continue;
    const auto eq = body.find('=');
    const auto indent = body.find_first_not_of(" \t") + 1;
    if (eq == std::string::npos) throw ParseError(source, number, indent, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ParseError(source, number, indent, "empty key");
    if (std::none_of(params_.begin(), params_.end(), [&](const Param& p) { return p.key == key; })) {
      throw ParseError(source, number, indent, "unknown key '" + key + "' for this command");
    }
    const auto vpos = body.find_first_not_of(" \t", eq + 1);
    file_[key] = {trim(body.substr(eq + 1)),
                  source + ":" + std::to_string(number) + ":" + std::to_string(vpos == std::string::npos ? eq + 2 : vpos + 1)};
  }
}

void Settings::load_report(const std::string& text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(source, line, col, "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("config") || !doc["config"].is_object()) {
    throw ParseError(source, 1, 1, "JSON config must be a report with a \"config\" object");
  }
  for (const auto& [key, v] : doc["config"].items()) {
    if (std::none_of(params_.begin(), params_.end(), [&](const Param& p) { return p.key == key; })) {
      throw ConfigError(source + ": unknown key '" + key + "' for this command");
    }
    if (!v.is_string()) throw ConfigError(source + ": value of '" + key + "' must be a string");
    file_[key] = {v.get<std::string>(), source + ": config." + key};
  }
}

void Settings::set_flag(const std::string& key, std::string value) {
  param(key);
  flags_[key] = {std::move(value), "--" + key};
}

const Settings::Value& Settings::value(const std::string& key) const {
  param(key);
  if (const auto it = flags_.find(key); it != flags_.end()) return it->second;
  if (const auto it = file_.find(key); it != file_.end()) return it->second;
  return defaults_.at(key);
}

const std::string& Settings::text(const std::string& key) const { return value(key).text; }

void Settings::invalid(const std::string& key, const std::string& expected) const {
  const auto& v = value(key);
  throw ConfigError(v.origin + ": invalid value '" + v.text + "' for '" + key + "': expected " + expected);
}

double Settings::real(const std::string& key) const {
  const auto v = parse_number<double>(text(key));
  if (!v || !std::isfinite(*v)) invalid(key, "a finite number");
  return *v;
}

long long Settings::integer(const std::string& key) const {
  const auto v = parse_number<long long>(text(key));
  if (!v) invalid(key, "an integer");
  return *v;
}

bool Settings::boolean(const std::string& key) const {
  const auto& t = text(key);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  invalid(key, "true or false");
}

std::vector<double> Settings::reals(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  for (const auto& item : split_list(text(key))) {
    const auto v = parse_number<double>(item);
    if (!v || !std::isfinite(*v)) invalid(key, "a comma-separated list of numbers");
    out.push_back(*v);
  }
  return out;
}

std::vector<int> Settings::integers(const std::string& key) const {
  std::vector<int> out;
  if (!has(key)) return out;
  for (const auto& item : split_list(text(key))) {
    const auto v = parse_number<int>(item);
    if (!v) invalid(key, "a comma-separated list of integers");
    out.push_back(*v);
  }
  return out;
}

const std::string& Settings::choice(const std::string& key, const std::vector<std::string>& choices) const {
  const auto& t = text(key);
  if (std::find(choices.begin(), choices.end(), t) != choices.end()) return t;
  std::string list;
  for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
  invalid(key, "one of " + list);
}

std::map<std::string, std::string> Settings::effective() const {
  std::map<std::string, std::string> out;
  for (const auto& p : params_) out[p.key] = text(p.key);
  return out;
}

}  // namespace parabgmt::cli
