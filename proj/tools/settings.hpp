#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parabgmt::cli {

/// Bad key or value in the effective configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Param {
  std::string key;
  std::string fallback;
  std::string help;
};

/// Flat key=value configuration with precedence flags > config file > defaults. Values are kept
/// as the text they were given so a report's echo reproduces the run exactly.
class Settings {
 public:
  explicit Settings(std::vector<Param> params);

  [[nodiscard]] const std::vector<Param>& params() const { return params_; }

  /// Flat `key = value` lines (`#` comments) or a JSON report with a "config" object.
  void load_file(const std::string& path);
  void load_text(const std::string& text, const std::string& source);
  void set_flag(const std::string& key, std::string value);

  [[nodiscard]] const std::string& text(const std::string& key) const;
  [[nodiscard]] bool has(const std::string& key) const { return !text(key).empty(); }
  [[nodiscard]] double real(const std::string& key) const;
  [[nodiscard]] long long integer(const std::string& key) const;
  [[nodiscard]] bool boolean(const std::string& key) const;
  [[nodiscard]] std::vector<double> reals(const std::string& key) const;
  [[nodiscard]] std::vector<int> integers(const std::string& key) const;
  /// One of `choices`, else a ConfigError listing them.
  [[nodiscard]] const std::string& choice(const std::string& key, const std::vector<std::string>& choices) const;

  /// Effective values of every parameter, in key order.
  [[nodiscard]] std::map<std::string, std::string> effective() const;

 private:
  struct Value {
    std::string text;
    std::string origin;  // "default", "flag" or file:line:col
  };
  const Param& param(const std::string& key) const;
  [[nodiscard]] const Value& value(const std::string& key) const;
  [[noreturn]] void invalid(const std::string& key, const std::string& expected) const;
  void load_report(const std::string& text, const std::string& source);

  std::vector<Param> params_;
  std::map<std::string, Value> file_;
  std::map<std::string, Value> flags_;
  std::map<std::string, Value> defaults_;
};

}  // namespace parabgmt::cli
