#pragma once

#include <stdexcept>
#include <string>

namespace hamcert {

// Exact-arithmetic cost cap exceeded (e.g. Lidstone order too high).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerically checked hypothesis failed hard (invalid data for a cone).
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression evaluation hit a domain problem (division by zero etc.).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem-config validation failure with location context.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_no = 0, std::string field_name = {})
      : std::runtime_error(format(msg, line_no, field_name)),
        line(line_no),
        field(std::move(field_name)) {}
  int line;
  std::string field;

 private:
  static std::string format(const std::string& msg, int line_no, const std::string& field_name) {
    std::string out = "config error";
    if (line_no > 0) out += " (line " + std::to_string(line_no) + ")";
    if (!field_name.empty()) out += " [" + field_name + "]";
    return out + ": " + msg;
  }
};

}  // namespace hamcert
