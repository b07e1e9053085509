#ifndef TSMC_ERRORS_HPP
#define TSMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsmc {

/// A malformed configuration value or spec string. `line` is 0 when the
/// value did not come from a file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = 0)
      : std::runtime_error(format(field, message, line)), field_{field}, message_{message}, line_{line} {}

  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& message, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + message;
  }

  std::string field_;
  std::string message_;
  int line_;
};

/// An estimator was handed input that does not meet its preconditions
/// (too short a trace, too few tours).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tsmc

#endif  // TSMC_ERRORS_HPP
