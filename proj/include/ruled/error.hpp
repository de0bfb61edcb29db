#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ruled {

enum class ErrorKind {
  input,       // malformed arguments (dimension mismatch, bad sizes)
  domain,      // parameter outside a field's domain
  config,      // unknown family name, bad option value
  parse,       // scene file could not be parsed
  validation,  // scene parsed but violates an invariant
  regularity,  // vanishing speed / singular point where a regular one is required
  degeneracy,  // rank assumption violated (dependent frame, singular striction matrix)
  frame,       // frame not orthonormal within tolerance
  pivot,       // no frame pivot satisfies the sub-degree condition
  numeric      // integration or other numerical failure
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::config: return "config";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::regularity: return "regularity";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::frame: return "frame";
    case ErrorKind::pivot: return "pivot";
    case ErrorKind::numeric: return "numeric";
  }
  return "unknown";
}

/// Base exception for every failure raised by the library. Carries a kind and,
/// when the failure is tied to a curve parameter, the offending t.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> t = std::nullopt)
      : std::runtime_error(compose(kind, what, t)), kind_(kind), t_(t) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::optional<double> parameter() const noexcept { return t_; }

 private:
  static std::string compose(ErrorKind kind, const std::string& what, std::optional<double> t) {
    std::ostringstream msg;
    msg << to_string(kind) << " error: " << what;
    if (t) msg << " (at t=" << *t << ")";
    return msg.str();
  }

  ErrorKind kind_;
  std::optional<double> t_;
};

/// Six significant digits, for messages.
inline std::string format_number(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what,
                              std::optional<double> t = std::nullopt) {
  throw Error(kind, what, t);
}

}  // namespace ruled
