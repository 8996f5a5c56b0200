#pragma once

#include <stdexcept>
#include <string>

namespace ubp {

/// Input-validation failure codes. CLI exit code 1.
enum class ParseCode {
  MalformedJson,
  BadShape,
  EmptyFamily,
  EmptyRule,
  OriginInRule,
  DuplicateOffset,
  OffsetOverflow,
};

inline const char* parse_code_name(ParseCode c) {
  switch (c) {
    case ParseCode::MalformedJson: return "MalformedJson";
    case ParseCode::BadShape: return "BadShape";
    case ParseCode::EmptyFamily: return "EmptyFamily";
    case ParseCode::EmptyRule: return "EmptyRule";
    case ParseCode::OriginInRule: return "OriginInRule";
    case ParseCode::DuplicateOffset: return "DuplicateOffset";
    case ParseCode::OffsetOverflow: return "OffsetOverflow";
  }
  return "Unknown";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseCode code, std::string msg, int rule_index = -1)
      : std::runtime_error(format(code, msg, rule_index)),
        code_(code),
        rule_index_(rule_index) {}

  ParseCode code() const { return code_; }

  /// Index of the offending rule in input order, or -1 when not applicable.
  int rule_index() const { return rule_index_; }

 private:
  static std::string format(ParseCode code, const std::string& msg, int idx) {
    std::string s = parse_code_name(code);
    if (idx >= 0) s += "(" + std::to_string(idx) + ")";
    if (!msg.empty()) s += ": " + msg;
    return s;
  }

  ParseCode code_;
  int rule_index_;
};

/// A valid input handed to an operation whose contract it does not meet
/// (wrong classification kind, non-bracketing bounds, window too small).
/// CLI exit code 2.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// A computation abandoned because a resource budget ran out. CLI exit code 3.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ubp
