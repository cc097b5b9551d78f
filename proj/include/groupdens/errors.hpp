#pragma once

#include <stdexcept>
#include <string>

namespace groupdens {

// Error taxonomy. Every failure is loud and typed; nothing silently
// truncates or approximates past its contract.
struct Error : std::runtime_error {
  explicit Error(const std::string& m) : std::runtime_error(m) {}
};

// Element encoding does not belong to the group at hand.
struct InvalidElement : Error {
  explicit InvalidElement(const std::string& m) : Error("invalid element: " + m) {}
};

// A computation needed points outside every available window.
struct WindowTooSmall : Error {
  explicit WindowTooSmall(const std::string& m) : Error("window too small: " + m) {}
};

// Request is outside the supported shape/group combinations.
struct Unsupported : Error {
  explicit Unsupported(const std::string& m) : Error("unsupported: " + m) {}
};

// Size/degree caps exceeded.
struct CapacityError : Error {
  explicit CapacityError(const std::string& m) : Error("capacity: " + m) {}
};

// DSL parse failure; carries position and expectation.
struct ParseError : Error {
  int line, column;
  std::string expected;
  ParseError(int ln, int col, const std::string& exp, const std::string& got)
      : Error("parse error at " + std::to_string(ln) + ":" + std::to_string(col) +
              ": expected " + exp + ", got " + got),
        line(ln), column(col), expected(exp) {}
};

}  // namespace groupdens
