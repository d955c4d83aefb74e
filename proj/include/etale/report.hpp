#pragma once

#include <string>
#include <utility>

namespace etale {

/// Outcome of a validation: either a pass, or the first failing check
/// together with a human-readable witness.
struct Report {
  bool passed = true;
  std::string check;
  std::string witness;

  static Report pass() { return {}; }
  static Report fail(std::string check, std::string witness) {
    return {false, std::move(check), std::move(witness)};
  }

  explicit operator bool() const { return passed; }

  std::string summary() const {
    if (passed) return "PASS";
    if (witness.empty()) return "FAIL " + check;
    return "FAIL " + check + " (witness: " + witness + ")";
  }
};

}  // namespace etale
