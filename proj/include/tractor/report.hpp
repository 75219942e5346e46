#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <string>
#include <utility>

namespace tractor {

/// Outcome of one named identity check, evaluated over `evaluated` instances.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t evaluated = 0;
  std::string witness;  // first failing instance, empty on pass
  std::string note;

  void fail(std::string w) {
    if (passed) witness = std::move(w);
    passed = false;
  }
};

struct Report {
  std::string title;
  std::deque<CheckResult> checks;  // deque: references from add() stay valid
  bool vacuous = false;  // no instances were supplied to check

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }

  CheckResult& add(std::string name) {
    CheckResult c;
    c.name = std::move(name);
    checks.push_back(std::move(c));
    return checks.back();
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  CheckResult* find(const std::string& name) {
    for (auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  /// Adds or merges into the check named `name`.
  CheckResult& at(const std::string& name) {
    if (auto* c = find(name)) return *c;
    return add(name);
  }
};

}  // namespace tractor
