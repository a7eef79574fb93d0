#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace qrop {

enum class Status { Pass, Fail, Error };

inline const char* status_str(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    default: return "error";
  }
}

/// One verified statement. For exact checks `residual` is the number of
/// monomials left in the difference of the two sides (so 0 means identical).
struct CheckResult {
  std::string name;
  std::string anchor;  ///< the identity being checked, in words or symbols
  Status status = Status::Pass;
  double residual = 0;
  double tolerance = 0;
  std::string detail;
  double seconds = 0;

  [[nodiscard]] bool pass() const { return status == Status::Pass; }
};

struct CheckReport {
  std::vector<CheckResult> items;

  [[nodiscard]] bool all_pass() const {
    for (const auto& c : items)
      if (!c.pass()) return false;
    return !items.empty();
  }
  [[nodiscard]] std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : items) n += c.pass() ? 0 : 1;
    return n;
  }
  void add(CheckResult r) { items.push_back(std::move(r)); }
  void merge(const CheckReport& o) { items.insert(items.end(), o.items.begin(), o.items.end()); }
  /// First failing item's name and detail, for assertion messages.
  [[nodiscard]] std::string first_failure() const {
    for (const auto& c : items)
      if (!c.pass()) return c.name + ": " + c.detail;
    return {};
  }
};

/// Exact check helper: passes iff the residual element has no terms.
template <class Elem, class Space>
CheckResult exact_check(std::string name, std::string anchor, const Elem& residual, const Space& sp) {
  CheckResult r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.residual = static_cast<double>(residual.size());
  r.status = residual.is_zero() ? Status::Pass : Status::Fail;
  if (!residual.is_zero()) {
    r.detail = residual.str(sp);
    if (r.detail.size() > 400) r.detail = r.detail.substr(0, 400) + "...";
  }
  return r;
}

/// Measure wall time of a callable producing a CheckResult.
template <class F>
CheckResult timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r = f();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace qrop
