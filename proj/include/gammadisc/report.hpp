#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gammadisc {

enum class CheckStatus { Pass, Fail, Skipped };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double residual = 0.0;
  std::string details;
  std::optional<bool> value;  // truth value, for checks that evaluate a predicate
};

struct VerificationReport {
  std::string instance_digest;
  std::vector<CheckRecord> checks;
  std::map<std::string, double> tolerances;
  std::map<std::string, double> timings_ms;

  /// Records a residual check; non-finite residuals always fail.
  CheckRecord& check(std::string name, double residual, double tol, std::string details = {}) {
    const bool ok = std::isfinite(residual) && residual <= tol;
    checks.push_back({std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail,
                      std::isfinite(residual) ? residual : -1.0, std::move(details), std::nullopt});
    return checks.back();
  }

  CheckRecord& expect(std::string name, bool ok, std::string details = {}) {
    checks.push_back({std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, 0.0, std::move(details),
                      std::nullopt});
    return checks.back();
  }

  CheckRecord& predicate(std::string name, bool value, std::string details = {}) {
    checks.push_back({std::move(name), CheckStatus::Pass, 0.0, std::move(details), value});
    return checks.back();
  }

  CheckRecord& skip(std::string name, std::string details = {}) {
    checks.push_back({std::move(name), CheckStatus::Skipped, 0.0, std::move(details), std::nullopt});
    return checks.back();
  }

  void append(const VerificationReport& other, std::string_view prefix = {}) {
    for (auto c : other.checks) {
      if (!prefix.empty()) c.name = std::string(prefix) + "." + c.name;
      checks.push_back(std::move(c));
    }
    for (const auto& [k, v] : other.tolerances) tolerances[k] = v;
    for (const auto& [k, v] : other.timings_ms) timings_ms[std::string(prefix) + k] = v;
  }

  const CheckRecord* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  bool passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }
};

/// Wall-clock stopwatch in milliseconds.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace gammadisc
