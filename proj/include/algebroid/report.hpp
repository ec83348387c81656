#pragma once

#include <string>
#include <vector>

#include "algebroid/expr.hpp"
#include "algebroid/sampling.hpp"

namespace gla {

enum class Status { Pass, Fail, Inconclusive, MismatchFlag };
const char* status_name(Status s);

struct CheckResult {
  std::string check;
  Status status = Status::Pass;
  double max_residual = 0.0;
  FiberPoint worst_point;
  std::string anchor;
  std::string note;
};

struct Report {
  std::vector<CheckResult> checks;

  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void append(const Report& other);
  bool any_failed() const;
  const CheckResult* find(const std::string& name) const;
  double max_of(const std::string& prefix) const;
};

// pass/fail by tolerance; domain errors always fail
CheckResult judge(std::string check, std::string anchor, const Residual& r, const SampleSet& samples,
                  double tol);
// same, but an over-tolerance residual is reported as a transcription mismatch rather than a failure
CheckResult judge_flag(std::string check, std::string anchor, const Residual& r,
                       const SampleSet& samples, double tol);

std::string to_json(const Report& report);
std::string to_text(const Report& report);

}  // namespace gla
