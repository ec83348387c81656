#include "algebroid/report.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

namespace gla {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    case Status::MismatchFlag: return "mismatch-flag";
  }
  return "fail";
}

void Report::append(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::any_failed() const {
  for (const auto& c : checks)
    if (c.status == Status::Fail) return true;
  return false;
}

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.check == name) return &c;
  return nullptr;
}

double Report::max_of(const std::string& prefix) const {
  double m = 0.0;
  for (const auto& c : checks)
    if (c.check.rfind(prefix, 0) == 0) m = std::max(m, c.max_residual);
  return m;
}

CheckResult judge(std::string check, std::string anchor, const Residual& r, const SampleSet& samples,
                  double tol) {
  CheckResult c;
  c.check = std::move(check);
  c.anchor = std::move(anchor);
  c.max_residual = r.max_abs;
  if (samples.size() > 0) c.worst_point = samples.point(r.worst);
  if (!r.ok()) {
    c.status = Status::Fail;
    c.note = r.error;
  } else {
    c.status = r.max_abs <= tol ? Status::Pass : Status::Fail;
  }
  return c;
}

CheckResult judge_flag(std::string check, std::string anchor, const Residual& r,
                       const SampleSet& samples, double tol) {
  CheckResult c = judge(std::move(check), std::move(anchor), r, samples, tol);
  if (c.status == Status::Fail && r.ok()) {
    c.status = Status::MismatchFlag;
    c.note = "transcription mismatch against the independently computed side";
  }
  return c;
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json j;
    j["check"] = c.check;
    j["status"] = status_name(c.status);
    if (std::isfinite(c.max_residual)) j["max_residual"] = c.max_residual;
    else j["max_residual"] = nullptr;
    j["worst_point"] = {{"x", c.worst_point.x}, {"y", c.worst_point.y}};
    j["anchor"] = c.anchor;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string to_text(const Report& report) {
  std::string out;
  char buf[64];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "%-13s %11.3e  ", status_name(c.status), c.max_residual);
    out += buf;
    out += c.check;
    out += "  [" + c.anchor + "]";
    if (!c.note.empty()) out += "  (" + c.note + ")";
    out += '\n';
  }
  return out;
}

}  // namespace gla
