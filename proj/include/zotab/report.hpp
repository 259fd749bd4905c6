#pragma once

// Human-readable and JSON renderings of an EstimateReport.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <json.hpp>

#include "zotab/estimator.hpp"

namespace zotab {

struct RunInfo {
  std::uint64_t seed = 0;
  std::string input;                   // file path or fixture name
  std::optional<double> runtime_ms;    // left out unless timing was requested
};

namespace detail {

inline nlohmann::json log10_or_null(double log_value) {
  if (log_value == kNegInf) return nullptr;
  return log_value / std::log(10.0);
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const EstimateReport& r, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["input"] = info.input;
  j["n"] = r.n;
  j["accepted"] = r.accepted;
  j["acceptance_rate"] = r.acceptance_rate();
  j["estimate_log10"] = detail::log10_or_null(r.estimate_log);
  j["estimate_display"] = r.estimate_display;
  if (r.accepted)
    j["cv2"] = r.cv2;
  else
    j["cv2"] = nullptr;
  if (r.bootstrap) {
    const auto& b = *r.bootstrap;
    j["ci_method"] = "bootstrap-t (percentile)";
    j["bootstrap_B"] = b.replications;
    j["alpha"] = b.alpha;
    j["ci_estimate_log10"] = {detail::log10_or_null(b.estimate_log.lo), detail::log10_or_null(b.estimate_log.hi)};
    j["ci_estimate_display"] = {format_log_value(b.estimate_log.lo), format_log_value(b.estimate_log.hi)};
    j["ci_cv2"] = {b.cv2.lo, b.cv2.hi};
  }
  j["seed"] = info.seed;
  if (info.runtime_ms) j["runtime_ms"] = *info.runtime_ms;
  return j;
}

inline std::string to_text(const EstimateReport& r) {
  std::string s;
  if (r.accepted == 0) {
    s = "All " + std::to_string(r.n) + " samples were rejected; no estimate.\n";
    return s;
  }
  s += "An estimator is " + r.estimate_display + " with cv^2=" + detail::fixed(r.cv2, 4) + ".\n";
  s += "Acceptance rate " + detail::fixed(100.0 * r.acceptance_rate(), 1) + "% (" + std::to_string(r.accepted) +
       " of " + std::to_string(r.n) + ").\n";
  if (r.bootstrap) {
    const auto& b = *r.bootstrap;
    const std::string level = detail::fixed(100.0 * (1.0 - b.alpha), 1);
    s += level + "% bootstrap interval (B=" + std::to_string(b.replications) + "): estimate [" +
         format_log_value(b.estimate_log.lo) + ", " + format_log_value(b.estimate_log.hi) + "], cv^2 [" +
         detail::fixed(b.cv2.lo, 4) + ", " + detail::fixed(b.cv2.hi, 4) + "].\n";
  }
  return s;
}

}  // namespace zotab
