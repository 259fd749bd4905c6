#pragma once

// Estimating |Sigma| from an importance-weight stream, the squared
// coefficient of variation of the weights, and non-parametric bootstrap
// percentile intervals for both.
//
// All arithmetic on weights happens relative to the largest log weight, so
// streams whose weights reach 1e150 and beyond are handled without overflow.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zotab/rng.hpp"
#include "zotab/sis.hpp"

namespace zotab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {

inline double max_log(const std::vector<double>& log_y) {
  double m = kNegInf;
  for (double v : log_y) m = std::max(m, v);
  return m;
}

// Welford accumulator; a constant input yields exactly zero variance.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double cv2() const {
    if (n < 2 || mean <= 0.0) return 0.0;
    return (m2 / static_cast<double>(n - 1)) / (mean * mean);
  }
};

}  // namespace detail

// log of (1/N) sum Y_i; -inf when every sample was rejected.
inline double estimate_count(const WeightStream& ws) {
  if (ws.log_y.empty()) throw std::invalid_argument("estimate_count: empty weight stream");
  const double top = detail::max_log(ws.log_y);
  if (top == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : ws.log_y)
    if (v > kNegInf) sum += std::exp(v - top);
  return top + std::log(sum / static_cast<double>(ws.log_y.size()));
}

// Sample variance over mean squared, computed on accepted weights only.
// A single acceptance gives 0.
inline double cv2(const WeightStream& ws) {
  const double top = detail::max_log(ws.log_y);
  if (top == kNegInf) throw std::domain_error("cv2: no accepted samples");
  detail::Moments mom;
  for (double v : ws.log_y)
    if (v > kNegInf) mom.add(std::exp(v - top));
  return mom.cv2();
}

// Nearest-rank percentile: the ceil(q*B)-th smallest of B sorted values.
inline double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("nearest_rank: no values");
  const double b = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * b - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

struct BootstrapResult {
  Interval estimate_log;  // log |Sigma| bounds
  Interval cv2;
  std::size_t replications = 0;
  double alpha = 0.05;
};

// Percentile bootstrap. Each replication resamples the whole stream (rejected
// entries included) N at a time with replacement, recomputes the count
// estimate and cv2 (on the accepted entries of the resample), and the
// interval is the [alpha/2, 1 - alpha/2] nearest-rank percentile pair of the
// B replications. Replication b draws from its own (seed, b) stream.
//
// This is the procedure historically labelled "bootstrap-t" in the SIS
// literature; it is a plain percentile interval, not a studentized one.
inline BootstrapResult bootstrap_ci(const WeightStream& ws, std::size_t B, double alpha, std::uint64_t seed) {
  if (B < 1) throw std::invalid_argument("bootstrap_ci: B must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("bootstrap_ci: alpha must lie in (0,1)");
  const double top = detail::max_log(ws.log_y);
  if (top == kNegInf) throw std::domain_error("bootstrap_ci: no accepted samples");

  const std::size_t n = ws.log_y.size();
  std::vector<double> y(n);
  std::vector<char> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = ws.log_y[i] > kNegInf;
    y[i] = acc[i] ? std::exp(ws.log_y[i] - top) : 0.0;
  }

  std::vector<double> est(B), cvs(B);
  for (std::size_t b = 0; b < B; ++b) {
    auto rng = stream_rng(seed, b, /*purpose=*/2);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    double sum = 0.0;
    detail::Moments mom;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = pick(rng);
      sum += y[i];
      if (acc[i]) mom.add(y[i]);
    }
    est[b] = sum > 0.0 ? top + std::log(sum / static_cast<double>(n)) : kNegInf;
    cvs[b] = mom.cv2();
  }
  std::sort(est.begin(), est.end());
  std::sort(cvs.begin(), cvs.end());

  BootstrapResult r;
  r.replications = B;
  r.alpha = alpha;
  r.estimate_log = {nearest_rank(est, alpha / 2), nearest_rank(est, 1 - alpha / 2)};
  r.cv2 = {nearest_rank(cvs, alpha / 2), nearest_rank(cvs, 1 - alpha / 2)};
  return r;
}

// d.dddddde+EE rendering of exp(log_value).
inline std::string format_log_value(double log_value) {
  if (log_value == kNegInf) return "0";
  if (!std::isfinite(log_value)) return "nan";
  const double l10 = log_value / std::log(10.0);
  double expo = std::floor(l10);
  double mant = std::pow(10.0, l10 - expo);
  if (std::round(mant * 1e6) >= 1e7) {
    mant /= 10.0;
    expo += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6fe%+03d", mant, static_cast<int>(expo));
  return buf;
}

struct EstimateReport {
  std::size_t n = 0;
  std::size_t accepted = 0;
  double estimate_log = kNegInf;
  std::string estimate_display;
  double cv2 = 0.0;
  std::optional<BootstrapResult> bootstrap;

  double acceptance_rate() const { return n ? static_cast<double>(accepted) / static_cast<double>(n) : 0.0; }
};

inline EstimateReport summarize(const WeightStream& ws) {
  EstimateReport r;
  r.n = ws.size();
  r.accepted = ws.accepted();
  r.estimate_log = estimate_count(ws);
  r.estimate_display = format_log_value(r.estimate_log);
  r.cv2 = r.accepted ? cv2(ws) : 0.0;
  return r;
}

}  // namespace zotab
