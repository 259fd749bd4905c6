#pragma once

// Conditional Poisson (CP) sampling: independent Bernoulli(p_k) trials
// conditioned on their sum. The pmf of a subset z of size l0 is
//   prod_{k in z} w_k / R(l0, all),   w_k = p_k / (1 - p_k),
// where R(s, A) is the elementary symmetric polynomial of degree s in the
// odds of A.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zotab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Inclusion probability of a cell whose crossing lines have residual sums r_j,
// lengths n_j and g_j already-determined cells. Requires 1 <= r_j <= n_j - 1 - g_j.
inline double pd(std::span<const int> r, std::span<const int> n, std::span<const int> g) {
  if (r.size() != n.size() || r.size() != g.size() || r.empty())
    throw std::invalid_argument("pd: r, n, g must have equal non-zero length");
  double num = 1.0, den = 1.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (g[j] < 0 || r[j] < 1 || r[j] > n[j] - 1 - g[j])
      throw std::domain_error("pd: trivial or forced cell (resolve structures first)");
    num *= r[j];
    den *= n[j] - r[j] - g[j];
  }
  return num / (num + den);
}

inline double p3(int r, int c, int n, int m, int g_r, int g_c) {
  const int rs[] = {r, c}, ns[] = {n, m}, gs[] = {g_r, g_c};
  return pd(rs, ns, gs);
}

inline double odds(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("odds: p must lie in (0,1)");
  return p / (1.0 - p);
}

// log of the odds p/(1-p) for the pd() configuration, computed directly from
// the integer products so no precision is lost through p.
inline double log_odds_d(std::span<const int> r, std::span<const int> n, std::span<const int> g) {
  double lw = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (g[j] < 0 || r[j] < 1 || r[j] > n[j] - 1 - g[j])
      throw std::domain_error("log_odds_d: trivial or forced cell (resolve structures first)");
    lw += std::log(static_cast<double>(r[j])) - std::log(static_cast<double>(n[j] - r[j] - g[j]));
  }
  return lw;
}

class WeightVector {
 public:
  WeightVector() = default;

  static WeightVector from_odds(std::vector<double> w) {
    WeightVector v;
    v.log_w_.reserve(w.size());
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("weights must be finite and >= 0");
      v.log_w_.push_back(x > 0.0 ? std::log(x) : kNegInf);
    }
    return v;
  }

  static WeightVector from_log(std::vector<double> lw) {
    for (double x : lw)
      if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
        throw std::invalid_argument("log weights must be finite or -inf");
    WeightVector v;
    v.log_w_ = std::move(lw);
    return v;
  }

  std::size_t size() const { return log_w_.size(); }
  double log_weight(std::size_t k) const { return log_w_[k]; }
  double weight(std::size_t k) const { return std::exp(log_w_[k]); }
  std::span<const double> log_weights() const { return log_w_; }

  std::size_t positive_count() const {
    return static_cast<std::size_t>(std::count_if(log_w_.begin(), log_w_.end(), [](double x) { return x > kNegInf; }));
  }

 private:
  std::vector<double> log_w_;
};

// log R(s, A) over the units listed in `subset`. Rows of the O(|A| s)
// recurrence are rescaled by their maximum and the offset is carried in log
// space. Returns -inf when R = 0.
inline double esym_log(const WeightVector& w, std::span<const std::size_t> subset, int s) {
  if (s < 0) throw std::invalid_argument("esym_log: negative degree");
  if (s == 0) return 0.0;
  if (static_cast<std::size_t>(s) > subset.size()) return kNegInf;

  double shift = kNegInf;
  for (std::size_t k : subset) shift = std::max(shift, w.log_weight(k));
  if (shift == kNegInf) return kNegInf;

  std::vector<double> e(static_cast<std::size_t>(s) + 1, 0.0);
  e[0] = 1.0;
  double log_scale = 0.0;
  for (std::size_t k : subset) {
    const double wk = std::exp(w.log_weight(k) - shift);
    if (wk == 0.0) continue;
    for (int t = s; t >= 1; --t) e[t] += wk * e[t - 1];
    const double top = *std::max_element(e.begin(), e.end());
    if (top > 1e100) {
      for (double& x : e) x /= top;
      log_scale += std::log(top);
    }
  }
  if (e[s] <= 0.0) return kNegInf;
  return std::log(e[s]) + log_scale + s * shift;
}

inline double esym_log(const WeightVector& w, int s) {
  std::vector<std::size_t> all(w.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return esym_log(w, all, s);
}

// log CP probability of the subset `z` (indices into w) given sum l0.
inline double cp_pmf_log(const WeightVector& w, int l0, std::span<const std::size_t> z) {
  if (l0 < 0 || static_cast<std::size_t>(l0) > w.size()) throw std::invalid_argument("cp_pmf_log: l0 out of range");
  if (z.size() != static_cast<std::size_t>(l0)) throw std::invalid_argument("cp_pmf_log: |z| != l0");
  const double log_norm = esym_log(w, l0);
  if (log_norm == kNegInf) throw std::domain_error("cp_pmf_log: infeasible, fewer positive weights than l0");
  double num = 0.0;
  for (std::size_t k : z) num += w.log_weight(k);
  return num - log_norm;
}

struct CPSample {
  std::vector<std::size_t> chosen;  // ascending
  double log_prob = 0.0;
};

// Raised when the drafting probabilities degenerate mid-draw. With the
// preconditions met this indicates numerical underflow; callers treat it as a
// rejection.
struct CPDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Drafting sampler: at step k a remaining unit j is chosen with probability
//   w_j R(t-1, A - j) / (t R(t, A)),  t = l0 - k + 1,
// which reproduces the CP law exactly. The returned log_prob is the closed-form
// pmf of the final subset, independent of the order units were drafted in.
template <class URBG>
CPSample cp_draft_sample(const WeightVector& w, int l0, URBG& rng) {
  if (l0 < 0 || static_cast<std::size_t>(l0) > w.size()) throw std::invalid_argument("cp_draft_sample: l0 out of range");
  if (w.positive_count() < static_cast<std::size_t>(l0))
    throw std::domain_error("cp_draft_sample: infeasible, fewer positive weights than l0");

  CPSample out;
  if (l0 == 0) return out;

  std::vector<std::size_t> remaining;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w.log_weight(k) > kNegInf) remaining.push_back(k);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> scaled, prefix, suffix, numer;
  for (int t = l0; t >= 1; --t) {
    const std::size_t len = remaining.size();
    double shift = kNegInf;
    for (std::size_t k : remaining) shift = std::max(shift, w.log_weight(k));
    scaled.resize(len);
    for (std::size_t i = 0; i < len; ++i) scaled[i] = std::exp(w.log_weight(remaining[i]) - shift);

    // prefix row i holds R(0..t-1) over units [0, i); suffix row i over [i, len).
    const std::size_t width = static_cast<std::size_t>(t);
    prefix.assign((len + 1) * width, 0.0);
    suffix.assign((len + 1) * width, 0.0);
    prefix[0] = 1.0;
    suffix[len * width] = 1.0;
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t s = 0; s < width; ++s) {
        double v = prefix[i * width + s];
        if (s > 0) v += scaled[i] * prefix[i * width + s - 1];
        prefix[(i + 1) * width + s] = v;
      }
    }
    for (std::size_t i = len; i-- > 0;) {
      for (std::size_t s = 0; s < width; ++s) {
        double v = suffix[(i + 1) * width + s];
        if (s > 0) v += scaled[i] * suffix[(i + 1) * width + s - 1];
        suffix[i * width + s] = v;
      }
    }
    numer.assign(len, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      double r = 0.0;  // R(t-1, A - unit i)
      for (std::size_t a = 0; a < width; ++a) r += prefix[i * width + a] * suffix[(i + 1) * width + (width - 1 - a)];
      numer[i] = scaled[i] * r;
      total += numer[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) throw CPDegenerate("drafting probabilities underflowed");

    const double u = unif(rng) * total;
    std::size_t pick = len - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      acc += numer[i];
      if (u < acc && numer[i] > 0.0) {
        pick = i;
        break;
      }
    }
    while (numer[pick] <= 0.0 && pick > 0) --pick;
    out.chosen.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  std::sort(out.chosen.begin(), out.chosen.end());
  out.log_prob = cp_pmf_log(w, l0, out.chosen);
  return out;
}

}  // namespace zotab
