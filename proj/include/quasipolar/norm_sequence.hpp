#pragma once

// Derivative-norm sequences {M_j} stored in log form, and their associated
// function tau(r) = inf_j M_j / r^j.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasipolar/common.hpp"

namespace quasipolar {

enum class NormSource { Computed, Synthetic };

/// Result of one associated-function evaluation. `log_tau` is -inf when the
/// sequence is degenerate at this radius.
struct TauResult {
  double log_tau = 0.0;
  int argmin = 0;          // index j (of the possibly shifted sequence) attaining the inf
  bool truncated = false;  // the inf may be attained beyond the stored range; log_tau is an upper bound
  bool degenerate = false; // bounded growth: tau(r) = 0
  double value() const { return std::exp(log_tau); }
};

namespace detail {

/// Lower convex hull of the points (j, y_j) for finite y_j. The associated
/// function of the sequence is the Legendre-type transform over the hull.
class LowerHull {
 public:
  LowerHull() = default;
  explicit LowerHull(const std::vector<double>& y) {
    for (int j = 0; j < static_cast<int>(y.size()); ++j) {
      if (!std::isfinite(y[j])) continue;
      while (idx_.size() >= 2) {
        int a = idx_[idx_.size() - 2], b = idx_.back();
        // drop b when it lies on or above the chord a -> j
        double lhs = (y[b] - y[a]) * (j - a);
        double rhs = (y[j] - y[a]) * (b - a);
        if (lhs >= rhs)
          idx_.pop_back();
        else
          break;
      }
      idx_.push_back(j);
    }
    for (std::size_t i = 0; i + 1 < idx_.size(); ++i) {
      int a = idx_[i], b = idx_[i + 1];
      slopes_.push_back((y[b] - y[a]) / (b - a));
    }
    y_ = y;
  }

  bool empty() const { return idx_.empty(); }

  /// min_j (y_j - j*s) with the smallest minimizing j.
  std::pair<double, int> minimize(double s, bool& at_end) const {
    auto it = std::lower_bound(slopes_.begin(), slopes_.end(), s);
    std::size_t v = static_cast<std::size_t>(it - slopes_.begin());
    at_end = (v + 1 == idx_.size());
    int j = idx_[v];
    return {y_[j] - j * s, j};
  }

  /// Slopes between consecutive hull vertices (log ratios), nondecreasing.
  const std::vector<double>& slopes() const { return slopes_; }
  const std::vector<int>& vertices() const { return idx_; }

 private:
  std::vector<int> idx_;
  std::vector<double> slopes_;
  std::vector<double> y_;
};

}  // namespace detail

/// The sequence M_0..M_J of L2 norms of derivatives, held as log M_j so that
/// Gevrey-type growth such as j^{3j/2} does not overflow. Immutable.
class NormSequence {
 public:
  NormSequence() = default;

  /// `growth_limit`, when set, is an R with M_j <= C R^j for all j (the
  /// trigonometric-polynomial case); tau vanishes for r > R.
  NormSequence(std::vector<double> log_values, NormSource source, double certified_rel_err = 0.0,
               std::optional<double> growth_limit = std::nullopt, std::string note = {})
      : log_values_(std::move(log_values)),
        source_(source),
        rel_err_(certified_rel_err),
        growth_limit_(growth_limit),
        note_(std::move(note)) {
    if (log_values_.size() < 2)
      throw DomainError("circle_functions", "a norm sequence needs at least two entries");
    for (double v : log_values_)
      if (std::isnan(v) || v == kInf)
        throw DomainError("circle_functions", "norm sequence entries must be finite or zero");
    if (!growth_limit_) growth_limit_ = detect_growth_limit();
    hull_ = detail::LowerHull(log_values_);
    if (log_values_.size() > 4) {
      std::vector<double> shifted(log_values_.begin() + 3, log_values_.end());
      shifted_hull_ = detail::LowerHull(shifted);
    }
  }

  static NormSequence from_values(const std::vector<double>& values, NormSource source = NormSource::Synthetic) {
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values) {
      if (v < 0) throw DomainError("circle_functions", "norms must be nonnegative");
      logs.push_back(v == 0 ? kNegInf : std::log(v));
    }
    return NormSequence(std::move(logs), source);
  }

  std::size_t size() const { return log_values_.size(); }
  int max_j() const { return static_cast<int>(log_values_.size()) - 1; }
  double log_value(int j) const { return log_values_.at(j); }
  double value(int j) const { return std::exp(log_values_.at(j)); }
  const std::vector<double>& log_values() const { return log_values_; }
  NormSource source() const { return source_; }
  double certified_rel_err() const { return rel_err_; }
  const std::optional<double>& growth_limit() const { return growth_limit_; }
  bool degenerate() const { return growth_limit_.has_value(); }
  const std::string& note() const { return note_; }

  /// The same sequence multiplied by `factor` > 0.
  NormSequence scaled(double factor) const {
    if (!(factor > 0)) throw DomainError("circle_functions", "scale factor must be positive");
    std::vector<double> logs = log_values_;
    for (double& v : logs) v += std::log(factor);
    return NormSequence(std::move(logs), source_, rel_err_, growth_limit_, note_);
  }

  /// Monotone from index 1 (index 0 may carry the constant term).
  bool monotone_from_one(double rel_tol = 0.0) const {
    for (int j = 1; j < max_j(); ++j)
      if (log_values_[j + 1] < log_values_[j] + std::log1p(-rel_tol)) return false;
    return true;
  }

  /// M_j^2 <= M_{j-1} M_{j+1} for j >= 1, up to relative tolerance `rel_tol`.
  bool log_convex(double rel_tol) const {
    for (int j = 1; j < max_j(); ++j) {
      double lhs = 2.0 * log_values_[j];
      double rhs = log_values_[j - 1] + log_values_[j + 1];
      if (lhs == kNegInf) continue;
      if (lhs > rhs + std::log1p(rel_tol)) return false;
    }
    return true;
  }

  /// tau(r) = inf_{0<=j<=J} M_j / r^j.
  TauResult tau(double r) const { return eval(hull_, growth_limit_, r, 0); }

  /// tau~(r) = inf_{s>=0} M_{s+3} / r^s.
  TauResult shifted_tau(double r) const {
    if (shifted_hull_.empty())
      throw DomainError("growth_scales", "shifted associated function needs M_3 and beyond");
    return eval(shifted_hull_, growth_limit_, r, 3);
  }

  /// Largest radius for which the stored range certifies the tau minimizer
  /// (the last hull log-ratio, exponentiated).
  double reach() const {
    if (hull_.slopes().empty()) return 1.0;
    return std::exp(hull_.slopes().back());
  }
  const detail::LowerHull& hull() const { return hull_; }
  const detail::LowerHull& shifted_hull() const { return shifted_hull_; }

 private:
  static TauResult eval(const detail::LowerHull& hull, const std::optional<double>& limit, double r,
                        int /*shift*/) {
    if (!(r > 0)) throw DomainError("growth_scales", "tau requires r > 0");
    TauResult out;
    const double s = std::log(r);
    if (limit && (*limit <= 0.0 || s > std::log(*limit) + 1e-12)) {
      out.log_tau = kNegInf;
      out.degenerate = true;
      return out;
    }
    if (hull.empty()) {
      out.log_tau = kNegInf;
      out.degenerate = true;
      return out;
    }
    bool at_end = false;
    auto [v, j] = hull.minimize(s, at_end);
    out.log_tau = v;
    out.argmin = j;
    out.truncated = at_end && !limit;
    return out;
  }

  // A synthetic sequence whose trailing log-ratios are constant is log-linear
  // (M_j = M_0 R^j) and therefore of bounded growth.
  std::optional<double> detect_growth_limit() const {
    for (std::size_t j = 1; j < log_values_.size(); ++j)
      if (log_values_[j] == kNegInf) return 0.0;
    if (source_ != NormSource::Synthetic || log_values_.size() < 10) return std::nullopt;
    const std::size_t n = log_values_.size();
    const double last = log_values_[n - 1] - log_values_[n - 2];
    for (std::size_t j = n - 9; j + 1 < n; ++j) {
      double ratio = log_values_[j + 1] - log_values_[j];
      if (std::abs(ratio - last) > 1e-12 * std::max(1.0, std::abs(last))) return std::nullopt;
    }
    return std::exp(last);
  }

  std::vector<double> log_values_;
  NormSource source_ = NormSource::Synthetic;
  double rel_err_ = 0.0;
  std::optional<double> growth_limit_;
  std::string note_;
  detail::LowerHull hull_;
  detail::LowerHull shifted_hull_;
};

/// Generators for synthetic norm sequences used in scale analysis.
namespace synthetic {

/// M_j = (c L_j)^j with L_j = j^p, M_0 = 1.
inline NormSequence gevrey_power(double p, int max_j, double c = 1.0) {
  if (!(p > 0) || !(c > 0) || max_j < 4) throw DomainError("circle_functions", "invalid gevrey-power sequence");
  std::vector<double> logs(max_j + 1, 0.0);
  for (int j = 1; j <= max_j; ++j) logs[j] = j * (std::log(c) + p * std::log(static_cast<double>(j)));
  return NormSequence(std::move(logs), NormSource::Synthetic);
}

/// M_j = (c b^j)^j, i.e. L_j = b^j.
inline NormSequence gevrey_geometric(double base, int max_j, double c = 1.0) {
  if (!(base > 1) || !(c > 0) || max_j < 4) throw DomainError("circle_functions", "invalid gevrey-geometric sequence");
  std::vector<double> logs(max_j + 1, 0.0);
  for (int j = 0; j <= max_j; ++j) logs[j] = j * std::log(c) + static_cast<double>(j) * j * std::log(base);
  return NormSequence(std::move(logs), NormSource::Synthetic);
}

/// M_j = j!.
inline NormSequence factorial(int max_j) {
  if (max_j < 4) throw DomainError("circle_functions", "factorial sequence needs max_j >= 4");
  std::vector<double> logs(max_j + 1);
  for (int j = 0; j <= max_j; ++j) logs[j] = std::lgamma(j + 1.0);
  return NormSequence(std::move(logs), NormSource::Synthetic);
}

/// M_j = M_0 R^j (bounded growth; degenerate beyond R).
inline NormSequence log_linear(double m0, double ratio, int max_j) {
  if (!(m0 > 0) || !(ratio > 0) || max_j < 1) throw DomainError("circle_functions", "invalid log-linear sequence");
  std::vector<double> logs(max_j + 1);
  for (int j = 0; j <= max_j; ++j) logs[j] = std::log(m0) + j * std::log(ratio);
  return NormSequence(std::move(logs), NormSource::Synthetic, 0.0, ratio);
}

}  // namespace synthetic

/// Componentwise supremum of several sequences (vector-valued functions).
inline NormSequence pointwise_max(const std::vector<NormSequence>& seqs) {
  if (seqs.empty()) throw DomainError("certify", "no components");
  std::size_t n = seqs.front().size();
  for (const auto& s : seqs) n = std::min(n, s.size());
  std::vector<double> logs(n, kNegInf);
  double err = 0.0;
  bool computed = false;
  std::optional<double> limit;
  bool all_limited = true;
  for (const auto& s : seqs) {
    for (std::size_t j = 0; j < n; ++j) logs[j] = std::max(logs[j], s.log_value(static_cast<int>(j)));
    err = std::max(err, s.certified_rel_err());
    computed = computed || s.source() == NormSource::Computed;
    if (s.growth_limit())
      limit = std::max(limit.value_or(0.0), *s.growth_limit());
    else
      all_limited = false;
  }
  return NormSequence(std::move(logs), computed ? NormSource::Computed : NormSource::Synthetic, err,
                      all_limited ? limit : std::nullopt);
}

}  // namespace quasipolar
