#pragma once

// Functions on the unit circle given by rules for their Fourier coefficients
// c_k, with certified truncation of every infinite sum.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasipolar/common.hpp"
#include "quasipolar/norm_sequence.hpp"

namespace quasipolar {

enum class Family { ExplicitList, Geometric, ExpPower, LogSquaredExp, SyntheticNorms };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::ExplicitList: return "explicit-list";
    case Family::Geometric: return "geometric";
    case Family::ExpPower: return "exp-power";
    case Family::LogSquaredExp: return "log-squared-exp";
    case Family::SyntheticNorms: return "synthetic-norms";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "explicit-list") return Family::ExplicitList;
  if (s == "geometric") return Family::Geometric;
  if (s == "exp-power") return Family::ExpPower;
  if (s == "log-squared-exp") return Family::LogSquaredExp;
  if (s == "synthetic-norms") return Family::SyntheticNorms;
  throw DomainError("circle_functions", "unknown family '" + s + "'");
}

/// Largest index any truncation search will consider.
inline constexpr long kMaxTruncation = 1L << 26;

/// Default accuracies: absolute for evaluation, relative for norms.
inline constexpr double kDefaultEval = 1e-10;
inline constexpr double kDefaultNormRel = 1e-10;

/// A function f(z) = sum_k c_k z^k on |z| = 1, specified by a coefficient
/// family. Rules are immutable values; `scaled` returns a new rule.
class CoefficientRule {
 public:
  static CoefficientRule explicit_list(const std::map<long, Complex>& coeffs, double scale = 1.0) {
    CoefficientRule r(Family::ExplicitList, scale);
    for (const auto& [k, c] : coeffs)
      if (c != Complex(0.0)) r.coeffs_[k] = c;
    return r;
  }

  /// c_k = A rho^{|k|}.
  static CoefficientRule geometric(double amplitude, double rho, double scale = 1.0) {
    if (!(amplitude > 0)) throw DomainError("circle_functions", "geometric: amplitude A must be > 0");
    if (!(rho > 0 && rho < 1)) throw DomainError("circle_functions", "geometric: ratio rho must lie in (0,1)");
    CoefficientRule r(Family::Geometric, scale);
    r.amplitude_ = amplitude;
    r.rho_ = rho;
    return r;
  }

  /// c_k = A exp(-beta |k|^alpha), alpha in (0,1].
  static CoefficientRule exp_power(double amplitude, double beta, double alpha, double scale = 1.0) {
    if (!(amplitude > 0)) throw DomainError("circle_functions", "exp-power: amplitude A must be > 0");
    if (!(beta > 0)) throw DomainError("circle_functions", "exp-power: beta must be > 0");
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("circle_functions", "exp-power: alpha must lie in (0,1]");
    CoefficientRule r(Family::ExpPower, scale);
    r.amplitude_ = amplitude;
    r.beta_ = beta;
    r.alpha_ = alpha;
    return r;
  }

  /// c_k = A exp(-beta log^2(1+|k|)). Summable for every beta > 0 since the
  /// coefficients decay faster than any power of |k|.
  static CoefficientRule log_squared_exp(double amplitude, double beta, double scale = 1.0) {
    if (!(amplitude > 0)) throw DomainError("circle_functions", "log-squared-exp: amplitude A must be > 0");
    if (!(beta > 0)) throw DomainError("circle_functions", "log-squared-exp: beta must be > 0 (non-summable otherwise)");
    CoefficientRule r(Family::LogSquaredExp, scale);
    r.amplitude_ = amplitude;
    r.beta_ = beta;
    return r;
  }

  /// A rule known only through its derivative norms.
  static CoefficientRule synthetic(NormSequence norms, double scale = 1.0) {
    CoefficientRule r(Family::SyntheticNorms, scale);
    r.norms_ = std::move(norms);
    return r;
  }

  Family family() const { return family_; }
  double scale() const { return scale_; }
  bool pointwise() const { return family_ != Family::SyntheticNorms; }
  bool symmetric() const { return family_ != Family::ExplicitList && family_ != Family::SyntheticNorms; }
  double amplitude() const { return amplitude_; }
  double rho() const { return rho_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  const std::map<long, Complex>& coefficients() const { return coeffs_; }

  CoefficientRule scaled(double factor) const {
    if (!(factor > 0)) throw DomainError("circle_functions", "scale factor must be positive");
    CoefficientRule r = *this;
    r.scale_ *= factor;
    return r;
  }

  /// The synthetic norm sequence with the rule's scale applied.
  NormSequence synthetic_norms() const {
    if (family_ != Family::SyntheticNorms)
      throw DomainError("circle_functions", "rule has computed, not synthetic, norms");
    return scale_ == 1.0 ? norms_ : norms_.scaled(scale_);
  }

  /// Largest |k| with c_k != 0, excluding k = 0; only for explicit lists.
  long max_degree() const {
    long d = 0;
    for (const auto& [k, c] : coeffs_)
      if (k != 0) d = std::max(d, std::abs(k));
    return d;
  }

  Complex coefficient(long k) const {
    require_pointwise("coefficient");
    if (family_ == Family::ExplicitList) {
      auto it = coeffs_.find(k);
      return it == coeffs_.end() ? Complex(0.0) : it->second * scale_;
    }
    return Complex(std::exp(log_abs_coefficient(k)));
  }

  /// log |c_k| (scale included); -inf for vanishing coefficients.
  double log_abs_coefficient(long k) const {
    require_pointwise("coefficient");
    const double ak = static_cast<double>(std::abs(k));
    const double base = std::log(amplitude_ * scale_);
    switch (family_) {
      case Family::ExplicitList: {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? kNegInf : std::log(std::abs(it->second) * scale_);
      }
      case Family::Geometric: return base + ak * std::log(rho_);
      case Family::ExpPower: return base - beta_ * std::pow(ak, alpha_);
      case Family::LogSquaredExp: {
        double u = std::log1p(ak);
        return base - beta_ * u * u;
      }
      case Family::SyntheticNorms: break;
    }
    return kNegInf;
  }

  /// log of a certified upper bound on sum_{|k|>K} |c_k|.
  double log_abs_tail(long K) const {
    require_pointwise("tail");
    if (K < 0) return kInf;
    if (family_ == Family::ExplicitList) {
      double s = 0.0;
      for (const auto& [k, c] : coeffs_)
        if (std::abs(k) > K) s += std::abs(c) * scale_;
      return s == 0.0 ? kNegInf : std::log(s);
    }
    return std::log(2.0) + std::log(amplitude_ * scale_) + log_one_side_abs_tail(K);
  }

  /// log of a certified upper bound on sum_{|k|>K} k^{2j} |c_k|^2, or +inf
  /// when the family's closed form does not apply yet at this K.
  double log_weighted_tail(int j, long K) const {
    require_pointwise("tail");
    if (family_ == Family::ExplicitList) {
      double acc = kNegInf;
      for (const auto& [k, c] : coeffs_)
        if (std::abs(k) > K) acc = detail::log_add(acc, weighted_log_term(j, k));
      return acc;
    }
    return std::log(2.0) + 2.0 * std::log(amplitude_ * scale_) + log_one_side_weighted_tail(j, K);
  }

  /// log(k^{2j} |c_k|^2), with 0^0 = 1.
  double weighted_log_term(int j, long k) const {
    double lc = log_abs_coefficient(k);
    if (lc == kNegInf) return kNegInf;
    if (j == 0) return 2.0 * lc;
    if (k == 0) return kNegInf;
    return 2.0 * j * std::log(static_cast<double>(std::abs(k))) + 2.0 * lc;
  }

  void require_pointwise(const char* what) const {
    if (!pointwise())
      throw DomainError("circle_functions", std::string("synthetic-norms rule has no pointwise ") + what);
  }

 private:
  CoefficientRule(Family f, double scale) : family_(f), scale_(scale) {
    if (!(scale > 0) || !std::isfinite(scale)) throw DomainError("circle_functions", "scale must be a positive real");
  }

  // Upper incomplete gamma bound: Gamma(s, y) <= y^{s-1} e^{-y} / (1 - (s-1)/y)
  // for s >= 1 and y > s - 1; Gamma(s) otherwise.
  static double log_upper_gamma_bound(double s, double y) {
    if (s == 1.0) return -y;
    if (y > 2.0 * (s - 1.0) && y > 0) return (s - 1.0) * std::log(y) - y - std::log1p(-(s - 1.0) / y);
    return std::lgamma(s);
  }

  // log of int_K^inf exp(-b x^alpha) dx.
  double log_stretched_integral(double b, long K) const {
    const double s = 1.0 / alpha_;
    const double y = b * std::pow(static_cast<double>(K), alpha_);
    return -std::log(alpha_) - s * std::log(b) + log_upper_gamma_bound(s, y);
  }

  // Gaussian tail: log of int_{u0}^inf exp(c - a (u - mu)^2) du.
  static double log_gaussian_tail(double a, double mu, double c, double u0) {
    if (u0 > mu) {
      double d = u0 - mu;
      return c - a * d * d - std::log(2.0 * a * d);
    }
    return c + 0.5 * std::log(kPi / a);
  }

  // Tails below are for sum_{k>K} of the family shape with unit amplitude.
  double log_one_side_abs_tail(long K) const {
    const double Kd = static_cast<double>(K);
    switch (family_) {
      case Family::Geometric: return (Kd + 1.0) * std::log(rho_) - std::log1p(-rho_);
      case Family::ExpPower:
        if (alpha_ == 1.0) return -beta_ * (Kd + 1.0) - std::log(-std::expm1(-beta_));
        return log_stretched_integral(beta_, K);
      case Family::LogSquaredExp:
        // substitute u = log(1+x): integrand exp(u - beta u^2)
        return log_gaussian_tail(beta_, 1.0 / (2.0 * beta_), 1.0 / (4.0 * beta_), std::log1p(Kd));
      default: break;
    }
    return kInf;
  }

  double log_one_side_weighted_tail(int j, long K) const {
    const double Kd = static_cast<double>(K);
    switch (family_) {
      case Family::Geometric: {
        // ratio of consecutive terms decreases in k
        const double k1 = Kd + 1.0;
        double log_q = 2.0 * j * std::log1p(1.0 / k1) + 2.0 * std::log(rho_);
        if (log_q >= 0) return kInf;
        double log_t = (j == 0 ? 0.0 : 2.0 * j * std::log(k1)) + 2.0 * k1 * std::log(rho_);
        return log_t - std::log(-std::expm1(log_q));
      }
      case Family::ExpPower: {
        // k^{2j} e^{-2 beta k^a} = [k^{2j} e^{-(2-eta) beta k^a}] e^{-eta beta k^a}; the bracket is
        // nonincreasing once K^a >= 2j / ((2-eta) a beta).
        if (K < 1) return kInf;
        double best = kInf;
        const double Ka = std::pow(Kd, alpha_);
        for (double eta : {0.125, 0.25, 0.5, 1.0}) {
          if (Ka < 2.0 * j / ((2.0 - eta) * alpha_ * beta_)) continue;
          double lead = 2.0 * j * std::log(Kd) - (2.0 - eta) * beta_ * Ka;
          double rest = alpha_ == 1.0 ? -eta * beta_ * Kd - std::log(eta * beta_)
                                      : log_stretched_integral(eta * beta_, K);
          best = std::min(best, lead + rest);
        }
        return best;
      }
      case Family::LogSquaredExp: {
        // k^{2j} <= (1+k)^{2j}; integrand in u = log(1+x) is exp((2j+1)u - 2 beta u^2)
        const double u0 = std::log1p(Kd);
        const double a = 2.0 * beta_;
        const double mu = (2.0 * j + 1.0) / (2.0 * a);
        if (u0 <= mu) return kInf;
        const double c = (2.0 * j + 1.0) * (2.0 * j + 1.0) / (4.0 * a);
        return log_gaussian_tail(a, mu, c, u0);
      }
      default: break;
    }
    return kInf;
  }

  Family family_;
  double scale_ = 1.0;
  double amplitude_ = 1.0, rho_ = 0.0, beta_ = 0.0, alpha_ = 1.0;
  std::map<long, Complex> coeffs_;
  NormSequence norms_;
};

/// Structured description of a rule, as read from a function-spec document.
struct RuleSpec {
  std::string name;
  Family family = Family::Geometric;
  std::map<std::string, double> params;
  std::map<long, Complex> coefficients;  // explicit-list
  // synthetic-norms
  std::string sequence;                 // gevrey-power | gevrey-geometric | factorial | log-linear | values
  std::vector<double> values;           // for sequence = values
  int max_j = 400;
  double scale = 1.0;
};

namespace detail {
inline double param(const RuleSpec& spec, const std::string& key, std::optional<double> fallback = std::nullopt) {
  auto it = spec.params.find(key);
  if (it != spec.params.end()) return it->second;
  if (fallback) return *fallback;
  throw DomainError("circle_functions", std::string(family_name(spec.family)) + ": missing parameter '" + key + "'");
}
}  // namespace detail

/// Validated construction from a structured spec.
inline CoefficientRule make_rule(const RuleSpec& spec) {
  using detail::param;
  switch (spec.family) {
    case Family::ExplicitList:
      if (spec.coefficients.empty()) throw DomainError("circle_functions", "explicit-list: no coefficients");
      return CoefficientRule::explicit_list(spec.coefficients, spec.scale);
    case Family::Geometric:
      return CoefficientRule::geometric(param(spec, "A", 1.0), param(spec, "rho"), spec.scale);
    case Family::ExpPower:
      return CoefficientRule::exp_power(param(spec, "A", 1.0), param(spec, "beta"), param(spec, "alpha"), spec.scale);
    case Family::LogSquaredExp:
      return CoefficientRule::log_squared_exp(param(spec, "A", 1.0), param(spec, "beta"), spec.scale);
    case Family::SyntheticNorms: {
      const std::string& seq = spec.sequence;
      NormSequence norms;
      if (seq == "gevrey-power")
        norms = synthetic::gevrey_power(param(spec, "p"), spec.max_j, param(spec, "c", 1.0));
      else if (seq == "gevrey-geometric")
        norms = synthetic::gevrey_geometric(param(spec, "base"), spec.max_j, param(spec, "c", 1.0));
      else if (seq == "factorial")
        norms = synthetic::factorial(spec.max_j);
      else if (seq == "log-linear")
        norms = synthetic::log_linear(param(spec, "M0", 1.0), param(spec, "R"), spec.max_j);
      else if (seq == "values")
        norms = NormSequence::from_values(spec.values);
      else
        throw DomainError("circle_functions", "synthetic-norms: unknown sequence '" + seq + "'");
      return CoefficientRule::synthetic(std::move(norms), spec.scale);
    }
  }
  throw DomainError("circle_functions", "unhandled family");
}

/// Minimal K >= 0 with certified sum_{|k|>K} |c_k| <= eps. Finite explicit
/// lists are never truncated: K is the largest |k| in the support.
inline long truncation_index(const CoefficientRule& rule, double eps) {
  if (!(eps > 0)) throw DomainError("circle_functions", "truncation tolerance must be > 0");
  if (!rule.pointwise()) throw DomainError("circle_functions", "synthetic-norms rule cannot be truncated");
  if (rule.family() == Family::ExplicitList) {
    long d = 0;
    for (const auto& [k, c] : rule.coefficients()) d = std::max(d, std::abs(k));
    return d;
  }
  const double target = std::log(eps);
  auto ok = [&](long K) { return rule.log_abs_tail(K) <= target; };
  long hi = 1;
  while (!ok(hi)) {
    if (hi >= kMaxTruncation)
      throw CertificationError("circle_functions", "coefficient tail cannot be certified below tolerance");
    hi *= 2;
  }
  long lo = -1;  // invariant: !ok(lo) or lo == -1, ok(hi)
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  while (hi > 0 && ok(hi - 1)) --hi;
  return hi;
}

/// f(z) for |z| = 1 with absolute error at most eps.
inline Complex evaluate(const CoefficientRule& rule, Complex z, double eps = kDefaultEval) {
  if (!rule.pointwise()) throw DomainError("circle_functions", "synthetic-norms rule cannot be evaluated");
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw DomainError("circle_functions", "evaluation point must lie on |z| = 1");
  const double theta = std::arg(z);
  detail::CompensatedSum<Complex> acc;
  if (rule.family() == Family::ExplicitList) {
    for (const auto& [k, c] : rule.coefficients()) acc.add(c * rule.scale() * std::polar(1.0, k * theta));
    return acc.value();
  }
  const long K = truncation_index(rule, eps);
  for (long k = K; k >= 1; --k) {
    double ck = rule.coefficient(k).real();
    acc.add(Complex(2.0 * ck * std::cos(k * theta), 0.0));  // symmetric real families: c_k z^k + c_k z^{-k}
  }
  acc.add(rule.coefficient(0));
  return acc.value();
}

/// Sum of |c_k| over all k (upper bound on the uniform norm), certified to
/// relative accuracy `rel`.
inline double abs_coefficient_sum(const CoefficientRule& rule, double rel = 1e-12) {
  if (rule.family() == Family::ExplicitList) {
    double s = 0.0;
    for (const auto& [k, c] : rule.coefficients()) s += std::abs(c) * rule.scale();
    return s;
  }
  const double c0 = std::abs(rule.coefficient(0));
  const long K = truncation_index(rule, rel * c0);
  detail::CompensatedSum<double> acc;
  for (long k = K; k >= 1; --k) acc.add(2.0 * std::abs(rule.coefficient(k)));
  acc.add(c0);
  return acc.value() + std::exp(rule.log_abs_tail(K));
}

/// One certified derivative norm, with its relative error.
struct NormValue {
  double log_value = kNegInf;
  double rel_err = 0.0;
  long terms = 0;
  double value() const { return std::exp(log_value); }
};

/// log M_j(f) = 1/2 log sum_k k^{2j} |c_k|^2 with relative error <= rel_err
/// on M_j. The weighted tail is bounded by the family's closed form; a tail
/// that cannot be certified within the work limit raises CertificationError.
inline NormValue derivative_norm_log(const CoefficientRule& rule, int j, double rel_err = kDefaultNormRel) {
  if (j < 0) throw DomainError("circle_functions", "derivative order must be >= 0");
  if (!(rel_err > 0)) throw DomainError("circle_functions", "relative tolerance must be > 0");
  if (!rule.pointwise()) {
    NormSequence m = rule.synthetic_norms();
    if (j > m.max_j()) throw DomainError("circle_functions", "synthetic sequence shorter than requested order");
    return {m.log_value(j), m.certified_rel_err(), 0};
  }
  NormValue out;
  if (rule.family() == Family::ExplicitList) {
    double acc = kNegInf;
    for (const auto& [k, c] : rule.coefficients()) acc = detail::log_add(acc, rule.weighted_log_term(j, k));
    out.log_value = 0.5 * acc;
    out.terms = static_cast<long>(rule.coefficients().size());
    return out;
  }

  auto term = [&](long k) { return rule.weighted_log_term(j, k); };
  // Terms k^{2j}|c_k|^2 are unimodal in k >= 1 for every symmetric family.
  auto descending = [&](long k) { return term(k + 1) <= term(k); };
  long peak = 0;
  if (j > 0) {
    // smallest k >= 1 where the terms stop increasing
    long hi = 1;
    while (!descending(hi)) {
      if (hi >= kMaxTruncation) throw CertificationError("circle_functions", "norm peak beyond work limit");
      hi *= 2;
    }
    long lo = hi / 2;  // !descending(lo) unless lo == 0
    while (hi - lo > 1) {
      long mid = lo + (hi - lo) / 2;
      if (descending(mid))
        hi = mid;
      else
        lo = mid;
    }
    peak = hi;
  }
  const double log_peak = term(peak);
  // Lower cut: terms below exp(-80) of the peak; their total is charged to the error.
  constexpr double kCut = 80.0;
  long k_lo = peak == 0 ? 0 : 1;
  if (peak > 1 && term(1) < log_peak - kCut) {
    long lo = 1, hi = peak;  // term(lo) < cut <= term(hi)
    while (hi - lo > 1) {
      long mid = lo + (hi - lo) / 2;
      if (term(mid) < log_peak - kCut)
        lo = mid;
      else
        hi = mid;
    }
    k_lo = hi;
  }
  const double log_lower_omitted = (k_lo > 1) ? std::log(2.0 * (k_lo - 1)) + log_peak - kCut : kNegInf;
  // Upper cut: certified weighted tail below rel_err/4 of the peak term.
  const double target = std::log(rel_err / 4.0) + log_peak;
  auto ok = [&](long K) { return rule.log_weighted_tail(j, K) <= target; };
  long hi = std::max<long>(peak, 1);
  while (!ok(hi)) {
    if (hi >= kMaxTruncation)
      throw CertificationError("circle_functions",
                               "weighted tail for M_" + std::to_string(j) + " cannot be certified within the work limit");
    hi *= 2;
  }
  long lo = std::max<long>(peak, 1) - 1;
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  const long K = hi;
  detail::CompensatedSum<double> acc;
  for (long k = K; k >= std::max<long>(k_lo, 1); --k) acc.add(2.0 * std::exp(term(k) - log_peak));
  if (k_lo == 0) acc.add(std::exp(term(0) - log_peak));
  const double partial = acc.value();
  const double log_sum = log_peak + std::log(partial);
  const double tail = std::exp(rule.log_weighted_tail(j, K) - log_sum);
  const double lower = std::exp(log_lower_omitted - log_sum);
  out.log_value = 0.5 * log_sum;
  out.rel_err = 0.5 * (tail + lower) + 1e-15 * std::sqrt(static_cast<double>(K - k_lo + 1));
  out.terms = K - k_lo + 1;
  return out;
}

inline double derivative_norm(const CoefficientRule& rule, int j, double rel_err = kDefaultNormRel) {
  return derivative_norm_log(rule, j, rel_err).value();
}

/// M_0..M_J for a rule. Computed sequences of explicit lists carry their
/// degree as growth limit.
inline NormSequence norm_sequence(const CoefficientRule& rule, int max_j, double rel_err = kDefaultNormRel) {
  if (!rule.pointwise()) {
    NormSequence m = rule.synthetic_norms();
    return m;
  }
  if (max_j < 1) throw DomainError("circle_functions", "need at least M_0 and M_1");
  std::vector<double> logs(max_j + 1);
  double err = 0.0;
  for (int j = 0; j <= max_j; ++j) {
    NormValue v = derivative_norm_log(rule, j, rel_err);
    logs[j] = v.log_value;
    err = std::max(err, v.rel_err);
  }
  std::optional<double> limit;
  if (rule.family() == Family::ExplicitList) limit = static_cast<double>(rule.max_degree());
  return NormSequence(std::move(logs), NormSource::Computed, err, limit);
}

/// Factor applied by `normalize`: 0.4 / M_3 when M_3 >= 1/2, else 1.
inline double normalization_factor(const CoefficientRule& rule) {
  double m3 = rule.pointwise() ? derivative_norm(rule, 3) : rule.synthetic_norms().value(3);
  if (m3 < 0.5) return 1.0;
  return 0.4 / m3;
}

/// The rule rescaled so that M_3 < 1/2 (unchanged when already so).
inline CoefficientRule normalize(const CoefficientRule& rule) {
  double f = normalization_factor(rule);
  return f == 1.0 ? rule : rule.scaled(f);
}

}  // namespace quasipolar
