#pragma once

// Desk-scale tests for the three quasianalyticity notions (Bernstein, Denjoy,
// Gevrey) and a numerical probe of the convexity lemma used for the scales.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quasipolar/circle_functions.hpp"
#include "quasipolar/common.hpp"
#include "quasipolar/norm_sequence.hpp"

namespace quasipolar {

enum class Notion { Bernstein, Denjoy, Gevrey };
enum class Answer { Yes, No, Inconclusive };

inline const char* notion_name(Notion n) {
  switch (n) {
    case Notion::Bernstein: return "bernstein";
    case Notion::Denjoy: return "denjoy";
    default: return "gevrey";
  }
}

inline const char* answer_name(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    default: return "inconclusive";
  }
}

struct EvidenceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return os.str();
  }
};

struct QuasiVerdict {
  Notion notion = Notion::Bernstein;
  Answer verdict = Answer::Inconclusive;
  EvidenceTable evidence;
  std::string caveat;
  double constant = kNaN();  // bernstein: the c of the certified subsequence

  static double kNaN() { return std::numeric_limits<double>::quiet_NaN(); }

  std::string report() const {
    std::ostringstream os;
    os << std::setprecision(10);
    os << notion_name(notion) << ": " << answer_name(verdict) << "\n";
    if (!std::isnan(constant)) os << "  constant: " << constant << "\n";
    if (!caveat.empty()) os << "  caveat: " << caveat << "\n";
    os << "  ";
    for (const auto& c : evidence.columns) os << std::setw(22) << c;
    os << "\n";
    for (const auto& r : evidence.rows) {
      os << "  ";
      for (double v : r) os << std::setw(22) << v;
      os << "\n";
    }
    return os.str();
  }
};

inline const char* kHeuristicCaveat = "desk-scale heuristic: divergence read from decade increments";

namespace detail {

/// Divergence reading of partial values at successive decades: "yes" when the
/// increments of the last three decades stay level (ratios >= 0.9), "no" when
/// they shrink geometrically (ratios <= 0.85) or vanish.
inline Answer decade_trend(const std::vector<double>& partial) {
  if (partial.size() < 4) return Answer::Inconclusive;
  const std::size_t n = partial.size();
  double d[3];
  for (int i = 0; i < 3; ++i) d[i] = partial[n - 3 + i] - partial[n - 4 + i];
  if (d[2] <= 0 && d[1] <= 0) return Answer::No;
  if (!(d[0] > 0 && d[1] > 0)) return Answer::Inconclusive;
  double q1 = d[1] / d[0], q2 = d[2] / d[1];
  if (q1 >= 0.9 && q2 >= 0.9) return Answer::Yes;
  if (q1 <= 0.85 && q2 <= 0.85) return Answer::No;
  return Answer::Inconclusive;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Denjoy-Carleman

/// Partial integrals I(R) = int_1^R -log tau(r) / (1 + r^2) dr at R = 10^k.
inline QuasiVerdict denjoy_carleman(const NormSequence& m, double r_max, int quad_points = 16) {
  if (m.degenerate()) throw DegenerateError("quasi_tests", "bounded norm growth: Denjoy-Carleman test does not apply");
  if (!(r_max >= 100)) throw DomainError("quasi_tests", "R_max must be >= 100");
  if (quad_points < 2) throw DomainError("quasi_tests", "need at least 2 quadrature points");
  if (r_max > m.reach())
    throw DomainError("quasi_tests", "R_max = " + std::to_string(r_max) + " exceeds the certified range of the sequence (" +
                                         std::to_string(m.reach()) + "); supply more norms");
  std::vector<double> xs, ws;
  detail::gauss_legendre(quad_points, xs, ws);
  // integrand in s = log r; -log tau is linear between hull kinks
  auto f = [&](double s) { return -m.tau(std::exp(s)).log_tau * 0.5 / std::cosh(s); };
  auto rule = [&](double a, double b) {
    double h = 0.5 * (b - a), c = 0.5 * (a + b), acc = 0.0;
    for (int i = 0; i < quad_points; ++i) acc += ws[i] * f(c + h * xs[i]);
    return h * acc;
  };
  std::function<double(double, double, double, int)> adapt = [&](double a, double b, double whole, int depth) {
    double mid = 0.5 * (a + b);
    double l = rule(a, mid), r = rule(mid, b);
    if (depth >= 30 || std::abs(l + r - whole) <= 1e-13 * (1.0 + std::abs(l + r))) return l + r;
    return adapt(a, mid, l, depth + 1) + adapt(mid, b, r, depth + 1);
  };
  const double s_max = std::log(r_max);
  std::vector<double> decades;
  for (double R = 10.0; R <= r_max * (1 + 1e-12); R *= 10.0) decades.push_back(std::log(R));
  const bool full_last = !decades.empty() && decades.back() >= s_max - 1e-12;
  if (!full_last) decades.push_back(s_max);
  std::vector<double> cuts = {0.0};
  for (double k : m.hull().slopes())
    if (k > 0 && k < s_max) cuts.push_back(k);
  cuts.insert(cuts.end(), decades.begin(), decades.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuasiVerdict out;
  out.notion = Notion::Denjoy;
  out.evidence.columns = {"R", "I_R", "increment"};
  out.caveat = kHeuristicCaveat;
  std::vector<double> partial;
  detail::CompensatedSum<double> acc;
  std::size_t d = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (b - a > 0) acc.add(adapt(a, b, rule(a, b), 0));
    while (d < decades.size() && std::abs(decades[d] - b) < 1e-12) {
      double v = acc.value();
      out.evidence.rows.push_back({std::exp(decades[d]), v, v - prev});
      if (d + 1 < decades.size() || full_last) partial.push_back(v);  // a short last decade would skew the trend
      prev = v;
      ++d;
    }
  }
  out.verdict = detail::decade_trend(partial);
  return out;
}

// ---------------------------------------------------------------------------
// Gevrey classes

/// The sequence L_j of a Gevrey class: j^p (from j = 1) or b^j (from j = 0),
/// optionally multiplied by a constant.
class GevreySequence {
 public:
  enum class Kind { Power, Geometric };

  static GevreySequence power(double p, double c = 1.0) { return GevreySequence(Kind::Power, p, c); }
  static GevreySequence geometric(double base, double c = 1.0) { return GevreySequence(Kind::Geometric, base, c); }

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  int first_index() const { return kind_ == Kind::Power ? 1 : 0; }

  double log_value(int j) const {
    if (kind_ == Kind::Power) return std::log(c_) + param_ * std::log(static_cast<double>(j));
    return std::log(c_) + j * std::log(param_);
  }

  /// Checks j <= L_j on 1..J.
  void validate(int J) const {
    for (int j = 1; j <= J; ++j)
      if (log_value(j) < std::log(static_cast<double>(j)) - 1e-12)
        throw DomainError("quasi_tests", "L_j < j at j = " + std::to_string(j) + "; not an admissible Gevrey sequence");
  }

  std::string describe() const {
    std::ostringstream os;
    if (c_ != 1.0) os << c_ << "*";
    if (kind_ == Kind::Power)
      os << "j^" << param_;
    else
      os << param_ << "^j";
    return os.str();
  }

 private:
  GevreySequence(Kind k, double p, double c) : kind_(k), param_(p), c_(c) {
    if (!(p > 0) || !(c > 0)) throw DomainError("quasi_tests", "Gevrey sequence parameters must be positive");
    if (k == Kind::Geometric && !(p > 1)) throw DomainError("quasi_tests", "geometric Gevrey base must exceed 1");
  }
  Kind kind_;
  double param_;
  double c_;
};

struct GevreyMembership {
  bool member = false;
  double c_prime = kInf;  // max_{j<=J} M_j^{1/j} / L_j
  int J = 0;
  std::string note;
};

/// Smallest C' with M_j <= (C' L_j)^j for 1 <= j <= J_max. Membership is a
/// finite-range statement; a ratio still growing at J_max means "not member".
inline GevreyMembership gevrey_membership(const NormSequence& m, const GevreySequence& l, int j_max) {
  if (j_max < 2) throw DomainError("quasi_tests", "J_max must be >= 2");
  if (j_max > m.max_j()) throw DomainError("quasi_tests", "J_max exceeds the stored norms");
  l.validate(j_max);
  auto log_ratio = [&](int j) { return m.log_value(j) / j - l.log_value(j); };
  GevreyMembership out;
  out.J = j_max;
  double best = kNegInf;
  for (int j = 1; j <= j_max; ++j) best = std::max(best, log_ratio(j));
  out.c_prime = std::exp(best);
  double late = log_ratio(j_max), mid = log_ratio(std::max(1, j_max / 2));
  out.member = !(late - mid > std::log(1.1));
  out.note = out.member ? "member up to J = " + std::to_string(j_max) + " (finite-range statement)"
                        : "ratio M_j^{1/j}/L_j still growing at J = " + std::to_string(j_max);
  return out;
}

/// Partial sums of 1/L_j at J = 10^k up to J_max.
inline QuasiVerdict gevrey_series(const GevreySequence& l, long j_max) {
  if (j_max < 10) throw DomainError("quasi_tests", "J_max must be >= 10");
  QuasiVerdict out;
  out.notion = Notion::Gevrey;
  out.evidence.columns = {"J", "partial_sum"};
  out.caveat = kHeuristicCaveat;
  detail::CompensatedSum<double> acc;
  std::vector<double> partial;
  long next = 10;
  for (long j = l.first_index(); j <= j_max; ++j) {
    acc.add(std::exp(-l.log_value(static_cast<int>(j))));
    if (j == next || j == j_max) {
      out.evidence.rows.push_back({static_cast<double>(j), acc.value()});
      if (j == next) partial.push_back(acc.value());
      if (j == next) next *= 10;
    }
  }
  out.verdict = detail::decade_trend(partial);
  return out;
}

// ---------------------------------------------------------------------------
// Approximation numbers E_n

/// lower <= E_n(f) <= upper, kept in log form as well (the values underflow
/// for fast-decaying rules at large n).
struct EnBracket {
  long n = 0;
  double log_lower = kNegInf;
  double log_upper = kNegInf;
  double lower() const { return std::exp(log_lower); }
  double upper() const { return std::exp(log_upper); }
};

inline EnBracket en_bounds(const CoefficientRule& rule, long n) {
  rule.require_pointwise("approximation numbers");
  if (n < 0) throw DomainError("quasi_tests", "n must be >= 0");
  EnBracket out;
  out.n = n;
  if (rule.family() == Family::ExplicitList) {
    for (const auto& [k, c] : rule.coefficients()) {
      if (std::abs(k) <= n || c == Complex(0.0)) continue;
      double lc = rule.log_abs_coefficient(k);
      out.log_lower = std::max(out.log_lower, lc);
      out.log_upper = detail::log_add(out.log_upper, lc);
    }
    return out;
  }
  // symmetric and decreasing in |k|
  const double l1 = rule.log_abs_coefficient(n + 1);
  out.log_lower = l1;
  // sum the first terms explicitly (relative to c_{n+1}), then the certified tail
  detail::CompensatedSum<double> acc;
  long k = n + 1;
  const long stop = n + (1L << 20);
  for (; k <= stop; ++k) {
    double rel = rule.log_abs_coefficient(k) - l1;
    acc.add(2.0 * std::exp(rel));
    if (rule.log_abs_tail(k) - l1 < std::log(acc.value()) - 36.0) break;
  }
  out.log_upper = detail::log_add(l1 + std::log(acc.value()), rule.log_abs_tail(std::min(k, stop)));
  return out;
}

struct MinimaxResult {
  double value = 0.0;     // discrete max |f - p| of the best iterate
  double inflated = 0.0;  // value / cos(pi n / grid_m)
  double gap = 0.0;       // relative distance to the weighted least-squares lower estimate
  int iterations = 0;
  bool converged = false;
};

/// Discrete minimax approximation by degree-n trigonometric polynomials on
/// grid_m equispaced circle points (Lawson's reweighted least squares).
inline MinimaxResult en_minimax(const CoefficientRule& rule, int n, int grid_m, double tol = 1e-6,
                                int max_iter = 20000) {
  rule.require_pointwise("minimax approximation");
  if (n < 0) throw DomainError("quasi_tests", "n must be >= 0");
  if (grid_m < 8 * std::max(n, 1)) throw DomainError("quasi_tests", "grid_m must be >= 8n");
  const int m = grid_m, d = 2 * n + 1;
  Eigen::MatrixXcd A(m, d);
  Eigen::VectorXcd f(m);
  for (int i = 0; i < m; ++i) {
    f(i) = evaluate(rule, detail::root_of_unity_power(i, m), 1e-15);
    for (int k = -n; k <= n; ++k) A(i, k + n) = detail::root_of_unity_power(static_cast<long long>(i) * k, m);
  }
  MinimaxResult out;
  const double scale = f.cwiseAbs().maxCoeff();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / m);
  double best = kInf;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd sw = w.cwiseSqrt();
    Eigen::MatrixXcd Aw = sw.asDiagonal() * A;
    Eigen::VectorXcd fw = sw.asDiagonal() * f;
    Eigen::VectorXcd c = Aw.colPivHouseholderQr().solve(fw);
    Eigen::VectorXd e = (f - A * c).cwiseAbs();
    double emax = e.maxCoeff();
    double lower = std::sqrt(w.dot(e.cwiseProduct(e)));
    best = std::min(best, emax);
    out.iterations = it;
    if (best <= 1e-14 * std::max(scale, 1e-300)) {
      best = 0.0;
      out.gap = 0.0;
      out.converged = true;
      break;
    }
    out.gap = (best - lower) / best;
    if (out.gap <= tol) {
      out.converged = true;
      break;
    }
    w = w.cwiseProduct(e);
    double s = w.sum();
    if (!(s > 0)) break;
    w /= s;
  }
  out.value = best;
  out.inflated = best / std::cos(kPi * n / m);
  return out;
}

/// Certifies liminf E_n^{1/n} < 1 from the upper bounds when the roots along
/// the last half of n_list stay below 1 - delta.
inline QuasiVerdict bernstein_verdict(const CoefficientRule& rule, const std::vector<long>& n_list,
                                      double delta = 0.01) {
  rule.require_pointwise("Bernstein test");
  if (n_list.empty()) throw DomainError("quasi_tests", "empty n list");
  QuasiVerdict out;
  out.notion = Notion::Bernstein;
  out.evidence.columns = {"n", "lower", "upper", "upper_root", "lower_root"};
  std::vector<double> roots;
  bool vanished = false;
  for (long n : n_list) {
    if (n < 1) throw DomainError("quasi_tests", "n must be >= 1");
    EnBracket b = en_bounds(rule, n);
    double ur = std::exp(b.log_upper / n), lr = std::exp(b.log_lower / n);
    out.evidence.rows.push_back({static_cast<double>(n), b.lower(), b.upper(), ur, lr});
    roots.push_back(ur);
    vanished = vanished || b.log_upper == kNegInf;
  }
  if (vanished) {
    out.verdict = Answer::Yes;
    out.constant = 0.0;
    out.caveat = "E_n = 0 from some n on (trigonometric polynomial)";
    return out;
  }
  const std::size_t first = roots.size() / 2;
  double c = 0.0;
  for (std::size_t i = first; i < roots.size(); ++i) c = std::max(c, roots[i]);
  out.constant = c;
  if (c < 1.0 - delta) {
    out.verdict = Answer::Yes;
    out.caveat = "certified from upper bounds on E_n along the last half of the n list";
  } else {
    out.verdict = Answer::Inconclusive;
    out.caveat = "upper-bound roots approach 1 at desk scale; a negative answer is never certified";
  }
  return out;
}

inline std::string en_csv(const QuasiVerdict& v) {
  std::ostringstream os;
  os << std::setprecision(17) << "n,lower,upper,upper_root\n";
  for (const auto& r : v.evidence.rows) os << static_cast<long>(r[0]) << ',' << r[1] << ',' << r[2] << ',' << r[3] << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Convexity lemma probe

struct LemmaProbe {
  bool hypothesis_holds = true;
  std::optional<double> first_violation;  // smallest sampled x with H~(x) > C e^{-x/2}
  double integral = 0.0;                  // int_1^{e^X} h(t)/t^2 dt
  double tail_estimate = 0.0;             // 2 C e^{-X/2}
  double C = 1.0;
  double x_max = 0.0;
};

/// Checks H~(x) = min_{0<=s<=x} h(e^s) e^{-s} <= C e^{-x/2} on a grid over
/// [0, X_max] and integrates h(t)/t^2 up to e^{X_max}.
inline LemmaProbe calc_lemma_probe(const std::function<double(double)>& h, double C, double x_max,
                                   int samples = 16384) {
  if (!(C > 0) || !(x_max > 0) || samples < 16) throw DomainError("quasi_tests", "invalid lemma probe parameters");
  std::vector<double> ht(samples + 1);
  const double dx = x_max / samples;
  for (int i = 0; i <= samples; ++i) {
    ht[i] = h(std::exp(i * dx));
    if (!(ht[i] > 0) || !std::isfinite(ht[i])) throw DomainError("quasi_tests", "h must be positive and finite");
  }
  for (int i = 1; i <= samples; ++i) {
    const double tol = 1e-12 * std::max(std::abs(ht[i]), std::abs(ht[i - 1]));
    if (ht[i] < ht[i - 1] - tol) throw DomainError("quasi_tests", "h(e^s) is not increasing");
    if (i < samples && ht[i - 1] + ht[i + 1] - 2 * ht[i] < -1e-9 * std::abs(ht[i]))
      throw DomainError("quasi_tests", "h(e^s) is not convex at s = " + std::to_string(i * dx));
  }
  LemmaProbe out;
  out.C = C;
  out.x_max = x_max;
  double run = kInf;
  for (int i = 0; i <= samples; ++i) {
    double x = i * dx;
    run = std::min(run, ht[i] * std::exp(-x));
    if (run > C * std::exp(-x / 2) * (1 + 1e-12)) {
      out.hypothesis_holds = false;
      out.first_violation = x;
      break;
    }
  }
  std::vector<double> xs, ws;
  detail::gauss_legendre(20, xs, ws);
  detail::CompensatedSum<double> acc;
  const int panels = std::max(64, static_cast<int>(std::ceil(x_max * 8)));
  for (int p = 0; p < panels; ++p) {
    double a = x_max * p / panels, b = x_max * (p + 1) / panels, hw = 0.5 * (b - a), c = 0.5 * (a + b);
    double part = 0.0;
    for (int i = 0; i < 20; ++i) {
      double s = c + hw * xs[i];
      part += ws[i] * h(std::exp(s)) * std::exp(-s);
    }
    acc.add(hw * part);
  }
  out.integral = acc.value();
  out.tail_estimate = 2.0 * C * std::exp(-x_max / 2);
  return out;
}

}  // namespace quasipolar
