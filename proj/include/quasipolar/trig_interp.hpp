#pragma once

// Trigonometric interpolation at the n-th roots of unity plus one extra node
// z0, and the annulus bounds used to control the interpolants.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quasipolar/circle_functions.hpp"
#include "quasipolar/common.hpp"
#include "quasipolar/growth_scales.hpp"

namespace quasipolar {

struct AliasedCoefficients {
  std::vector<Complex> a;  // a[r], r = 0..n-1
  std::vector<Complex> b;  // b[r], r = 1..n (b[0] unused)
  double tail_err = 0.0;
  long truncation = 0;
};

/// a_{n,r} = sum_j c_{r+nj}, b_{n,r} = sum_j c_{-r-nj}, over |k| <= K(eps).
inline AliasedCoefficients aliased_coeffs(const CoefficientRule& rule, int n, double eps = kDefaultEval) {
  rule.require_pointwise("aliased coefficients");
  if (n < 1) throw DomainError("trig_interp", "n must be >= 1");
  AliasedCoefficients out;
  out.a.assign(n, Complex(0.0));
  out.b.assign(n + 1, Complex(0.0));
  std::vector<detail::CompensatedSum<Complex>> sa(n), sb(n + 1);
  auto add = [&](long k, Complex c) {
    if (k >= 0)
      sa[k % n].add(c);
    else
      sb[((-k - 1) % n) + 1].add(c);
  };
  if (rule.family() == Family::ExplicitList) {
    for (const auto& [k, c] : rule.coefficients()) add(k, c * rule.scale());
    out.truncation = rule.max_degree();
  } else {
    const long K = truncation_index(rule, eps);
    for (long k = K; k >= 1; --k) {
      Complex c = rule.coefficient(k);
      add(k, c);
      add(-k, c);
    }
    add(0, rule.coefficient(0));
    out.truncation = K;
    out.tail_err = std::exp(rule.log_abs_tail(K));
  }
  for (int r = 0; r < n; ++r) out.a[r] = sa[r].value();
  for (int r = 1; r <= n; ++r) out.b[r] = sb[r].value();
  return out;
}

/// L_n(f, z0; z) = sum a_r z^r + sum b_r z^{-r} + gamma (z^n - 1).
struct Interpolant {
  int n = 0;
  std::vector<Complex> a;
  std::vector<Complex> b;
  Complex z0{1.0, 0.0};
  Complex gamma{0.0, 0.0};
  double tail_err = 0.0;
  double z0n_gap = 0.0;  // |z0^n - 1|
  std::optional<std::string> warning;

  /// L_n(f; z) without the z0 correction.
  Complex base(Complex z) const {
    if (z == Complex(0.0)) throw DomainError("trig_interp", "interpolant is singular at z = 0");
    Complex p(0.0);
    for (int r = n - 1; r >= 0; --r) p = p * z + a[r];
    Complex w = 1.0 / z, q(0.0);
    for (int r = n; r >= 1; --r) q = q * w + b[r];
    return p + q * w;
  }

  Complex operator()(Complex z) const {
    Complex v = base(z);
    if (gamma != Complex(0.0)) v += gamma * (std::pow(z, n) - 1.0);
    return v;
  }
};

inline constexpr double kDegenerateNodeGap = 1e-12;
inline constexpr double kIllConditionedGap = 1e-8;

inline Interpolant build(const CoefficientRule& rule, int n, Complex z0, double eps = kDefaultEval) {
  if (std::abs(std::abs(z0) - 1.0) > 1e-12) throw DomainError("trig_interp", "z0 must lie on the unit circle");
  AliasedCoefficients ac = aliased_coeffs(rule, n, eps);
  Interpolant L;
  L.n = n;
  L.a = std::move(ac.a);
  L.b = std::move(ac.b);
  L.z0 = z0;
  L.tail_err = ac.tail_err;
  // |e^{in phi} - 1| = 2 |sin(n phi / 2)|
  L.z0n_gap = 2.0 * std::abs(std::sin(0.5 * n * std::arg(z0)));
  if (L.z0n_gap < kDegenerateNodeGap) return L;
  const Complex denom = std::polar(1.0, n * std::arg(z0)) - 1.0;
  L.gamma = (evaluate(rule, z0, eps) - L.base(z0)) / denom;
  if (L.z0n_gap < kIllConditionedGap) {
    std::ostringstream os;
    os << "ill-conditioned correction: |z0^n - 1| = " << std::setprecision(3) << L.z0n_gap;
    L.warning = os.str();
  }
  return L;
}

/// Default extra node e^{i pi / (2n)}.
inline Complex default_z0(int n) { return detail::unit(kPi / (2.0 * n)); }

inline Complex eval(const Interpolant& L, Complex z) { return L(z); }

/// Largest |L - f| over the n roots of unity and z0.
inline double node_residual(const Interpolant& L, const CoefficientRule& rule, double eps = kDefaultEval) {
  double worst = std::abs(L(L.z0) - evaluate(rule, L.z0, eps));
  for (int l = 0; l < L.n; ++l) {
    Complex z = detail::root_of_unity_power(l, L.n);
    worst = std::max(worst, std::abs(L(z) - evaluate(rule, z, eps)));
  }
  return worst;
}

/// max_r |d_r - (a_{n,r} + b_{n,n-r})| with d_r the DFT of f at the nodes.
inline double dft_consistency(const CoefficientRule& rule, int n, double eps = kDefaultEval) {
  AliasedCoefficients ac = aliased_coeffs(rule, n, eps);
  std::vector<Complex> fv(n);
  for (int l = 0; l < n; ++l) fv[l] = evaluate(rule, detail::root_of_unity_power(l, n), eps / n);
  double worst = 0.0;
  for (int r = 0; r < n; ++r) {
    detail::CompensatedSum<Complex> acc;
    for (int l = 0; l < n; ++l) acc.add(fv[l] * detail::root_of_unity_power(-static_cast<long long>(l) * r, n));
    Complex d = acc.value() / static_cast<double>(n);
    Complex expect = ac.a[r] + ac.b[n - r == 0 ? n : n - r];
    worst = std::max(worst, std::abs(d - expect));
  }
  return worst;
}

struct AnnulusSup {
  double sup = 0.0;
  int samples = 0;  // per boundary circle, final pass
  bool converged = false;
  std::string caveat = "boundary-circle sampling; interior controlled by the maximum principle";
};

/// sup of |L| over {1/t <= |z| <= t} from the two boundary circles, doubling
/// the sample count until the estimate changes by less than 0.1%.
inline AnnulusSup annulus_sup(const Interpolant& L, double t, int m_samples = 256, int max_samples = 1 << 18) {
  if (!(t > 1)) throw DomainError("trig_interp", "annulus parameter t must exceed 1");
  if (m_samples < 4) throw DomainError("trig_interp", "need at least 4 samples");
  auto pass = [&](int m) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      Complex u = detail::root_of_unity_power(i, m);
      s = std::max({s, std::abs(L(t * u)), std::abs(L(u / t))});
    }
    return s;
  };
  AnnulusSup out;
  int m = std::max(m_samples, 8 * L.n);
  double prev = pass(m);
  while (2 * m <= max_samples) {
    m *= 2;
    double cur = pass(m);
    bool done = std::abs(cur - prev) <= 1e-3 * cur;
    prev = std::max(prev, cur);
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.sup = prev;
  out.samples = m;
  return out;
}

/// log S(n, t) with S = 1 + sum_{r=1}^n r tau(r) t^r.
inline double log_er_bound(const NormSequence& m, long n, double t) {
  if (!(t > 0)) throw DomainError("trig_interp", "t must be positive");
  double acc = 0.0;  // log 1
  for (long r = 1; r <= n; ++r) {
    TauResult tr = m.tau(static_cast<double>(r));
    if (tr.degenerate) throw DegenerateError("trig_interp", "bounded norm growth: tau vanishes at r = " + std::to_string(r));
    acc = detail::log_add(acc, std::log(static_cast<double>(r)) + tr.log_tau + r * std::log(t));
  }
  return acc;
}

inline double er_bound(const NormSequence& m, long n, double t) { return std::exp(log_er_bound(m, n, t)); }

struct ScanRow {
  long n = 0;
  double z0_arg = 0.0;
  double log_tn = 0.0;
  double sup_measured = 0.0;
  double er_bound = 0.0;
  double ratio = 0.0;
  double gamma_abs = 0.0;
  bool scale_property = true;  // r^3 tau(r) t_n^r <= 1 for integer r <= n
};

struct UniformBoundScan {
  std::vector<ScanRow> rows;
  double max_ratio() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.ratio);
    return m;
  }
  double min_ratio() const {
    double m = kInf;
    for (const auto& r : rows) m = std::min(m, r.ratio);
    return m;
  }
  bool scale_property() const {
    return std::all_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.scale_property; });
  }
  std::string to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17) << "n,z0_arg,log_tn,sup_measured,er_bound,ratio\n";
    for (const auto& r : rows)
      os << r.n << ',' << r.z0_arg << ',' << r.log_tn << ',' << r.sup_measured << ',' << r.er_bound << ',' << r.ratio
         << '\n';
    return os.str();
  }
};

/// For each n and z0: sup of the interpolant over A(t_n) against S(n, t_n).
inline UniformBoundScan uniform_bound_scan(const CoefficientRule& rule, const std::vector<long>& n_list,
                                           const std::vector<Complex>& z0_list, int max_j = 400,
                                           double eps = kDefaultEval) {
  rule.require_pointwise("interpolation scan");
  NormSequence m = norm_sequence(rule, max_j);
  if (m.degenerate()) throw DegenerateError("trig_interp", "trigonometric polynomial: scan is degenerate-analytic");
  if (!(m.value(3) < 0.5)) throw DomainError("trig_interp", "rule is not normalized (M_3 >= 1/2)");
  UniformBoundScan scan;
  for (long n : n_list) {
    ScaleValue lt = log_tn(m, n);
    if (lt.degenerate) throw DegenerateError("trig_interp", "scale t_n is degenerate");
    const double t = std::exp(lt.value);
    bool prop = true;
    for (long r = 1; r <= n; ++r)
      prop = prop && 3 * std::log(double(r)) + m.tau(double(r)).log_tau + r * lt.value <= 1e-9;
    const double S = er_bound(m, n, t);
    for (Complex z0 : z0_list) {
      Interpolant L = build(rule, static_cast<int>(n), z0, eps);
      ScanRow row;
      row.n = n;
      row.z0_arg = std::arg(z0);
      row.log_tn = lt.value;
      row.sup_measured = annulus_sup(L, t).sup;
      row.er_bound = S;
      row.ratio = row.sup_measured / S;
      row.gamma_abs = std::abs(L.gamma);
      row.scale_property = prop;
      scan.rows.push_back(row);
    }
  }
  return scan;
}

struct BernsteinWalshResult {
  double max_violation = 0.0;  // max |p(z)| e^{-n V(z)} - ||p||_S over the samples
  double norm = 0.0;           // inflated grid estimate of ||p||_S
  int degree = 0;
  int grid = 0;
};

/// Checks |p(z)| <= ||p||_S e^{n V(z)}, V(z) = |log|z||, at the given samples.
inline BernsteinWalshResult bernstein_walsh_check(const std::map<long, Complex>& coeffs,
                                                  const std::vector<Complex>& samples) {
  BernsteinWalshResult out;
  for (const auto& [k, c] : coeffs) out.degree = std::max<int>(out.degree, static_cast<int>(std::abs(k)));
  const int n = out.degree;
  out.grid = 4096 * std::max(1, n / 32);
  double grid_max = 0.0;
  for (int i = 0; i < out.grid; ++i) {
    detail::CompensatedSum<Complex> acc;
    for (const auto& [k, c] : coeffs) acc.add(c * detail::root_of_unity_power(static_cast<long long>(i) * k, out.grid));
    grid_max = std::max(grid_max, std::abs(acc.value()));
  }
  out.norm = grid_max / std::cos(kPi * n / out.grid);
  double worst = kNegInf;
  for (Complex z : samples) {
    if (z == Complex(0.0)) throw DomainError("trig_interp", "sample at z = 0");
    const double lr = std::log(std::abs(z));
    const double theta = std::arg(z);
    const double v = std::abs(lr);
    detail::CompensatedSum<Complex> acc;
    // each term scaled by e^{-n V}, so magnitudes stay <= |c_k|
    for (const auto& [k, c] : coeffs) acc.add(c * std::polar(std::exp(k * lr - n * v), k * theta));
    worst = std::max(worst, std::abs(acc.value()) - out.norm);
  }
  out.max_violation = samples.empty() ? 0.0 : worst;
  return out;
}

}  // namespace quasipolar
