#pragma once

// Green function of the annulus {1/r < |w| < r} with pole at w = 1, evaluated
// by lifting to the strip 0 < Im z < pi and then to the unit disk, where the
// pole preimages z'_k lie on the real segment (-1, 1).

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "quasipolar/common.hpp"

namespace quasipolar {

struct AnnulusSpec {
  double r = 2.0;

  explicit AnnulusSpec(double radius) : r(radius) {
    if (!(radius > 1) || !std::isfinite(radius)) throw DomainError("annulus_potential", "outer radius must exceed 1");
  }
  double log_r() const { return std::log(r); }
  bool contains(Complex w) const {
    double a = std::abs(std::log(std::abs(w)));
    return std::abs(w) > 0 && a < log_r();
  }
};

/// z with exp(log r (1 + 2iz/pi)) = w and 0 < Im z < pi.
inline Complex strip_lift(Complex w, const AnnulusSpec& spec) {
  if (!spec.contains(w)) throw DomainError("annulus_potential", "point lies outside the annulus");
  const double L = spec.log_r();
  // (pi/(2i)) (Log w / L - 1)
  return Complex(0.5 * kPi * std::arg(w) / L, 0.5 * kPi * (1.0 - std::log(std::abs(w)) / L));
}

/// Inverse of strip_lift.
inline Complex strip_map(Complex z, const AnnulusSpec& spec) {
  return std::exp(spec.log_r() * (1.0 + 2.0 * Complex(0, 1) * z / kPi));
}

/// zeta = (i - e^z) / (i + e^z) for 0 < Im z < pi.
inline Complex disk_pull(Complex z) {
  if (!(z.imag() > 0 && z.imag() < kPi)) throw DomainError("annulus_potential", "point lies outside the strip");
  const Complex i(0, 1);
  if (z.real() > 0) {
    Complex e = std::exp(-z);  // divide through by e^z
    return (i * e - 1.0) / (i * e + 1.0);
  }
  Complex e = std::exp(z);
  return (i - e) / (i + e);
}

/// log(i (1 - zeta) / (1 + zeta)), the strip coordinate of a disk point.
inline Complex disk_map(Complex zeta) { return std::log(Complex(0, 1) * (1.0 - zeta) / (1.0 + zeta)); }

struct PoleImage {
  long k = 0;
  double value = 0.0;         // z'_k = (1 - e^{x_k}) / (1 + e^{x_k}) = -tanh(x_k / 2)
  double one_minus_sq = 1.0;  // 1 - z'_k^2 = sech^2(x_k / 2)
  bool saturated = false;     // x_k > 700: value rounds to -+1, one_minus_sq keeps the gap
};

inline PoleImage pole_image(const AnnulusSpec& spec, long k) {
  PoleImage p;
  p.k = k;
  const double x = k * kPi * kPi / spec.log_r();
  p.value = -std::tanh(0.5 * x);
  const double ax = std::abs(x);
  // sech^2(x/2) = 4 e^{-|x|} / (1 + e^{-|x|})^2
  const double e = std::exp(-ax);
  p.one_minus_sq = 4.0 * e / ((1.0 + e) * (1.0 + e));
  p.saturated = ax > 700.0;
  return p;
}

/// z'_k for |k| <= K, ordered k = -K..K.
inline std::vector<PoleImage> pole_images(const AnnulusSpec& spec, long K) {
  if (K < 0) throw DomainError("annulus_potential", "K must be >= 0");
  std::vector<PoleImage> out;
  for (long k = -K; k <= K; ++k) out.push_back(pole_image(spec, k));
  return out;
}

struct GreenEvaluation {
  double value = 0.0;
  long terms_used = 0;  // K: terms |k| <= K were summed
  double tail_bound = 0.0;
  bool near_pole = false;
};

namespace detail {

// 1 - |disk_pull(z)|^2 without cancellation near |zeta| = 1 and without
// overflow for large |Re z|.
inline double disk_gap(Complex z) {
  const double s = std::sin(z.imag());
  const double e = std::exp(-std::abs(z.real()));
  Complex d = z.real() > 0 ? Complex(0, e) + std::polar(1.0, z.imag()) : Complex(0, 1) + std::polar(e, z.imag());
  return 4.0 * e * s / std::norm(d);
}

// log |disk_pull(z)|
inline double log_disk_abs(Complex z) {
  const double gap = disk_gap(z);
  return gap <= 0.5 ? 0.5 * std::log1p(-gap) : std::log(std::abs(disk_pull(z)));
}

}  // namespace detail

/// g(w) = sum_k log |(zeta - z'_k) / (1 - z'_k zeta)|, truncated at the
/// smallest K whose tail is certified <= eps.
///
/// The disk automorphism taking z'_k to 0 is the strip translation by x_k, so
/// term k is evaluated as log |disk_pull(z - x_k)|; this stays accurate when
/// zeta and z'_k both crowd against -+1.
inline GreenEvaluation green(Complex w, const AnnulusSpec& spec, double eps = 1e-14) {
  if (!(eps > 0)) throw DomainError("annulus_potential", "eps must be positive");
  if (w == Complex(1.0)) throw DomainError("annulus_potential", "w = 1 is the pole");
  const Complex z = strip_lift(w, spec);
  const double c = kPi * kPi / spec.log_r();
  const double s = std::sin(z.imag());
  // |Re z| <= c/2, so term k (|k| >= 1) sits at real distance a >= (|k| - 1/2) c
  // and |term| <= gap <= 4 e^{-a} sin(Im z) / (1 - e^{-a})^2 once that is <= 1/2.
  long K = 0;
  double tail = kInf;
  for (;; ++K) {
    const double ea = std::exp(-(K + 0.5) * c);
    const double head = 4.0 * ea * s / ((1 - ea) * (1 - ea));
    if (ea < 1 && head <= 0.5) {
      tail = 2.0 * head / (1.0 - std::exp(-c));
      if (tail <= eps) break;
    }
    if (K > 100000000) throw ConvergenceError("annulus_potential", "series truncation exceeded the work limit");
  }
  detail::CompensatedSum<double> acc;
  for (long k = K; k >= 1; --k) {
    const double xk = k * c;
    acc.add(detail::log_disk_abs(z - xk));
    acc.add(detail::log_disk_abs(z + xk));
  }
  acc.add(detail::log_disk_abs(z));
  GreenEvaluation out;
  out.value = acc.value();
  out.terms_used = K;
  out.tail_bound = tail;
  out.near_pole = std::abs(w - 1.0) < 1e-9;
  return out;
}

/// c(a) log r with c(a) = -e^{-pi^2 / log a} / pi^2.
inline double circle_constant(double a) {
  if (!(a > 1)) throw DomainError("annulus_potential", "a must exceed 1");
  return -std::exp(-kPi * kPi / std::log(a)) / (kPi * kPi);
}

inline double sup_circle_bound(const AnnulusSpec& spec, double a) {
  if (!(a > 1) || a > spec.r) throw DomainError("annulus_potential", "need 1 < a <= r");
  return circle_constant(a) * spec.log_r();
}

struct CircleSup {
  double sup = kNegInf;
  double argmax = 0.0;
  int samples = 0;
};

/// max of g over equispaced points of |w| = 1 outside a 1e-6 arc around w = 1,
/// doubling the sample count until the maximum moves by < 0.1%.
inline CircleSup measure_circle_sup(const AnnulusSpec& spec, int m = 64, double eps = 1e-14, int max_samples = 1 << 16) {
  if (m < 16) throw DomainError("annulus_potential", "need at least 16 samples");
  auto pass = [&](int n) {
    CircleSup s;
    s.samples = n;
    for (int i = 0; i < n; ++i) {
      double th = 2.0 * kPi * i / n;
      if (th < 1e-6 || 2.0 * kPi - th < 1e-6) continue;
      double v = green(std::polar(1.0, th), spec, eps).value;
      if (v > s.sup) s.sup = v, s.argmax = th;
    }
    return s;
  };
  CircleSup prev = pass(m);
  while (2 * prev.samples <= max_samples) {
    CircleSup cur = pass(2 * prev.samples);
    bool done = std::abs(cur.sup - prev.sup) <= 1e-3 * std::abs(cur.sup);
    prev = cur.sup >= prev.sup ? cur : CircleSup{prev.sup, prev.argmax, cur.samples};
    if (done) break;
  }
  return prev;
}

/// c(2) m^{1 - 1/dim} log t.
inline double multipole_bound(long m, double t, int ambient_dim) {
  if (m < 1 || ambient_dim < 2) throw DomainError("annulus_potential", "need m >= 1 and ambient dimension >= 2");
  if (!(m * std::log(t) > std::log(2.0)))
    throw DomainError("annulus_potential", "need t^m > 2");
  return circle_constant(2.0) * std::pow(static_cast<double>(m), 1.0 - 1.0 / ambient_dim) * std::log(t);
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

/// g on the grid u_i = -log r + i h_u (i = 0..n_rad), theta_j = 2 pi j / n_ang.
struct FdField {
  double r = 2.0;
  int n_rad = 0;
  int n_ang = 0;
  std::vector<double> g;  // (n_rad + 1) x n_ang, row-major in u; -inf at the pole node
  int iterations = 0;
  double residual = 0.0;

  double u(int i) const { return -std::log(r) + 2.0 * std::log(r) * i / n_rad; }
  double theta(int j) const { return 2.0 * kPi * j / n_ang; }
  double at(int i, int j) const { return g[static_cast<std::size_t>(i) * n_ang + j]; }
  Complex point(int i, int j) const { return std::polar(std::exp(u(i)), theta(j)); }

  std::string to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17) << "u,theta,g\n";
    for (int i = 0; i <= n_rad; ++i)
      for (int j = 0; j < n_ang; ++j) os << u(i) << ',' << theta(j) << ',' << at(i, j) << '\n';
    return os.str();
  }
};

/// 5-point Laplace solve in (log|w|, arg w) for the regular part
/// h = g - log|w - 1|, with h = -log|w - 1| on both boundary circles.
inline FdField fd_oracle(const AnnulusSpec& spec, int n_rad, int n_ang, double tol = 1e-10, int max_iter = 200000) {
  if (n_rad < 64 || n_ang < 64) throw DomainError("annulus_potential", "grid sizes must be >= 64");
  FdField f;
  f.r = spec.r;
  f.n_rad = n_rad;
  f.n_ang = n_ang;
  const double hu = 2.0 * spec.log_r() / n_rad, ht = 2.0 * kPi / n_ang;
  const double cu = 1.0 / (hu * hu), ct = 1.0 / (ht * ht);
  const int rows = n_rad - 1;
  const int N = rows * n_ang;
  auto idx = [&](int i, int j) { return (i - 1) * n_ang + ((j % n_ang) + n_ang) % n_ang; };
  auto boundary = [&](int i, int j) { return -std::log(std::abs(f.point(i, j) - 1.0)); };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(N) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  for (int i = 1; i <= rows; ++i) {
    for (int j = 0; j < n_ang; ++j) {
      int p = idx(i, j);
      trip.emplace_back(p, p, 2 * cu + 2 * ct);
      trip.emplace_back(p, idx(i, j - 1), -ct);
      trip.emplace_back(p, idx(i, j + 1), -ct);
      if (i > 1)
        trip.emplace_back(p, idx(i - 1, j), -cu);
      else
        rhs(p) += cu * boundary(0, j);
      if (i < rows)
        trip.emplace_back(p, idx(i + 1, j), -cu);
      else
        rhs(p) += cu * boundary(n_rad, j);
    }
  }
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(max_iter);
  cg.compute(A);
  Eigen::VectorXd h = cg.solve(rhs);
  f.iterations = static_cast<int>(cg.iterations());
  f.residual = cg.error();
  if (cg.info() != Eigen::Success)
    throw ConvergenceError("annulus_potential", "finite-difference solve stopped at relative residual " +
                                                    std::to_string(cg.error()));
  f.g.assign(static_cast<std::size_t>(n_rad + 1) * n_ang, 0.0);
  for (int i = 1; i <= rows; ++i)
    for (int j = 0; j < n_ang; ++j) {
      double d = std::abs(f.point(i, j) - 1.0);
      f.g[static_cast<std::size_t>(i) * n_ang + j] = d == 0.0 ? kNegInf : h(idx(i, j)) + std::log(d);
    }
  return f;
}

struct FdComparison {
  double max_deviation = 0.0;
  Complex worst_point{0.0, 0.0};
  long points = 0;
};

/// max |fd - series| over interior grid nodes with |w - 1| >= min_pole_distance.
inline FdComparison compare_fd(const FdField& f, double min_pole_distance = 0.1) {
  AnnulusSpec spec(f.r);
  FdComparison out;
  for (int i = 1; i < f.n_rad; ++i)
    for (int j = 0; j < f.n_ang; ++j) {
      Complex w = f.point(i, j);
      if (std::abs(w - 1.0) < min_pole_distance) continue;
      double d = std::abs(f.at(i, j) - green(w, spec).value);
      ++out.points;
      if (d > out.max_deviation) out.max_deviation = d, out.worst_point = w;
    }
  return out;
}

}  // namespace quasipolar
