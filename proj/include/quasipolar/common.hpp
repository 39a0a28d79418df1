#pragma once

// Shared numerics and error types for the quasipolar library.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasipolar {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Base class for every error raised by the library. Messages carry the
/// originating module as a prefix ("circle_functions: ...").
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(module) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// A parameter lies outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input behaves like a trigonometric polynomial (bounded growth of the
/// derivative norms); scale analysis does not apply.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A certified bound could not be established within the work limits.
class CertificationError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

namespace detail {

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Neumaier-compensated accumulator; order of additions is the caller's.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
      else
        comp_ += (x - t) + sum_;
    } else {
      comp_ += correction(sum_, x, t);
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static T correction(T s, T x, T t) {
    auto part = [](double s, double x, double t) {
      return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    };
    return T(part(s.real(), x.real(), t.real()), part(s.imag(), x.imag(), t.imag()));
  }
  T sum_{};
  T comp_{};
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

/// Unit complex number e^{i*angle}.
inline Complex unit(double angle) { return std::polar(1.0, angle); }

/// omega^m for omega = e^{2 pi i / n}, with the exponent reduced mod n first.
inline Complex root_of_unity_power(long long m, long long n) {
  long long r = ((m % n) + n) % n;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
}

}  // namespace detail
}  // namespace quasipolar
