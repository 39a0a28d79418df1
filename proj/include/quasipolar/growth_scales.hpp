#pragma once

// Scale sequences t_n and theta(n) built from the associated function, and the
// divergence diagnostic sqrt(n) log t_n.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quasipolar/common.hpp"
#include "quasipolar/norm_sequence.hpp"

namespace quasipolar {

inline constexpr int kDefaultGridDensity = 64;

inline TauResult tau(const NormSequence& m, double r) { return m.tau(r); }
inline TauResult shifted_tau(const NormSequence& m, double r) { return m.shifted_tau(r); }

/// A minimum over 1 <= r <= n together with where it is attained.
struct ScaleValue {
  double value = kInf;
  double r = 1.0;
  bool truncated = false;
  bool degenerate = false;
};

/// M scaled by 0.4 / M_3 when M_3 >= 1/2; returns the factor applied.
inline NormSequence normalize(const NormSequence& m, double* factor = nullptr) {
  if (m.max_j() < 3) throw DomainError("growth_scales", "normalization needs M_3");
  double f = m.value(3) < 0.5 ? 1.0 : 0.4 / m.value(3);
  if (factor) *factor = f;
  return f == 1.0 ? m : m.scaled(f);
}

namespace detail {

// phi(s) at r = e^s, with the tau evaluation that produced it.
using ScaleObjective = std::function<double(double, TauResult&)>;

// Points where phi = (-log tau - w s) e^{-s} can have a local minimum: on a hull
// piece with index p > w phi is increasing then decreasing, so only kinks and,
// for p < w, the piece's stationary point 1 + log M / (p - w) qualify.
inline std::vector<double> scale_candidates(const LowerHull& hull, const std::vector<double>& logm, int shift,
                                            double w) {
  std::vector<double> out(hull.slopes().begin(), hull.slopes().end());
  for (int j : hull.vertices()) {
    double a = j - w;
    if (a < 0) out.push_back(1.0 + logm[j + shift] / a);
  }
  return out;
}

inline ScaleValue minimize_scale(const ScaleObjective& phi, long n, int grid_density,
                                 const std::vector<double>& candidates = {}) {
  if (n < 1) throw DomainError("growth_scales", "n must be >= 1");
  if (grid_density < 2) throw DomainError("growth_scales", "grid density must be >= 2");
  ScaleValue out;
  TauResult t;
  const double s_max = std::log(static_cast<double>(n));
  if (n == 1) {
    out.value = phi(0.0, t);
    out.truncated = t.truncated;
    out.degenerate = t.degenerate;
    return out;
  }
  const int cells = std::max(1, static_cast<int>(std::ceil(grid_density * s_max / std::log(10.0))));
  std::vector<double> s(cells + 1), v(cells + 1);
  int best = 0;
  for (int i = 0; i <= cells; ++i) {
    s[i] = i == cells ? s_max : s_max * i / cells;
    v[i] = phi(s[i], t);
    if (t.degenerate) {
      out.degenerate = true;
      out.value = kInf;
      out.r = std::exp(s[i]);
      return out;
    }
    if (v[i] < v[best]) best = i;
  }
  // golden-section refinement on the cell pair around the grid minimum
  double a = s[std::max(best - 1, 0)], b = s[std::min(best + 1, cells)];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = phi(x1, t), f2 = phi(x2, t);
  for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = phi(x1, t);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = phi(x2, t);
    }
  }
  double s_best = s[best], v_best = v[best];
  if (f1 < v_best) s_best = x1, v_best = f1;
  if (f2 < v_best) s_best = x2, v_best = f2;
  for (double c : candidates) {
    if (!(c > 0.0 && c < s_max)) continue;
    double fc = phi(c, t);
    if (fc < v_best) s_best = c, v_best = fc;
  }
  out.value = phi(s_best, t);
  out.r = std::exp(s_best);
  out.truncated = t.truncated;
  return out;
}

}  // namespace detail

/// log t_n = min_{1<=r<=n} -log(r^3 tau(r)) / r. The grid search is
/// completed by evaluating phi at every hull kink in range.
inline ScaleValue log_tn(const NormSequence& m, long n, int grid_density = kDefaultGridDensity) {
  auto phi = [&](double s, TauResult& t) {
    t = m.tau(std::exp(s));
    return -(3.0 * s + t.log_tau) * std::exp(-s);
  };
  return detail::minimize_scale(phi, n, grid_density, detail::scale_candidates(m.hull(), m.log_values(), 0, 3.0));
}

/// log theta(n) = min_{1<=r<=n} -log tau~(r) / r.
inline ScaleValue log_theta(const NormSequence& m, long n, int grid_density = kDefaultGridDensity) {
  auto phi = [&](double s, TauResult& t) {
    t = m.shifted_tau(std::exp(s));
    return -t.log_tau * std::exp(-s);
  };
  return detail::minimize_scale(phi, n, grid_density, detail::scale_candidates(m.shifted_hull(), m.log_values(), 3, 0.0));
}

struct ScaleRow {
  long n = 1;
  double log_tn = 0.0;
  double log_theta_n = 0.0;
  double sqrtn_log_tn = 0.0;
  double minimizing_r = 1.0;
  double diagnostic = 0.0;  // n^{1-1/(N+1)} log t_n; equals sqrtn_log_tn when N = 1
  bool truncated = false;
};

struct ScaleTable {
  std::vector<ScaleRow> rows;
  double normalization_factor = 1.0;
  int max_j = 0;
  int dim = 1;
  int grid_density = kDefaultGridDensity;

  double diagnostic_exponent() const { return 1.0 - 1.0 / (dim + 1.0); }
  bool any_truncated() const {
    return std::any_of(rows.begin(), rows.end(), [](const ScaleRow& r) { return r.truncated; });
  }
};

/// One row per n. M must already satisfy M_3 < 1/2.
inline ScaleTable build_scale_table(const NormSequence& m, const std::vector<long>& n_list, int dim = 1,
                                    int grid_density = kDefaultGridDensity) {
  if (n_list.empty()) throw DomainError("growth_scales", "empty n list");
  if (dim < 1) throw DomainError("growth_scales", "dimension must be >= 1");
  if (m.max_j() < 4) throw DomainError("growth_scales", "scale table needs M_0..M_4 at least");
  if (!(m.value(3) < 0.5)) throw DomainError("growth_scales", "sequence is not normalized (M_3 >= 1/2)");
  ScaleTable table;
  table.max_j = m.max_j();
  table.dim = dim;
  table.grid_density = grid_density;
  for (long n : n_list) {
    ScaleValue t = log_tn(m, n, grid_density);
    if (t.degenerate)
      throw DegenerateError("growth_scales", "bounded norm growth (trigonometric polynomial): tau vanishes for r > " +
                                                 std::to_string(m.growth_limit().value_or(0.0)));
    ScaleValue th = log_theta(m, n, grid_density);
    ScaleRow row;
    row.n = n;
    row.log_tn = t.value;
    row.log_theta_n = th.value;
    row.sqrtn_log_tn = std::sqrt(static_cast<double>(n)) * t.value;
    row.diagnostic = std::pow(static_cast<double>(n), table.diagnostic_exponent()) * t.value;
    row.minimizing_r = t.r;
    row.truncated = t.truncated || th.truncated;
    table.rows.push_back(row);
  }
  return table;
}

inline std::string to_csv(const ScaleTable& table) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n,log_tn,log_theta_n,sqrtn_log_tn,minimizing_r\n";
  for (const auto& r : table.rows)
    os << r.n << ',' << r.log_tn << ',' << r.log_theta_n << ',' << r.sqrtn_log_tn << ',' << r.minimizing_r << '\n';
  return os.str();
}

enum class Growth { Diverges, Bounded, Inconclusive };

inline const char* growth_name(Growth g) {
  switch (g) {
    case Growth::Diverges: return "diverges";
    case Growth::Bounded: return "bounded";
    default: return "inconclusive";
  }
}

struct GrowthVerdict {
  Growth verdict = Growth::Inconclusive;
  double slope = 0.0;           // d log(diagnostic) / d log n
  double decade_ratio = kNaN(); // increment ratio of the diagnostic per decade of n
  std::string caveat = "asymptotic property, desk-scale evidence only";
  static double kNaN() { return std::numeric_limits<double>::quiet_NaN(); }
};

/// Heuristic reading of the limsup of the diagnostic column over the last half
/// of the rows (at least three). Growing increments (per-decade ratio >= 0.9)
/// with a positive log-slope read as divergence; geometrically shrinking
/// increments (ratio <= 0.6) or a decreasing column read as bounded.
inline GrowthVerdict growth_verdict(const ScaleTable& table, double threshold = 0.05, double cap = 10.0) {
  const auto& rows = table.rows;
  if (rows.size() < 4) throw DomainError("growth_scales", "growth verdict needs at least 4 rows");
  if (static_cast<double>(rows.back().n) < 100.0 * static_cast<double>(rows.front().n))
    throw DomainError("growth_scales", "growth verdict needs rows spanning at least two decades");
  const std::size_t first = std::min(rows.size() / 2, rows.size() - 3);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(rows.size() - first);
  for (std::size_t i = first; i < rows.size(); ++i) {
    if (!(rows[i].diagnostic > 0)) throw DomainError("growth_scales", "diagnostic must be positive");
    double x = std::log(static_cast<double>(rows[i].n)), y = std::log(rows[i].diagnostic);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  GrowthVerdict out;
  out.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  bool decreasing = true, rising = true;
  for (std::size_t i = first + 1; i < rows.size(); ++i) {
    decreasing = decreasing && rows[i].diagnostic < rows[i - 1].diagnostic && rows[i].diagnostic <= cap;
    rising = rising && rows[i].diagnostic > rows[i - 1].diagnostic;
  }
  if (rising) {
    const std::size_t last = rows.size() - 1;
    double d0 = rows[first + 1].diagnostic - rows[first].diagnostic;
    double d1 = rows[last].diagnostic - rows[last - 1].diagnostic;
    double span = std::log10(static_cast<double>(rows[last].n)) - std::log10(static_cast<double>(rows[first + 1].n));
    out.decade_ratio = std::pow(d1 / d0, 1.0 / span);
  }
  if (rising && out.slope >= threshold && out.decade_ratio >= 0.9)
    out.verdict = Growth::Diverges;
  else if (out.slope <= -threshold || decreasing || (rising && out.decade_ratio <= 0.6))
    out.verdict = Growth::Bounded;
  return out;
}

inline std::string report(const ScaleTable& table, const std::optional<GrowthVerdict>& verdict = std::nullopt) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "scale table\n";
  os << "  normalization factor: " << table.normalization_factor << "\n";
  os << "  max j: " << table.max_j << "\n";
  os << "  grid density: " << table.grid_density << " per decade\n";
  os << "  diagnostic: n^" << table.diagnostic_exponent() << " log t_n\n";
  if (table.any_truncated()) os << "  warning: some minimizers reach the last stored j; values are bounds only\n";
  os << "  " << std::setw(10) << "n" << std::setw(20) << "log t_n" << std::setw(20) << "log theta_n" << std::setw(20)
     << "diagnostic" << std::setw(20) << "argmin r" << "\n";
  for (const auto& r : table.rows)
    os << "  " << std::setw(10) << r.n << std::setw(20) << r.log_tn << std::setw(20) << r.log_theta_n << std::setw(20)
       << r.diagnostic << std::setw(20) << r.minimizing_r << "\n";
  if (verdict)
    os << "  verdict: " << growth_name(verdict->verdict) << " (slope " << verdict->slope << ", increment ratio per decade "
       << verdict->decade_ratio << "; " << verdict->caveat
       << ")\n";
  return os.str();
}

}  // namespace quasipolar
