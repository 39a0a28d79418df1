#pragma once

// Pluripolarity evidence for graphs of circle functions: the Bernstein route
// (fast polynomial approximation, checked through explicit psh witnesses) and
// the smooth routes (scale divergence, Gevrey fit, Denjoy-Carleman).

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quasipolar/annulus_potential.hpp"
#include "quasipolar/circle_functions.hpp"
#include "quasipolar/growth_scales.hpp"
#include "quasipolar/quasi_tests.hpp"
#include "quasipolar/trig_interp.hpp"

namespace quasipolar {

enum class Route { Bernstein, Denjoy, Gevrey, None };
enum class Verdict { PluripolarEvidence, NoEvidence, DegenerateAnalytic };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::Bernstein: return "bernstein";
    case Route::Denjoy: return "denjoy";
    case Route::Gevrey: return "gevrey";
    default: return "none";
  }
}

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PluripolarEvidence: return "pluripolar-evidence";
    case Verdict::NoEvidence: return "no-evidence";
    default: return "degenerate-analytic";
  }
}

inline constexpr const char* kDeskScaleCaveat = "asymptotic criteria checked at desk scale";
inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct CertifyOptions {
  std::vector<long> bernstein_n = {8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384, 32768, 65536};
  std::vector<long> scale_n = {100, 316, 1000, 3162, 10000, 31623, 100000};
  std::vector<long> interp_n = {8, 16, 32, 64};
  int z0_samples = 3;
  int circle_samples = 4096;
  int box_samples = 10000;
  int witness_count = 4;
  double witness_tol = 1e-9;
  double bernstein_delta = 0.01;
  std::uint64_t seed = kDefaultSeed;
  int dim = 1;
  int max_j = 400;  // norms computed for pointwise rules
  int grid_density = kDefaultGridDensity;
  double denjoy_r_max = 1e6;

  nlohmann::json to_json() const {
    return {{"bernstein_n", bernstein_n}, {"scale_n", scale_n},       {"interp_n", interp_n},
            {"z0_samples", z0_samples},   {"circle_samples", circle_samples}, {"box_samples", box_samples},
            {"witness_count", witness_count}, {"witness_tol", witness_tol}, {"bernstein_delta", bernstein_delta},
            {"seed", seed},               {"dim", dim},               {"max_j", max_j},
            {"grid_density", grid_density}, {"denjoy_r_max", denjoy_r_max}};
  }
};

/// v_k(z, w) = log|w - p_{n_k}(z)| / n_k checked on the circle (against log c)
/// and on a box in C* x C (against max{V(z), log|w| / n_k} + log 2 / n_k).
struct WitnessCheck {
  std::vector<long> n_k;
  int circle_samples = 0;
  int box_samples = 0;
  double circle_max_excess = kNegInf;  // max v_k(z, f(z)) - log c
  double box_max_excess = kNegInf;     // max v_k - bound
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  bool holds() const { return circle_max_excess <= tolerance && box_max_excess <= tolerance; }
};

struct GevreyFit {
  double p = kNaN();         // fitted power of L_j = j^p over j in [J/2, J]
  double p_used = kNaN();    // p plus margin, tested for membership
  double c_prime = kNaN();
  int J = 0;
  bool member = false;
  bool little_o_j2 = false;  // p_used < 2
  bool series_diverges = false;
  static double kNaN() { return std::numeric_limits<double>::quiet_NaN(); }
};

struct Certificate {
  Route route = Route::None;
  Verdict verdict = Verdict::NoEvidence;
  int dim = 1;
  std::string input;
  double sup_factor = 1.0;   // rescaling to sum |c_k| <= 1/2 (bernstein)
  double norm_factor = 1.0;  // rescaling to M_3 = 0.4 (smooth)
  std::optional<ScaleTable> scale_table;
  std::optional<GrowthVerdict> growth;
  std::optional<UniformBoundScan> interp_evidence;
  std::string interp_note;
  std::vector<std::pair<long, double>> multipole;  // (n, bound); -> -inf when the diagnostic diverges
  std::optional<QuasiVerdict> bernstein_evidence;
  std::optional<WitnessCheck> witness;
  std::optional<GevreyFit> gevrey_fit;
  std::optional<QuasiVerdict> denjoy_evidence;
  std::vector<std::string> caveats;

  void add_caveat(const std::string& c) {
    if (std::find(caveats.begin(), caveats.end(), c) == caveats.end()) caveats.push_back(c);
  }

  std::string to_text() const;
  nlohmann::json to_json() const;
};

namespace detail {

inline double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return x;
}

/// Halton points in [0,1)^4 with a seed-derived Cranley-Patterson shift.
class QuasiRandom4 {
 public:
  explicit QuasiRandom4(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& s : shift_) s = u(rng);
  }
  std::array<double, 4> operator()(std::uint64_t i) const {
    static constexpr unsigned bases[4] = {2, 3, 5, 7};
    std::array<double, 4> p{};
    for (int d = 0; d < 4; ++d) {
      double x = radical_inverse(i + 1, bases[d]) + shift_[d];
      p[d] = x - std::floor(x);
    }
    return p;
  }

 private:
  std::array<double, 4> shift_{};
};

// p_n(z) e^{-n V(z)} for the truncated Fourier series of degree n.
inline Complex scaled_partial_sum(const CoefficientRule& rule, long n, Complex z) {
  const double lr = std::log(std::abs(z)), th = std::arg(z), v = std::abs(lr);
  CompensatedSum<Complex> acc;
  auto term = [&](long k, Complex c) { acc.add(c * std::polar(std::exp(k * lr - n * v), k * th)); };
  if (rule.family() == Family::ExplicitList) {
    for (const auto& [k, c] : rule.coefficients())
      if (std::abs(k) <= n) term(k, c * rule.scale());
  } else {
    for (long k = n; k >= 1; --k) {
      Complex c = rule.coefficient(k);
      term(k, c);
      term(-k, c);
    }
    term(0, rule.coefficient(0));
  }
  return acc.value();
}

// f - p_n on |z| = 1 as the tail series, with a certified remainder.
struct TailValue {
  double abs = 0.0;
  double remainder = 0.0;
};

inline TailValue circle_tail(const CoefficientRule& rule, long n, long K, double remainder, double theta) {
  CompensatedSum<Complex> acc;
  if (rule.family() == Family::ExplicitList) {
    for (const auto& [k, c] : rule.coefficients())
      if (std::abs(k) > n) acc.add(c * rule.scale() * std::polar(1.0, k * theta));
  } else {
    for (long k = K; k > n; --k) acc.add(Complex(2.0 * rule.coefficient(k).real() * std::cos(k * theta), 0.0));
  }
  return {std::abs(acc.value()), remainder};
}

inline WitnessCheck check_witnesses(const CoefficientRule& rule, const std::vector<long>& n_k, double log_c,
                                    const CertifyOptions& opt) {
  WitnessCheck w;
  w.n_k = n_k;
  w.circle_samples = opt.circle_samples;
  w.box_samples = opt.box_samples;
  w.tolerance = opt.witness_tol;
  w.seed = opt.seed;
  for (long n : n_k) {
    EnBracket b = en_bounds(rule, n);
    long K = n;
    double rem = 0.0;
    if (rule.family() != Family::ExplicitList) {
      K = std::max(n, truncation_index(rule, std::max(1e-300, b.upper() * 1e-12)));
      rem = std::exp(rule.log_abs_tail(K));
    }
    for (int i = 0; i < opt.circle_samples; ++i) {
      TailValue t = circle_tail(rule, n, K, rem, 2.0 * kPi * i / opt.circle_samples);
      double v = std::log(t.abs + t.remainder) / n;
      w.circle_max_excess = std::max(w.circle_max_excess, v - log_c);
    }
    QuasiRandom4 qr(opt.seed);
    for (int i = 0; i < opt.box_samples; ++i) {
      auto u = qr(static_cast<std::uint64_t>(i));
      Complex z = std::polar(std::exp(std::log(0.25) + u[0] * std::log(16.0)), 2.0 * kPi * u[1] - kPi);
      Complex wv = std::polar(2.0 * std::sqrt(u[2]), 2.0 * kPi * u[3]);
      const double V = std::abs(std::log(std::abs(z)));
      Complex d = wv * std::exp(-n * V) - scaled_partial_sum(rule, n, z);
      double v = V + std::log(std::abs(d)) / n;
      double bound = std::max(V, std::log(std::abs(wv)) / n) + std::log(2.0) / n;
      w.box_max_excess = std::max(w.box_max_excess, v - bound);
    }
  }
  return w;
}

inline GevreyFit fit_gevrey(const NormSequence& m) {
  GevreyFit fit;
  fit.J = m.max_j();
  const int lo = std::max(2, fit.J / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (int j = lo; j <= fit.J; ++j) {
    double x = std::log(static_cast<double>(j)), y = m.log_value(j) / j;
    sx += x, sy += y, sxx += x * x, sxy += x * y, cnt += 1;
  }
  fit.p = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  fit.p_used = fit.p + 0.02;
  if (fit.p_used > 0) {
    GevreyMembership g = gevrey_membership(m, GevreySequence::power(fit.p_used), fit.J);
    fit.member = g.member;
    fit.c_prime = g.c_prime;
  }
  fit.little_o_j2 = fit.p_used < 2.0;
  fit.series_diverges = fit.p <= 1.05;
  return fit;
}

inline std::vector<Complex> z0_samples(int count) {
  std::vector<Complex> out;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i <= count; ++i) {
    double x = i * golden;
    out.push_back(unit(2.0 * kPi * (x - std::floor(x))));
  }
  return out;
}

// Scale, Gevrey and Denjoy analysis of M (already combined over components).
inline Certificate smooth_pipeline(const NormSequence& raw, const std::vector<CoefficientRule>& pointwise,
                                   const CertifyOptions& opt) {
  Certificate cert;
  cert.dim = opt.dim;
  cert.add_caveat(kDeskScaleCaveat);
  if (raw.degenerate() || raw.max_j() < 4 || !(raw.value(3) > 0)) {
    cert.verdict = Verdict::DegenerateAnalytic;
    cert.add_caveat("bounded norm growth: the function is a trigonometric polynomial");
    return cert;
  }
  cert.norm_factor = 0.4 / raw.value(3);
  const NormSequence m = raw.scaled(cert.norm_factor);
  ScaleTable table = build_scale_table(m, opt.scale_n, opt.dim, opt.grid_density);
  table.normalization_factor = cert.norm_factor;
  if (table.any_truncated()) cert.add_caveat("some scale minimizers reach the last stored norm; those rows are bounds");
  GrowthVerdict gv = growth_verdict(table);
  for (const auto& row : table.rows)
    if (row.n * row.log_tn > std::log(2.0))
      cert.multipole.emplace_back(row.n, multipole_bound(row.n, std::exp(row.log_tn), opt.dim + 1));

  UniformBoundScan scan;
  if (!pointwise.empty()) {
    auto z0 = z0_samples(opt.z0_samples);
    for (const auto& rule : pointwise) {
      UniformBoundScan s = uniform_bound_scan(rule.scaled(cert.norm_factor), opt.interp_n, z0, opt.max_j);
      scan.rows.insert(scan.rows.end(), s.rows.begin(), s.rows.end());
    }
    cert.interp_note = "interpolant sup over A(t_n) against S(n, t_n) at sampled z0";
    cert.add_caveat("interpolation bound checked at sampled z0 only");
  } else {
    for (long n : opt.interp_n) {
      ScaleValue lt = log_tn(m, n, opt.grid_density);
      ScanRow row;
      row.n = n;
      row.log_tn = lt.value;
      row.er_bound = er_bound(m, n, std::exp(lt.value));
      row.sup_measured = row.ratio = std::numeric_limits<double>::quiet_NaN();
      scan.rows.push_back(row);
    }
    cert.interp_note = "synthetic norms: S(n, t_n) bound column only, no pointwise interpolant";
  }
  cert.interp_evidence = scan;

  GevreyFit fit = fit_gevrey(m);
  cert.gevrey_fit = fit;
  const double r_max = std::min(opt.denjoy_r_max, m.reach());
  Answer dc = Answer::Inconclusive;
  if (r_max >= 100) {
    cert.denjoy_evidence = denjoy_carleman(m, r_max);
    dc = cert.denjoy_evidence->verdict;
  } else {
    cert.add_caveat("norm range too short for the Denjoy-Carleman integral");
  }

  const bool diverges = gv.verdict == Growth::Diverges;
  if (diverges && fit.member && fit.little_o_j2 && !fit.series_diverges) {
    cert.route = Route::Gevrey;
    cert.verdict = Verdict::PluripolarEvidence;
  } else if (dc == Answer::Yes || (fit.member && fit.series_diverges)) {
    cert.route = Route::Denjoy;
    cert.verdict = Verdict::PluripolarEvidence;
    if (dc != Answer::Yes) cert.add_caveat("Denjoy route from a Gevrey fit with divergent sum 1/L_j");
  } else if (diverges) {
    cert.verdict = Verdict::PluripolarEvidence;
    cert.add_caveat("scale diagnostic diverges; no Gevrey or Denjoy classification");
  }
  cert.scale_table = std::move(table);
  cert.growth = gv;
  return cert;
}

}  // namespace detail

/// Bernstein route: liminf E_n^{1/n} < 1 witnessed by truncated Fourier series.
inline Certificate certify_bernstein(const CoefficientRule& rule, const CertifyOptions& opt = {}) {
  rule.require_pointwise("Bernstein certificate");
  Certificate cert;
  cert.dim = opt.dim;
  cert.add_caveat(kDeskScaleCaveat);
  const double sum = abs_coefficient_sum(rule);
  if (!(sum > 0)) {
    cert.verdict = Verdict::DegenerateAnalytic;
    cert.add_caveat("zero function");
    return cert;
  }
  cert.sup_factor = sum > 0.5 ? 0.5 / sum : 1.0;
  const CoefficientRule g = cert.sup_factor == 1.0 ? rule : rule.scaled(cert.sup_factor);
  QuasiVerdict bv = bernstein_verdict(g, opt.bernstein_n, opt.bernstein_delta);
  cert.bernstein_evidence = bv;
  if (bv.verdict == Answer::Yes && bv.constant == 0.0) {  // some E_n is exactly zero
    cert.verdict = Verdict::DegenerateAnalytic;
    cert.add_caveat("E_n vanishes: trigonometric polynomial, graph is algebraic over C*");
    return cert;
  }
  if (bv.verdict != Answer::Yes) {
    cert.add_caveat("no subsequence with E_n^{1/n} <= c < 1 at desk scale");
    return cert;
  }
  std::vector<long> n_k;
  for (const auto& r : bv.evidence.rows)
    if (r[3] <= bv.constant && static_cast<int>(n_k.size()) < opt.witness_count) n_k.push_back(static_cast<long>(r[0]));
  cert.witness = detail::check_witnesses(g, n_k, std::log(bv.constant), opt);
  if (cert.witness->holds()) {
    cert.route = Route::Bernstein;
    cert.verdict = Verdict::PluripolarEvidence;
  } else {
    cert.add_caveat("witness inequalities failed at some samples");
  }
  return cert;
}

/// Smooth routes for one rule (pointwise or synthetic).
inline Certificate certify_smooth(const CoefficientRule& rule, const CertifyOptions& opt = {}) {
  NormSequence m = norm_sequence(rule, opt.max_j);
  std::vector<CoefficientRule> pw;
  if (rule.pointwise()) pw.push_back(rule);
  return detail::smooth_pipeline(m, pw, opt);
}

/// Vector-valued f = (f_1..f_N): M_j = max_k M_j(f_k), diagnostic n^{1-1/(N+1)} log t_n.
inline Certificate certify_vector(const std::vector<CoefficientRule>& rules, CertifyOptions opt = {}) {
  if (rules.empty()) throw DomainError("certify", "need at least one component");
  opt.dim = static_cast<int>(rules.size());
  std::vector<NormSequence> seqs;
  std::vector<CoefficientRule> pw;
  for (const auto& r : rules) {
    seqs.push_back(norm_sequence(r, opt.max_j));
    if (r.pointwise()) pw.push_back(r);
  }
  return detail::smooth_pipeline(seqs.size() == 1 ? seqs.front() : pointwise_max(seqs), pw, opt);
}

/// Bernstein route first when pointwise values exist, then the smooth routes.
inline Certificate certify(const std::vector<CoefficientRule>& rules, const CertifyOptions& opt = {}) {
  if (rules.empty()) throw DomainError("certify", "need at least one component");
  std::optional<Certificate> bern;
  if (rules.size() == 1 && rules.front().pointwise()) {
    bern = certify_bernstein(rules.front(), opt);
    if (bern->verdict != Verdict::NoEvidence) return *bern;
  }
  Certificate cert = certify_vector(rules, opt);
  if (bern) {
    cert.bernstein_evidence = bern->bernstein_evidence;
    cert.sup_factor = bern->sup_factor;
    for (const auto& c : bern->caveats) cert.add_caveat(c);
  } else if (rules.size() == 1 && !rules.front().pointwise()) {
    cert.add_caveat("synthetic norms: pointwise routes unavailable");
  }
  return cert;
}

inline Certificate certify(const CoefficientRule& rule, const CertifyOptions& opt = {}) {
  return certify(std::vector<CoefficientRule>{rule}, opt);
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

inline nlohmann::json evidence_json(const QuasiVerdict& v) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : v.evidence.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (double x : r) row.push_back(json_number(x));
    rows.push_back(row);
  }
  return {{"notion", notion_name(v.notion)}, {"verdict", answer_name(v.verdict)}, {"constant", json_number(v.constant)},
          {"caveat", v.caveat}, {"columns", v.evidence.columns}, {"rows", rows}};
}

}  // namespace detail

inline nlohmann::json Certificate::to_json() const {
  using detail::json_number;
  nlohmann::json j;
  j["route"] = route_name(route);
  j["verdict"] = verdict_name(verdict);
  j["dim"] = dim;
  if (!input.empty()) j["input"] = input;
  j["sup_factor"] = json_number(sup_factor);
  j["norm_factor"] = json_number(norm_factor);
  if (scale_table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : scale_table->rows)
      rows.push_back({{"n", r.n}, {"log_tn", json_number(r.log_tn)}, {"log_theta_n", json_number(r.log_theta_n)},
                      {"sqrtn_log_tn", json_number(r.sqrtn_log_tn)}, {"diagnostic", json_number(r.diagnostic)},
                      {"minimizing_r", json_number(r.minimizing_r)}, {"truncated", r.truncated}});
    j["scale_table"] = {{"diagnostic_exponent", scale_table->diagnostic_exponent()},
                        {"max_j", scale_table->max_j},
                        {"grid_density", scale_table->grid_density},
                        {"rows", rows}};
  }
  if (growth)
    j["growth"] = {{"verdict", growth_name(growth->verdict)}, {"slope", json_number(growth->slope)},
                   {"decade_ratio", json_number(growth->decade_ratio)}, {"caveat", growth->caveat}};
  if (interp_evidence) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : interp_evidence->rows)
      rows.push_back({{"n", r.n}, {"z0_arg", json_number(r.z0_arg)}, {"log_tn", json_number(r.log_tn)},
                      {"sup_measured", json_number(r.sup_measured)}, {"er_bound", json_number(r.er_bound)},
                      {"ratio", json_number(r.ratio)}});
    j["interp_evidence"] = {{"note", interp_note}, {"rows", rows}};
  }
  if (!multipole.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [n, b] : multipole) rows.push_back({{"n", n}, {"bound", json_number(b)}});
    j["multipole_bounds"] = rows;
  }
  if (bernstein_evidence) {
    nlohmann::json b = detail::evidence_json(*bernstein_evidence);
    if (witness)
      b["witness"] = {{"n_k", witness->n_k},
                      {"circle_samples", witness->circle_samples},
                      {"box_samples", witness->box_samples},
                      {"circle_max_excess", json_number(witness->circle_max_excess)},
                      {"box_max_excess", json_number(witness->box_max_excess)},
                      {"tolerance", witness->tolerance},
                      {"seed", witness->seed},
                      {"holds", witness->holds()}};
    j["bernstein_evidence"] = b;
  }
  if (gevrey_fit)
    j["gevrey_fit"] = {{"p", json_number(gevrey_fit->p)},
                       {"p_used", json_number(gevrey_fit->p_used)},
                       {"c_prime", json_number(gevrey_fit->c_prime)},
                       {"J", gevrey_fit->J},
                       {"member", gevrey_fit->member},
                       {"little_o_j2", gevrey_fit->little_o_j2},
                       {"series_diverges", gevrey_fit->series_diverges}};
  if (denjoy_evidence) j["denjoy_evidence"] = detail::evidence_json(*denjoy_evidence);
  j["caveats"] = caveats;
  return j;
}

inline std::string Certificate::to_text() const {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "certificate\n";
  if (!input.empty()) os << "  input: " << input << "\n";
  os << "  route: " << route_name(route) << "\n";
  os << "  verdict: " << verdict_name(verdict) << "\n";
  os << "  components: " << dim << "\n";
  if (sup_factor != 1.0) os << "  sup rescaling: " << sup_factor << "\n";
  if (norm_factor != 1.0) os << "  norm rescaling: " << norm_factor << "\n";
  if (bernstein_evidence) {
    os << "\n" << bernstein_evidence->report();
    if (witness) {
      os << "  witnesses at n_k =";
      for (long n : witness->n_k) os << ' ' << n;
      os << "\n    circle: max excess " << witness->circle_max_excess << " over " << witness->circle_samples
         << " points\n    box: max excess " << witness->box_max_excess << " over " << witness->box_samples
         << " points (seed " << witness->seed << ")\n    tolerance " << witness->tolerance << ": "
         << (witness->holds() ? "hold" : "FAIL") << "\n";
    }
  }
  if (scale_table) os << "\n" << report(*scale_table, growth);
  if (!multipole.empty()) {
    os << "\nmultipole bounds c(2) n^{1-1/(N+1)} log t_n\n";
    for (const auto& [n, b] : multipole) os << "  " << std::setw(10) << n << std::setw(22) << b << "\n";
  }
  if (interp_evidence) {
    os << "\ninterpolation evidence: " << interp_note << "\n";
    os << "  " << std::setw(8) << "n" << std::setw(14) << "z0 arg" << std::setw(20) << "sup" << std::setw(20)
       << "S(n,t_n)" << std::setw(16) << "ratio" << "\n";
    for (const auto& r : interp_evidence->rows)
      os << "  " << std::setw(8) << r.n << std::setw(14) << r.z0_arg << std::setw(20) << r.sup_measured
         << std::setw(20) << r.er_bound << std::setw(16) << r.ratio << "\n";
  }
  if (gevrey_fit)
    os << "\ngevrey fit: L_j = j^" << gevrey_fit->p << " (tested j^" << gevrey_fit->p_used << ", C' "
       << gevrey_fit->c_prime << ", J " << gevrey_fit->J << "): " << (gevrey_fit->member ? "member" : "not member")
       << (gevrey_fit->little_o_j2 ? ", o(j^2)" : "") << (gevrey_fit->series_diverges ? ", sum 1/L_j diverges" : "")
       << "\n";
  if (denjoy_evidence) os << "\n" << denjoy_evidence->report();
  os << "\ncaveats\n";
  for (const auto& c : caveats) os << "  - " << c << "\n";
  return os.str();
}

}  // namespace quasipolar
