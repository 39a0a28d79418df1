#pragma once

// Run configuration, function-spec parsing and the command runners behind the
// `quasipolar` executable.

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quasipolar/annulus_potential.hpp"
#include "quasipolar/certify.hpp"

namespace quasipolar {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::string command = "analyze";
  std::string input;  // spec path, empty when everything came from flags
  std::string output_dir = "quasipolar-out";
  std::vector<RuleSpec> components;

  double eps = kDefaultEval;
  std::vector<long> n_list;  // empty: per-command default
  long nmax = 100000;
  std::string notion = "bernstein";
  double gevrey_p = 0.0;  // 0: fitted from the norms
  int n = 16;
  double z0_arg = 0.0;  // 0: pi / (2n)
  double t = 0.0;       // 0: t_n of the normalized norms
  double r = 2.0;
  double a = 2.0;
  bool compare_fd = false;
  int fd_grid = 512;
  int dim = 0;  // 0: number of components
  std::uint64_t seed = kDefaultSeed;
  int grid_density = kDefaultGridDensity;
  int norm_j = 400;
  double denjoy_r_max = 1e6;
  int circle_samples = 4096;
  int box_samples = 10000;
  int z0_samples = 3;

  int effective_dim() const { return dim > 0 ? dim : std::max<int>(1, static_cast<int>(components.size())); }
  nlohmann::json to_json() const;
};

namespace detail {

inline const std::set<std::string> kRunKeys = {
    "command",      "output_dir", "eps",      "n_list",   "nmax",       "notion",         "gevrey_p",
    "n",            "z0_arg",     "t",        "r",        "a",          "compare_fd",     "fd_grid",
    "dim",          "seed",       "grid_density", "norm_j", "denjoy_r_max", "circle_samples", "box_samples",
    "z0_samples",   "components"};

inline const std::set<std::string> kRuleKeys = {"family", "name", "scale", "coefficients", "sequence",
                                                 "values", "max_j", "A",   "rho",          "beta",
                                                 "alpha",  "p",     "c",     "base",         "M0",
                                                 "R"};

inline std::set<std::string> family_params(Family f, const std::string& sequence) {
  switch (f) {
    case Family::Geometric: return {"A", "rho"};
    case Family::ExpPower: return {"A", "beta", "alpha"};
    case Family::LogSquaredExp: return {"A", "beta"};
    case Family::ExplicitList: return {};
    case Family::SyntheticNorms:
      if (sequence == "gevrey-power") return {"p", "c"};
      if (sequence == "gevrey-geometric") return {"base", "c"};
      if (sequence == "log-linear") return {"M0", "R"};
      return {};
  }
  return {};
}

[[noreturn]] inline void config_error(const std::string& what) { throw DomainError("cli", what); }

inline double number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) config_error("'" + key + "' must be a number");
  return v.get<double>();
}

inline long integer(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) config_error("'" + key + "' must be an integer");
  return v.get<long>();
}

inline Complex complex_value(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  config_error("coefficient '" + key + "' must be a number or [re, im]");
}

inline RuleSpec parse_rule(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) config_error(where + " must be an object");
  RuleSpec spec;
  if (!j.contains("family")) config_error(where + ": missing 'family'");
  if (!j["family"].is_string()) config_error(where + ": 'family' must be a string");
  spec.family = family_from_name(j["family"].get<std::string>());
  if (j.contains("sequence")) {
    if (!j["sequence"].is_string()) config_error(where + ": 'sequence' must be a string");
    spec.sequence = j["sequence"].get<std::string>();
  }
  const auto params = family_params(spec.family, spec.sequence);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "family" || key == "sequence" || kRunKeys.count(key)) continue;
    if (!kRuleKeys.count(key)) config_error("unknown key '" + key + "'");
    if (key == "name") {
      if (!it->is_string()) config_error("'name' must be a string");
      spec.name = it->get<std::string>();
    } else if (key == "scale") {
      spec.scale = number(*it, key);
    } else if (key == "max_j") {
      spec.max_j = static_cast<int>(integer(*it, key));
    } else if (key == "coefficients") {
      if (spec.family != Family::ExplicitList) config_error("'coefficients' applies to explicit-list only");
      if (!it->is_object()) config_error("'coefficients' must map k to a value");
      for (auto c = it->begin(); c != it->end(); ++c) {
        std::size_t used = 0;
        long k = 0;
        try {
          k = std::stol(c.key(), &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != c.key().size()) config_error("coefficient index '" + c.key() + "' is not an integer");
        spec.coefficients[k] = complex_value(*c, c.key());
      }
    } else if (key == "values") {
      if (!it->is_array()) config_error("'values' must be an array");
      for (const auto& v : *it) spec.values.push_back(number(v, "values"));
    } else {
      if (!params.count(key))
        config_error("parameter '" + key + "' does not apply to family " + family_name(spec.family) +
                     (spec.sequence.empty() ? "" : " (" + spec.sequence + ")"));
      spec.params[key] = number(*it, key);
    }
  }
  if (spec.family == Family::SyntheticNorms && spec.sequence.empty())
    config_error(where + ": synthetic-norms needs 'sequence'");
  if (spec.max_j < 4) config_error("'max_j' must be >= 4");
  if (!(spec.scale > 0)) config_error("'scale' must be positive");
  make_rule(spec);  // parameter ranges
  return spec;
}

}  // namespace detail

/// Range and consistency checks shared by file and flag input.
inline void validate(const RunConfig& c) {
  using detail::config_error;
  static const std::set<std::string> commands = {"analyze", "scales", "quasitest", "interp", "green", "certify"};
  if (!commands.count(c.command)) config_error("unknown command '" + c.command + "'");
  if (c.notion != "bernstein" && c.notion != "denjoy" && c.notion != "gevrey")
    config_error("notion must be bernstein, denjoy or gevrey");
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    if (c.n_list[i] < 1) config_error("n_list entries must be >= 1");
    if (i > 0 && c.n_list[i] <= c.n_list[i - 1]) config_error("n_list must be strictly increasing");
  }
  if (!(c.eps > 0 && c.eps < 1)) config_error("eps must lie in (0, 1)");
  if (c.nmax < 100) config_error("nmax must be >= 100");
  if (c.n < 1) config_error("n must be >= 1");
  if (c.t != 0.0 && !(c.t > 1)) config_error("t must exceed 1");
  if (!(c.r > 1)) config_error("r must exceed 1");
  if (!(c.a > 1) || c.a > c.r) config_error("a must satisfy 1 < a <= r");
  if (c.fd_grid < 64) config_error("fd_grid must be >= 64");
  if (c.dim < 0) config_error("dim must be >= 1");
  if (c.dim > 0 && c.components.size() > 1 && static_cast<std::size_t>(c.dim) != c.components.size())
    config_error("dim must match the number of components");
  if (c.gevrey_p < 0) config_error("gevrey_p must be positive");
  if (c.grid_density < 4) config_error("grid_density must be >= 4");
  if (c.norm_j < 8) config_error("norm_j must be >= 8");
  if (!(c.denjoy_r_max >= 100)) config_error("denjoy_r_max must be >= 100");
  if (c.circle_samples < 16 || c.box_samples < 1 || c.z0_samples < 1) config_error("sample counts too small");
  if (c.command != "green" && c.components.empty()) config_error("no function specified (need 'family')");
}

inline RunConfig parse_config_json(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) config_error("config must be a JSON object");
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (!kRunKeys.count(k) && !kRuleKeys.count(k) && k != "family" && k != "sequence")
      config_error("unknown key '" + k + "'");
    const auto& v = *it;
    if (k == "command" || k == "output_dir" || k == "notion") {
      if (!v.is_string()) config_error("'" + k + "' must be a string");
      (k == "command" ? c.command : k == "notion" ? c.notion : c.output_dir) = v.get<std::string>();
    } else if (k == "n_list") {
      if (!v.is_array()) config_error("'n_list' must be an array");
      for (const auto& x : v) c.n_list.push_back(integer(x, "n_list"));
    } else if (k == "compare_fd") {
      if (!v.is_boolean()) config_error("'compare_fd' must be true or false");
      c.compare_fd = v.get<bool>();
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) config_error("'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "eps") c.eps = number(v, k);
    else if (k == "nmax") c.nmax = integer(v, k);
    else if (k == "gevrey_p") c.gevrey_p = number(v, k);
    else if (k == "n") c.n = static_cast<int>(integer(v, k));
    else if (k == "z0_arg") c.z0_arg = number(v, k);
    else if (k == "t") c.t = number(v, k);
    else if (k == "r") c.r = number(v, k);
    else if (k == "a") c.a = number(v, k);
    else if (k == "fd_grid") c.fd_grid = static_cast<int>(integer(v, k));
    else if (k == "dim") c.dim = static_cast<int>(integer(v, k));
    else if (k == "grid_density") c.grid_density = static_cast<int>(integer(v, k));
    else if (k == "norm_j") c.norm_j = static_cast<int>(integer(v, k));
    else if (k == "denjoy_r_max") c.denjoy_r_max = number(v, k);
    else if (k == "circle_samples") c.circle_samples = static_cast<int>(integer(v, k));
    else if (k == "box_samples") c.box_samples = static_cast<int>(integer(v, k));
    else if (k == "z0_samples") c.z0_samples = static_cast<int>(integer(v, k));
  }
  if (j.contains("components")) {
    if (j.contains("family")) config_error("give either 'family' or 'components', not both");
    if (!j["components"].is_array() || j["components"].empty()) config_error("'components' must be a non-empty array");
    int i = 0;
    for (const auto& comp : j["components"]) {
      for (auto it = comp.begin(); comp.is_object() && it != comp.end(); ++it)
        if (kRunKeys.count(it.key())) config_error("unknown key '" + it.key() + "' in component");
      c.components.push_back(parse_rule(comp, "component " + std::to_string(i++)));
    }
  } else if (j.contains("family")) {
    c.components.push_back(parse_rule(j, "function spec"));
  } else {
    for (const auto& k : kRuleKeys)
      if (j.contains(k)) config_error("'" + k + "' given without 'family'");
  }
  validate(c);
  return c;
}

/// Reads and validates a JSON run configuration / function spec.
inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::config_error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    detail::config_error("malformed document '" + path + "': " + e.what());
  }
  RunConfig c = parse_config_json(j);
  c.input = path;
  return c;
}

inline nlohmann::json RunConfig::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& s : components) {
    nlohmann::json r = {{"family", family_name(s.family)}, {"scale", s.scale}};
    if (!s.name.empty()) r["name"] = s.name;
    for (const auto& [k, v] : s.params) r[k] = v;
    if (s.family == Family::ExplicitList) {
      nlohmann::json co = nlohmann::json::object();
      for (const auto& [k, v] : s.coefficients) co[std::to_string(k)] = {v.real(), v.imag()};
      r["coefficients"] = co;
    }
    if (s.family == Family::SyntheticNorms) {
      r["sequence"] = s.sequence;
      r["max_j"] = s.max_j;
      if (!s.values.empty()) r["values"] = s.values;
    }
    comps.push_back(r);
  }
  return {{"command", command},         {"input", input},       {"output_dir", output_dir},
          {"components", comps},        {"eps", eps},           {"n_list", n_list},
          {"nmax", nmax},               {"notion", notion},     {"gevrey_p", gevrey_p},
          {"n", n},                     {"z0_arg", z0_arg},     {"t", t},
          {"r", r},                     {"a", a},               {"compare_fd", compare_fd},
          {"fd_grid", fd_grid},         {"dim", effective_dim()}, {"seed", seed},
          {"grid_density", grid_density}, {"norm_j", norm_j},   {"denjoy_r_max", denjoy_r_max},
          {"circle_samples", circle_samples}, {"box_samples", box_samples}, {"z0_samples", z0_samples}};
}

// ---------------------------------------------------------------------------
// Runners

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDegenerate = 2;

namespace detail {

class Outputs {
 public:
  explicit Outputs(const RunConfig& c) : dir_(c.output_dir) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) config_error("cannot write '" + (dir_ / name).string() + "'");
    out << content;
    files_.push_back(name);
  }
  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

inline std::vector<long> quarter_decades(long lo, long hi) {
  std::vector<long> out;
  for (int e = 0;; ++e) {
    long n = std::lround(lo * std::pow(10.0, e / 4.0));
    if (n > hi) break;
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

inline std::vector<long> doubling(long lo, long hi) {
  std::vector<long> out;
  for (long n = lo; n <= hi; n *= 2) out.push_back(n);
  return out;
}

inline std::string norms_csv(const NormSequence& m) {
  std::ostringstream os;
  os << std::setprecision(17) << "j,log_M_j\n";
  for (int j = 0; j <= m.max_j(); ++j) os << j << ',' << m.log_value(j) << '\n';
  return os.str();
}

inline std::vector<CoefficientRule> rules_of(const RunConfig& c) {
  std::vector<CoefficientRule> out;
  for (const auto& s : c.components) out.push_back(make_rule(s));
  return out;
}

inline NormSequence combined_norms(const RunConfig& c) {
  std::vector<NormSequence> seqs;
  for (const auto& r : rules_of(c)) seqs.push_back(norm_sequence(r, c.norm_j));
  return seqs.size() == 1 ? seqs.front() : pointwise_max(seqs);
}

inline CoefficientRule single_rule(const RunConfig& c, const char* what) {
  if (c.components.size() != 1) config_error(std::string(what) + " needs exactly one function");
  return make_rule(c.components.front());
}

inline int run_analyze(const RunConfig& c, Outputs& out, std::ostringstream& sum) {
  NormSequence m = combined_norms(c);
  out.write("norms.csv", norms_csv(m));
  sum << "norms M_0.." << m.max_j() << " (" << (m.source() == NormSource::Synthetic ? "synthetic" : "computed")
      << ", relative error " << m.certified_rel_err() << ")\n";
  sum << "  M_3 = " << m.value(3) << ", normalization factor " << (m.value(3) < 0.5 ? 1.0 : 0.4 / m.value(3)) << "\n";
  sum << "  monotone from j = 1: " << (m.monotone_from_one(1e-9) ? "yes" : "no")
      << ", log-convex: " << (m.log_convex(1e-9) ? "yes" : "no") << "\n";
  if (c.components.size() == 1) {
    CoefficientRule rule = make_rule(c.components.front());
    if (rule.pointwise()) {
      sum << "  truncation index K(eps = " << c.eps << "): " << truncation_index(rule, c.eps) << "\n";
      sum << "  sum |c_k|: " << abs_coefficient_sum(rule) << "\n";
      std::vector<long> ns = c.n_list.empty() ? doubling(1, 64) : c.n_list;
      QuasiVerdict bv = bernstein_verdict(rule, ns);
      out.write("en.csv", en_csv(bv));
    }
  }
  if (m.degenerate()) {
    sum << "classification: degenerate-analytic (trigonometric polynomial)\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

inline int run_scales(const RunConfig& c, Outputs& out, std::ostringstream& sum) {
  double factor = 1.0;
  NormSequence m = normalize(combined_norms(c), &factor);
  std::vector<long> ns = c.n_list.empty() ? quarter_decades(100, c.nmax) : c.n_list;
  ScaleTable table = build_scale_table(m, ns, c.effective_dim(), c.grid_density);
  table.normalization_factor = factor;
  out.write("scales.csv", to_csv(table));
  std::optional<GrowthVerdict> gv;
  if (table.rows.size() >= 4 && table.rows.back().n >= 100 * table.rows.front().n) gv = growth_verdict(table);
  sum << report(table, gv);
  return kExitOk;
}

inline int run_quasitest(const RunConfig& c, Outputs& out, std::ostringstream& sum) {
  if (c.notion == "bernstein") {
    CoefficientRule rule = single_rule(c, "Bernstein test");
    QuasiVerdict v = bernstein_verdict(rule, c.n_list.empty() ? doubling(8, 65536) : c.n_list);
    out.write("en.csv", en_csv(v));
    sum << v.report();
    return kExitOk;
  }
  double factor = 1.0;
  NormSequence m = normalize(combined_norms(c), &factor);
  if (m.degenerate()) throw DegenerateError("quasi_tests", "bounded norm growth (trigonometric polynomial)");
  if (c.notion == "denjoy") {
    double rmax = std::min(c.denjoy_r_max, m.reach());
    QuasiVerdict v = denjoy_carleman(m, rmax);
    out.write("denjoy.csv", v.evidence.to_csv());
    sum << v.report();
    return kExitOk;
  }
  GevreyFit fit = detail::fit_gevrey(m);
  const double p = c.gevrey_p > 0 ? c.gevrey_p : fit.p_used;
  GevreyMembership mem = gevrey_membership(m, GevreySequence::power(p), m.max_j());
  QuasiVerdict series = gevrey_series(GevreySequence::power(p), 1000000);
  out.write("gevrey.csv", series.evidence.to_csv());
  sum << "gevrey class L_j = j^" << p << (c.gevrey_p > 0 ? " (given)" : " (fitted)") << "\n";
  sum << "  membership: " << (mem.member ? "yes" : "no") << ", C' = " << mem.c_prime << "; " << mem.note << "\n";
  sum << "  quasianalytic (sum 1/L_j diverges): " << answer_name(series.verdict) << "\n";
  sum << series.report();
  return kExitOk;
}

inline int run_interp(const RunConfig& c, Outputs& out, std::ostringstream& sum) {
  CoefficientRule rule = single_rule(c, "interpolation");
  rule.require_pointwise("interpolation");
  const int n = c.n;
  const double phi = c.z0_arg != 0.0 ? c.z0_arg : kPi / (2.0 * n);
  Interpolant L = build(rule, n, detail::unit(phi), c.eps);
  NormSequence m = norm_sequence(rule, c.norm_j);
  const bool normalized = m.value(3) < 0.5;
  double t = c.t;
  if (t == 0.0) {
    if (m.degenerate()) config_error("trigonometric polynomial: give t explicitly");
    t = std::exp(log_tn(normalize(m), n, c.grid_density).value);
  }
  AnnulusSup s = annulus_sup(L, t);
  std::ostringstream coeffs;
  coeffs << std::setprecision(17) << "k,re,im\n";
  for (int r = n; r >= 1; --r) coeffs << -r << ',' << L.b[r].real() << ',' << L.b[r].imag() << '\n';
  for (int r = 0; r < n; ++r) coeffs << r << ',' << L.a[r].real() << ',' << L.a[r].imag() << '\n';
  coeffs << "gamma," << L.gamma.real() << ',' << L.gamma.imag() << '\n';
  out.write("interp_coeffs.csv", coeffs.str());
  const double resid = node_residual(L, rule, c.eps);
  const double dft = dft_consistency(rule, n, c.eps);
  const double bound = normalized && !m.degenerate() ? er_bound(m, n, t) : std::numeric_limits<double>::quiet_NaN();
  std::ostringstream row;
  row << std::setprecision(17) << "n,z0_arg,t,node_residual,dft_consistency,annulus_sup,er_bound,z0n_gap\n"
      << n << ',' << phi << ',' << t << ',' << resid << ',' << dft << ',' << s.sup << ',' << bound << ','
      << L.z0n_gap << '\n';
  out.write("interp.csv", row.str());
  sum << std::setprecision(10) << "interpolant n = " << n << ", z0 = e^{i " << phi << "}\n"
      << "  node residual " << resid << ", aliasing consistency " << dft << "\n"
      << "  sup over A(" << t << ") = " << s.sup << " (" << s.samples << " samples per circle"
      << (s.converged ? "" : ", not converged") << ")\n";
  if (normalized)
    sum << "  bound S(n, t) = " << bound << "\n";
  else
    sum << "  bound S(n, t) applies to M_3 < 1/2 only; rule has M_3 = " << m.value(3) << "\n";
  if (L.warning) sum << "  warning: " << *L.warning << "\n";
  return kExitOk;
}

inline int run_green(const RunConfig& c, Outputs& out, std::ostringstream& sum) {
  AnnulusSpec spec(c.r);
  CircleSup s = measure_circle_sup(spec, 64, c.eps > 1e-14 ? 1e-14 : c.eps);
  std::ostringstream circle;
  circle << std::setprecision(17) << "theta,g\n";
  const int m = 720;
  for (int i = 1; i < m; ++i) {
    double th = 2.0 * kPi * i / m;
    circle << th << ',' << green(std::polar(1.0, th), spec).value << '\n';
  }
  out.write("green_circle.csv", circle.str());
  const double bound = sup_circle_bound(spec, c.a);
  sum << std::setprecision(10) << "annulus 1/" << c.r << " < |w| < " << c.r << ", pole at w = 1\n"
      << "  sup over |w| = 1: " << s.sup << " at arg " << s.argmax << " (" << s.samples << " samples)\n"
      << "  bound c(a) log r with a = " << c.a << ": " << bound << (s.sup <= bound ? " (holds)" : " (VIOLATED)")
      << "\n";
  if (c.compare_fd) {
    FdField f = fd_oracle(spec, c.fd_grid, c.fd_grid);
    std::ostringstream cmp;
    cmp << std::setprecision(17) << "u,theta,g_fd,g_series,abs_diff\n";
    double worst = 0.0;
    long count = 0;
    for (int i = 1; i < f.n_rad; ++i)
      for (int j = 0; j < f.n_ang; ++j) {
        Complex w = f.point(i, j);
        if (std::abs(w - 1.0) < 0.1) continue;
        double g = green(w, spec).value, d = std::abs(f.at(i, j) - g);
        worst = std::max(worst, d);
        ++count;
        cmp << f.u(i) << ',' << f.theta(j) << ',' << f.at(i, j) << ',' << g << ',' << d << '\n';
      }
    out.write("fd_compare.csv", cmp.str());
    sum << "  finite differences on " << c.fd_grid << "^2 (CG " << f.iterations << " iterations, residual "
        << f.residual << "): max deviation " << worst << " over " << count << " points with |w - 1| >= 0.1\n";
  }
  return kExitOk;
}

inline int run_certify(const RunConfig& c, Outputs& out, std::ostringstream& sum) {
  CertifyOptions opt;
  if (!c.n_list.empty()) opt.scale_n = c.n_list;
  opt.seed = c.seed;
  opt.grid_density = c.grid_density;
  opt.max_j = c.norm_j;
  opt.denjoy_r_max = c.denjoy_r_max;
  opt.circle_samples = c.circle_samples;
  opt.box_samples = c.box_samples;
  opt.z0_samples = c.z0_samples;
  std::vector<CoefficientRule> rules = rules_of(c);
  if (rules.size() == 1 && c.effective_dim() > 1) rules.assign(c.effective_dim(), rules.front());
  Certificate cert = certify(rules, opt);
  cert.input = c.input;
  out.write("certificate.txt", cert.to_text());
  out.write("certificate.json", cert.to_json().dump(2) + "\n");
  if (cert.scale_table) out.write("scales.csv", to_csv(*cert.scale_table));
  if (cert.bernstein_evidence) out.write("en.csv", en_csv(*cert.bernstein_evidence));
  if (cert.interp_evidence) out.write("interp_scan.csv", cert.interp_evidence->to_csv());
  if (cert.denjoy_evidence) out.write("denjoy.csv", cert.denjoy_evidence->evidence.to_csv());
  sum << "route: " << route_name(cert.route) << "\nverdict: " << verdict_name(cert.verdict) << "\n";
  return cert.verdict == Verdict::DegenerateAnalytic ? kExitDegenerate : kExitOk;
}

}  // namespace detail

/// Runs one command, writing artifacts, manifest.json and summary.txt into
/// the output directory. Returns the process exit status.
inline int run(const RunConfig& c, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  int status = kExitOk;
  std::ostringstream sum;
  std::string error;
  std::optional<detail::Outputs> out;
  try {
    validate(c);
    out.emplace(c);
    if (c.command == "analyze") status = detail::run_analyze(c, *out, sum);
    else if (c.command == "scales") status = detail::run_scales(c, *out, sum);
    else if (c.command == "quasitest") status = detail::run_quasitest(c, *out, sum);
    else if (c.command == "interp") status = detail::run_interp(c, *out, sum);
    else if (c.command == "green") status = detail::run_green(c, *out, sum);
    else status = detail::run_certify(c, *out, sum);
  } catch (const DegenerateError& e) {
    status = kExitDegenerate;
    sum << "classification: degenerate-analytic\n  " << e.what() << "\n";
  } catch (const std::exception& e) {
    status = kExitError;
    error = e.what();
  }
  if (!out) {
    err << "quasipolar: " << error << "\n";
    return kExitError;
  }
  nlohmann::json manifest = {{"version", kVersion}, {"config", c.to_json()}, {"exit_status", status},
                             {"outputs", out->files()}};
  if (!error.empty()) manifest["error"] = error;
  try {
    out->write("summary.txt", sum.str());
    out->write("manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "quasipolar: " << e.what() << "\n";
    return kExitError;
  }
  if (!error.empty()) {
    err << "quasipolar: " << error << "\n";
    return kExitError;
  }
  log << sum.str();
  return status;
}

}  // namespace quasipolar
