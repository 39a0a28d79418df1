#include <gtest/gtest.h>

#include <cmath>

#include "quasipolar/circle_functions.hpp"
#include "quasipolar/growth_scales.hpp"

using namespace quasipolar;

namespace {

// -log tau at s = log r by direct max over j (no hull).
double brute_neg_log_tau(const std::vector<double>& logm, double s, int shift = 0) {
  double best = kNegInf;
  for (int j = shift; j < static_cast<int>(logm.size()); ++j) best = std::max(best, (j - shift) * s - logm[j]);
  return best;
}

// Exact min over s in [0, log n] of (-log tau(e^s) - w s) e^{-s}: candidates are
// endpoints, pairwise tie points and stationary points of each piece.
double exact_scale(const std::vector<double>& logm, long n, int shift, double w) {
  const double smax = std::log(static_cast<double>(n));
  const int J = static_cast<int>(logm.size()) - 1;
  std::vector<double> cand = {0.0, smax};
  for (int j = shift; j <= J; ++j) {
    int p = j - shift;
    if (p != w) cand.push_back(1.0 + logm[j] / (p - w));
    for (int k = j + 1; k <= J; ++k) cand.push_back((logm[k] - logm[j]) / (k - j));
  }
  double best = kInf;
  for (double s : cand) {
    if (!(s >= 0 && s <= smax)) continue;
    best = std::min(best, (brute_neg_log_tau(logm, s, shift) - w * s) * std::exp(-s));
  }
  return best;
}

std::vector<double> logs_of(const NormSequence& m) { return m.log_values(); }

NormSequence normalized(const NormSequence& m) { return normalize(m); }

std::vector<NormSequence> families() {
  return {normalized(synthetic::gevrey_power(1.5, 200)), normalized(synthetic::gevrey_power(2.0, 200)),
          normalized(synthetic::gevrey_geometric(2.0, 60)), normalized(synthetic::factorial(300)),
          normalize(norm_sequence(CoefficientRule::exp_power(1, 1, 2.0 / 3.0), 80))};
}

}  // namespace

TEST(Tau, FactorialAtFive) {
  auto m = synthetic::factorial(20);
  TauResult t = tau(m, 5.0);
  EXPECT_NEAR(t.value(), 24.0 / 625.0, 1e-15);
  EXPECT_NEAR(t.value(), 0.0384, 1e-12);
  EXPECT_TRUE(t.argmin == 4 || t.argmin == 5);
  EXPECT_FALSE(t.truncated);
}

TEST(Tau, ConstantSequenceIsDegenerate) {
  auto m = NormSequence::from_values(std::vector<double>(20, 1.0));
  TauResult t = tau(m, 2.0);
  EXPECT_TRUE(t.degenerate);
  EXPECT_EQ(t.value(), 0.0);
  EXPECT_THROW(build_scale_table(m.scaled(0.1), {10, 100}), DegenerateError);
}

TEST(Tau, FirstRatioRule) {
  auto m = synthetic::factorial(20);  // M_1/M_0 = 1
  EXPECT_EQ(tau(m, 1.0).value(), 1.0);
  EXPECT_EQ(tau(m, 1.0).argmin, 0);
  auto g = synthetic::gevrey_power(1.5, 30, 3.0);  // M_1/M_0 = 3
  EXPECT_EQ(tau(g, 2.5).value(), 1.0);
}

TEST(Tau, TruncatedBeyondReach) {
  auto m = synthetic::factorial(10);
  EXPECT_TRUE(tau(m, 100.0).truncated);
  EXPECT_FALSE(tau(m, 3.0).truncated);
}

TEST(ShiftedTau, PowerSequenceAtFour) {
  auto m = synthetic::gevrey_power(1.0, 40);  // j^j
  double brute = kInf;
  for (int s = 0; s <= 30; ++s) brute = std::min(brute, std::pow(s + 3.0, s + 3.0) / std::pow(4.0, s));
  EXPECT_NEAR(shifted_tau(m, 4.0).value(), brute, 1e-12 * brute);
}

TEST(ShiftedTau, NormalizedBelowHalf) {
  for (const auto& m : families())
    for (double r : {1.0, 3.0, 50.0}) EXPECT_LT(shifted_tau(m, r).value(), 0.5);
}

TEST(LogTn, EndpointN1) {
  auto m = normalized(synthetic::gevrey_power(1.5, 50));
  EXPECT_NEAR(log_tn(m, 1).value, -m.log_value(0), 1e-15);
  EXPECT_NEAR(log_theta(m, 1).value, -m.log_value(3), 1e-15);
}

TEST(LogTn, AgainstExactPiecewiseMinimum) {
  for (const auto& m : families()) {
    auto logm = logs_of(m);
    for (long n : {2L, 7L, 30L, 100L, 1000L}) {
      double t = exact_scale(logm, n, 0, 3.0);
      double th = exact_scale(logm, n, 3, 0.0);
      EXPECT_NEAR(log_tn(m, n).value, t, 1e-10 * std::abs(t)) << "n=" << n;
      EXPECT_NEAR(log_theta(m, n).value, th, 1e-10 * std::abs(th)) << "n=" << n;
    }
  }
}

TEST(LogTn, GevreyThreeHalvesAsymptote) {
  auto m = normalized(synthetic::gevrey_power(1.5, 1024));
  double v = log_tn(m, 10000).value;
  double asym = 3.0 / (2.0 * std::exp(1.0)) * std::pow(10.0, -4.0 / 3.0);
  EXPECT_NEAR(v, asym, 0.25 * asym);
  double th = log_theta(m, 10000).value;
  EXPECT_GT(th, 0.0);
  EXPECT_NEAR(th, asym, 0.25 * asym);
}

TEST(LogTn, GridDoublingStable) {
  for (const auto& m : families()) {
    for (long n : {50L, 5000L}) {
      double a = log_tn(m, n, 64).value, b = log_tn(m, n, 128).value;
      EXPECT_NEAR(a, b, 1e-6 * std::abs(b));
    }
  }
}

TEST(Invariants, TauMonotoneAndLogConvex) {
  for (const auto& m : families()) {
    double prev = kInf;
    const double hi = std::log(m.reach());
    for (int i = 0; i <= 400; ++i) {
      double s = hi * i / 400.0;
      double v = tau(m, std::exp(s)).log_tau;
      EXPECT_LE(v, prev + 1e-12);
      prev = v;
      if (i >= 1 && i < 400) {
        double h = hi / 400.0;
        double lo = -tau(m, std::exp(s - h)).log_tau, up = -tau(m, std::exp(s + h)).log_tau;
        EXPECT_LE(-v, 0.5 * (lo + up) + 1e-9 * (1 + std::abs(v)));
      }
    }
  }
}

TEST(Invariants, ScaleSequencesOrdered) {
  for (const auto& m : families()) {
    double prev = kInf;
    for (long n = 1; n <= 300; ++n) {
      double t = log_tn(m, n).value, th = log_theta(m, n).value;
      EXPECT_LE(t, prev + 1e-12) << n;
      EXPECT_GE(t, th - 1e-12) << n;
      EXPECT_GT(th, 0.0) << n;
      prev = t;
    }
  }
}

TEST(Invariants, ShiftIdentityBeyondThirdIndex) {
  for (const auto& m : families()) {
    for (double r = 1.0; r < m.reach(); r *= 1.37) {
      TauResult t = tau(m, r);
      if (t.argmin <= 3) continue;
      double lhs = 3 * std::log(r) + t.log_tau;
      EXPECT_NEAR(lhs, shifted_tau(m, r).log_tau, 1e-9 * (1 + std::abs(lhs)));
    }
  }
}

TEST(ScaleTable, ColumnsAndCsv) {
  auto m = normalized(synthetic::gevrey_power(1.5, 400));
  auto table = build_scale_table(m, {1, 10, 100});
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_NEAR(table.rows[0].log_tn, log_tn(m, 1).value, 1e-15);
  for (const auto& r : table.rows) EXPECT_DOUBLE_EQ(r.sqrtn_log_tn, std::sqrt(double(r.n)) * r.log_tn);
  std::string csv = to_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,log_tn,log_theta_n,sqrtn_log_tn,minimizing_r");
  EXPECT_THROW(build_scale_table(synthetic::gevrey_power(1.5, 40), {10}), DomainError);
}

TEST(ScaleTable, VectorDiagnosticExponent) {
  auto m = normalized(synthetic::gevrey_power(1.5, 400));
  auto table = build_scale_table(m, {10, 1000}, 2);
  EXPECT_NEAR(table.diagnostic_exponent(), 2.0 / 3.0, 1e-15);
  for (const auto& r : table.rows) EXPECT_NEAR(r.diagnostic, std::pow(double(r.n), 2.0 / 3.0) * r.log_tn, 1e-14 * r.diagnostic);
}

TEST(GrowthVerdict, Examples) {
  std::vector<long> ns = {100, 1000, 10000, 100000};
  auto div = build_scale_table(normalized(synthetic::gevrey_power(1.5, 2048)), ns);
  for (std::size_t i = 1; i < div.rows.size(); ++i) EXPECT_GT(div.rows[i].sqrtn_log_tn, div.rows[i - 1].sqrtn_log_tn);
  auto gv = growth_verdict(div);
  EXPECT_EQ(gv.verdict, Growth::Diverges);
  // pre-asymptotic over 10^3..10^5; the limit slope is 1/6
  EXPECT_GT(gv.slope, 1.0 / 6.0);
  EXPECT_LT(gv.slope, 0.5);
  EXPECT_FALSE(gv.caveat.empty());

  auto bounded = build_scale_table(normalized(synthetic::gevrey_geometric(2.0, 200)), ns);
  EXPECT_EQ(growth_verdict(bounded).verdict, Growth::Bounded);

  ScaleTable flat;
  for (long n : ns) flat.rows.push_back({n, 0.1 / std::sqrt(double(n)), 0.0, 0.1, 1.0, 0.1, false});
  auto fv = growth_verdict(flat);
  EXPECT_EQ(fv.verdict, Growth::Inconclusive);
  EXPECT_NEAR(fv.slope, 0.0, 1e-12);
}

TEST(GrowthVerdict, BoundaryFamilyReadsBounded) {
  std::vector<long> ns;
  for (double e = 2; e <= 5.01; e += 0.25) ns.push_back(std::lround(std::pow(10.0, e)));
  auto t = build_scale_table(normalized(synthetic::gevrey_power(2.0, 3000)), ns);
  auto gv = growth_verdict(t);
  EXPECT_EQ(gv.verdict, Growth::Bounded);
  EXPECT_GT(gv.slope, 0.05);  // a slope-only reading would call this divergent
  EXPECT_LT(gv.decade_ratio, 0.6);
  // j^{3j/2} on the same grid keeps growing increments
  auto d = growth_verdict(build_scale_table(normalized(synthetic::gevrey_power(1.5, 3000)), ns));
  EXPECT_EQ(d.verdict, Growth::Diverges);
  EXPECT_GE(d.decade_ratio, 0.9);
}

TEST(GrowthVerdict, TooFewRows) {
  auto m = normalized(synthetic::gevrey_power(1.5, 400));
  EXPECT_THROW(growth_verdict(build_scale_table(m, {10, 100, 1000})), DomainError);
  EXPECT_THROW(growth_verdict(build_scale_table(m, {10, 12, 14, 16})), DomainError);
}
