#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "qabench/analysis.hpp"

using namespace qabench;

TEST_CASE("repetitions") {
  CHECK(repetitions(0.5, 0.9) == doctest::Approx(3.3219).epsilon(1e-4));
  CHECK(repetitions(0.9, 0.9) == doctest::Approx(1.0));
  CHECK(repetitions(0.99, 0.9) == 1.0);  // raw value 0.5 clamps to 1
  CHECK(repetitions(1.0, 0.9) == 1.0);
  CHECK(std::isinf(repetitions(0.0, 0.9)));
  CHECK_THROWS(repetitions(-0.1, 0.9));
  CHECK_THROWS(repetitions(0.5, 1.0));
}

TEST_CASE("tts") {
  CHECK(tts(10, 0.1, 0.9) == doctest::Approx(218.54).epsilon(1e-4));
  CHECK(tts(100, 0.99, 0.9) == doctest::Approx(100.0));
  CHECK(std::isinf(tts(10, 0.0, 0.9)));
}

TEST_CASE("optimal tts on small curves") {
  TtsCurve curve = make_tts_curve({{10, 0.1}, {100, 0.99}}, 0.9, "physical");
  auto [s_opt, t_opt] = optimal_tts(curve);
  CHECK(s_opt == doctest::Approx(100.0));
  CHECK(t_opt == doctest::Approx(100.0));

  TtsCurve single = make_tts_curve({{50, 0.5}}, 0.9, "physical");
  auto [s1, t1] = optimal_tts(single);
  CHECK(s1 == doctest::Approx(tts(50, 0.5, 0.9)));
  CHECK(t1 == 50.0);

  TtsCurve dead = make_tts_curve({{10, 0.0}, {20, 0.0}}, 0.9, "physical");
  CHECK_THROWS(optimal_tts(dead));
  CHECK_THROWS(optimal_tts(TtsCurve{}));
}

TEST_CASE("optimal tts matches an analytic synthetic minimum") {
  // p(T) = 1 - exp(-(T/tau)^2) gives s(T) = max(T, ln(10) tau^2 / T) for the
  // 0.9 target; the analytic minimum sits at T* = tau * sqrt(ln 10).
  const double tau = 100.0;
  const double t_star = tau * std::sqrt(std::log(10.0));
  std::vector<std::pair<double, double>> pts;
  double step = 0.0;
  for (double t = 40; t <= 400; t += 8) {
    pts.push_back({t, 1.0 - std::exp(-(t / tau) * (t / tau))});
    step = 8;
  }
  auto [s_opt, t_opt] = optimal_tts(make_tts_curve(pts, 0.9, "physical"));
  CHECK(std::abs(t_opt - t_star) <= step);
  CHECK(s_opt >= t_star - step);

  // Re-ordering the grid points must not change the result.
  std::vector<std::pair<double, double>> shuffled(pts.rbegin(), pts.rend());
  auto [s2, t2] = optimal_tts(make_tts_curve(shuffled, 0.9, "physical"));
  CHECK(s2 == s_opt);
  CHECK(t2 == t_opt);
}

TEST_CASE("s is non-increasing in p_gs at fixed T") {
  double prev = std::numeric_limits<double>::infinity();
  for (double p = 0.05; p < 1.0; p += 0.05) {
    const double s = tts(100, p, 0.9);
    CHECK(s <= prev);
    CHECK(s >= 100.0);  // r >= 1 after clamping
    prev = s;
  }
}

TEST_CASE("aggregate order statistics") {
  Quartiles q = aggregate({5, 1, 3, 2, 4});
  CHECK(q.median == doctest::Approx(3.0));
  CHECK(q.q1 == doctest::Approx(2.0));
  CHECK(q.q3 == doctest::Approx(4.0));
  Quartiles one = aggregate({7.5});
  CHECK(one.median == 7.5);
  CHECK(one.q1 == 7.5);
  CHECK(one.q3 == 7.5);
  CHECK(one.w5 == 7.5);
  CHECK(one.w95 == 7.5);
  CHECK_THROWS(aggregate({}));
  // permutation invariance
  Quartiles a = aggregate({9, 2, 6, 1, 8, 3});
  Quartiles b = aggregate({1, 2, 3, 6, 8, 9});
  CHECK(a.median == b.median);
  CHECK(a.q1 == b.q1);
  CHECK(a.w95 == b.w95);
}

TEST_CASE("log-log fit") {
  std::vector<double> xs, ys;
  for (double x : {1.0, 10.0, 100.0, 1000.0}) {
    xs.push_back(x);
    ys.push_back(10.0 * x * x);  // log y = 2 log x + 1
  }
  FitResult fit = loglog_fit(xs, ys);
  CHECK(fit.m == doctest::Approx(2.0));
  CHECK(fit.c_fit == doctest::Approx(1.0));
  CHECK(fit.r_corr == doctest::Approx(1.0));

  // Scaling either axis by a positive constant leaves the slope unchanged.
  std::vector<double> ys_scaled;
  for (double y : ys) ys_scaled.push_back(3.7 * y);
  FitResult scaled = loglog_fit(xs, ys_scaled);
  CHECK(scaled.m == doctest::Approx(2.0));
  CHECK(scaled.c_fit == doctest::Approx(1.0 + std::log10(3.7)));

  CHECK_THROWS(loglog_fit({1, 2}, {1, 2}));
  CHECK_THROWS(loglog_fit({1, 2, -3}, {1, 2, 3}));
  CHECK_THROWS(loglog_fit({1, 2, 3}, {1, 2, 0}));
}

TEST_CASE("overhead ratios") {
  auto r = overhead_ratio({{"a", 10.0}, {"b", 20.0}}, {{"a", 10.0}, {"b", 2.0}});
  REQUIRE(r.size() == 2);
  CHECK(r[0].second == doctest::Approx(1.0));
  CHECK(r[1].second == doctest::Approx(10.0));
  CHECK_THROWS(overhead_ratio({{"c", 1.0}}, {{"a", 1.0}}));
  CHECK_THROWS(overhead_ratio({{"a", 1.0}}, {{"a", 1.0}, {"a", 2.0}}));
}

TEST_CASE("correlations") {
  std::vector<double> xs{1, 2, 3, 4, 5};
  std::vector<double> ys{2, 4, 6, 8, 10};
  CHECK(pearson(xs, ys) == doctest::Approx(1.0));
  CHECK(spearman(xs, ys) == doctest::Approx(1.0));
  std::vector<double> zs{10, 8, 6, 4, 2};
  CHECK(spearman(xs, zs) == doctest::Approx(-1.0));
  // Monotone but nonlinear: Spearman saturates, Pearson does not.
  std::vector<double> exp_ys;
  for (double x : xs) exp_ys.push_back(std::exp(x));
  CHECK(spearman(xs, exp_ys) == doctest::Approx(1.0));
  CHECK(pearson(xs, exp_ys) < 1.0);
  // Ties get average ranks.
  CHECK(spearman({1, 1, 2, 3}, {5, 5, 6, 7}) == doctest::Approx(1.0));
  CHECK_THROWS(pearson({1, 1, 1}, {1, 2, 3}));
}
