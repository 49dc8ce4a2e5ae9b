#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "qabench/model.hpp"
#include "qabench/oracle.hpp"
#include "qabench/sqa.hpp"

using namespace qabench;

TEST_CASE("gamma schedule") {
  SqaParams params;
  CHECK(gamma_schedule(0.0, params) == doctest::Approx(0.5));
  CHECK(gamma_schedule(1.0, params) == doctest::Approx(0.001));
  CHECK(gamma_schedule(0.5, params) == doctest::Approx(0.12575));
  CHECK_THROWS(gamma_schedule(-0.1, params));
  CHECK_THROWS(gamma_schedule(1.1, params));
  // Steep edge at the beginning: largest decrease over the first interval.
  double prev = gamma_schedule(0.0, params);
  double first_drop = prev - gamma_schedule(0.1, params);
  for (int k = 1; k < 10; ++k) {
    double next = gamma_schedule((k + 1) / 10.0, params);
    double cur = gamma_schedule(k / 10.0, params);
    CHECK(first_drop >= cur - next);
  }
}

TEST_CASE("slice coupling") {
  CHECK(slice_coupling(1024, 0.5, 1024) ==
        doctest::Approx(0.5 * std::log(1.0 / std::tanh(0.5))).epsilon(1e-12));
  CHECK(slice_coupling(1024, 0.5, 1024) == doctest::Approx(0.3860).epsilon(1e-3));
  CHECK(slice_coupling(1024, 0.001, 1024) == doctest::Approx(3.4539).epsilon(1e-3));
  double prev = slice_coupling(1024, 0.001, 1024);
  for (double g = 0.002; g <= 0.5; g += 0.001) {
    double cur = slice_coupling(1024, g, 1024);
    CHECK(cur < prev);  // strictly decreasing in gamma
    prev = cur;
  }
}

TEST_CASE("parameter validation") {
  SqaParams p;
  p.sweeps = 10;
  CHECK_NOTHROW(p.validate());
  SqaParams bad = p;
  bad.slices = 1;
  CHECK_THROWS(bad.validate());
  bad = p;
  bad.gammaf = 0.6;
  CHECK_THROWS(bad.validate());
  bad = p;
  bad.sweeps = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("two-spin ferromagnet is solved at long anneal times") {
  LogicalProblem two(2, {{0, 1, -1.0}});
  const double gs = brute_force_gs(two).energy;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SqaParams params;
    params.slices = 64;
    params.beta = 64;
    params.sweeps = 2000;
    params.seed = seed;
    mean += run_sqa(two, params, gs).gs_hit_fraction;
  }
  CHECK(mean / 20.0 >= 0.95);
}

TEST_CASE("single-sweep boundary case completes") {
  LogicalProblem p = generate_maxcut(6, 0.5, 2);
  SqaParams params;
  params.slices = 8;
  params.beta = 8;
  params.sweeps = 1;
  params.seed = 3;
  SqaResult r = run_sqa(p, params, brute_force_gs(p).energy);
  CHECK(r.gs_hit_fraction >= 0.0);
  CHECK(r.gs_hit_fraction <= 1.0);
  CHECK(r.sweeps == 1);
}

TEST_CASE("determinism: identical inputs give bit-identical results") {
  LogicalProblem p = generate_gaussian_sk(7, 0.0, 1.0, 5);
  SqaParams params;
  params.slices = 16;
  params.beta = 16;
  params.sweeps = 300;
  params.seed = 77;
  params.keep_configs = true;
  const double gs = brute_force_gs(p).energy;
  SqaResult a = run_sqa(p, params, gs);
  SqaResult b = run_sqa(p, params, gs);
  CHECK(a.gs_hit_fraction == b.gs_hit_fraction);
  REQUIRE(a.slice_energies == b.slice_energies);
  REQUIRE(a.final_slices == b.final_slices);
}

TEST_CASE("success probability is the mean over repetitions") {
  SqaResult a, b;
  a.gs_hit_fraction = 0.2;
  b.gs_hit_fraction = 0.4;
  CHECK(success_probability({a, b}) == doctest::Approx(0.3));
  a.gs_hit_fraction = 0.0;
  b.gs_hit_fraction = 0.0;
  CHECK(success_probability({a, b}) == 0.0);
  SqaResult c;
  c.gs_hit_fraction = 0.7;
  CHECK(success_probability({c}) == doctest::Approx(0.7));
  CHECK_THROWS(success_probability({}));
}

TEST_CASE("audit mode validates incremental energies") {
  LogicalProblem p = generate_maxcut(8, 0.5, 4);
  SqaParams params;
  params.slices = 16;
  params.beta = 16;
  params.sweeps = 2000;
  params.seed = 9;
  params.audit = true;
  CHECK_NOTHROW(run_sqa(p, params, brute_force_gs(p).energy));
}

TEST_CASE("detailed balance on a two-spin, two-slice system") {
  // Fixed gamma, fixed beta: the kernel's stationary distribution over the
  // 2^(2*2) path states must match exp(-S) to within 1% per state.
  LogicalProblem two(2, {{0, 1, -1.0}});
  PhysicalProblem phys;
  phys.num_spins = 2;
  phys.two_local.push_back({0, 1, -1.0});

  SqaParams params;
  params.slices = 2;
  params.beta = 2.0;
  params.sweeps = 1;
  params.seed = 12345;
  const double gamma = 0.7;

  SqaEngine engine(phys, params);
  const double w = params.beta / params.slices;
  const double jp = slice_coupling(params.beta, gamma, params.slices);

  auto action = [&](const std::array<int, 4>& s) {
    // s = (spin0 slice0, spin1 slice0, spin0 slice1, spin1 slice1)
    const double e0 = -1.0 * s[0] * s[1];
    const double e1 = -1.0 * s[2] * s[3];
    const double bonds = 2.0 * (s[0] * s[2] + s[1] * s[3]);  // periodic, M=2
    return w * (e0 + e1) - jp * bonds;
  };

  std::map<int, double> exact;
  double z = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    std::array<int, 4> s;
    for (int b = 0; b < 4; ++b) s[b] = (mask >> b) & 1 ? 1 : -1;
    exact[mask] = std::exp(-action(s));
    z += exact[mask];
  }
  for (auto& [mask, wgt] : exact) wgt /= z;

  std::map<int, long> histogram;
  const long sweeps = 1000000;
  for (long t = 0; t < sweeps; ++t) {
    engine.sweep(gamma);
    int mask = 0;
    const SpinConfig s0 = engine.slice(0), s1 = engine.slice(1);
    if (s0[0] > 0) mask |= 1;
    if (s0[1] > 0) mask |= 2;
    if (s1[0] > 0) mask |= 4;
    if (s1[1] > 0) mask |= 8;
    histogram[mask]++;
  }
  for (int mask = 0; mask < 16; ++mask) {
    const double observed = static_cast<double>(histogram[mask]) / sweeps;
    CHECK(std::abs(observed - exact[mask]) < 0.01);
  }
}

TEST_CASE("engine rejects invalid inputs before construction") {
  PhysicalProblem phys;
  phys.num_spins = 2;
  phys.two_local.push_back({0, 1, -1.0});
  SqaParams bad;
  bad.slices = 0;
  bad.sweeps = 10;
  CHECK_THROWS(SqaEngine(phys, bad));
}
