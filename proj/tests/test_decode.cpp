#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qabench/decode.hpp"
#include "qabench/embed.hpp"
#include "qabench/model.hpp"
#include "qabench/oracle.hpp"
#include "qabench/rng.hpp"

using namespace qabench;

namespace {

bool equal_up_to_global_flip(const SpinConfig& a, const SpinConfig& b) {
  if (a.size() != b.size()) return false;
  bool same = true, flipped = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) same = false;
    if (a[i] != -b[i]) flipped = false;
  }
  return same || flipped;
}

SpinConfig random_config(int n, Rng& rng) {
  SpinConfig s(n);
  for (int i = 0; i < n; ++i) s[i] = rng.next_u64() & 1 ? 1 : -1;
  return s;
}

}  // namespace

TEST_CASE("majority vote basics") {
  LogicalProblem p = generate_maxcut(4, 1.0, 1);
  auto [phys, map] = embed_square(p, 0.0, 1.1);
  // n=4: chains of length 3.
  SpinConfig physical(phys.num_spins, 1);
  physical[map.chains[0][2]] = -1;  // 2:1 majority stays +1
  SpinConfig logical = majority_vote(physical, map);
  CHECK(logical[0] == 1);

  auto [cphys, cmap] = embed_chimera(p, 4, 0.0, 1.1);
  SpinConfig tied(cphys.num_spins, 1);
  tied[cmap.chains[2][0]] = -1;  // chains of length 2: tie breaks to +1
  tied[cmap.chains[2][1]] = 1;
  CHECK(majority_vote(tied, cmap)[2] == 1);

  auto [pphys, pmap] = embed_paqo(p, 1.0, 1.1);
  CHECK_THROWS(majority_vote(SpinConfig(pphys.num_spins, 1), pmap));
}

TEST_CASE("round-trip decoding for all schemes") {
  for (int n : {3, 5, 8, 10}) {
    LogicalProblem p = generate_gaussian_sk(n, 0.0, 1.0, 100 + n);
    auto [sq, sq_map] = embed_square(p, 0.0, 1.1);
    auto [ch, ch_map] = embed_chimera(p, 4, 0.0, 1.1);
    auto [pq, pq_map] = embed_paqo(p, n * n / 50.0, 1.1);
    for (int mask = 0; mask < (1 << n); ++mask) {
      SpinConfig s(n);
      for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? 1 : -1;
      REQUIRE(decode(embed_config(sq_map, s), sq_map) == s);
      REQUIRE(decode(embed_config(ch_map, s), ch_map) == s);
      // The parity decoder fixes the gauge sigma_0 = +1.
      REQUIRE(equal_up_to_global_flip(decode(embed_config(pq_map, s), pq_map), s));
    }
  }
}

TEST_CASE("direct decode is the identity") {
  EmbeddingMap map;
  map.scheme = Scheme::direct;
  map.n = 5;
  SpinConfig s{1, -1, 1, 1, -1};
  CHECK(decode(s, map) == s);
}

TEST_CASE("bp corrects every single bit flip") {
  Rng rng(2024);
  for (int n = 4; n <= 8; ++n) {
    LogicalProblem p = generate_gaussian_sk(n, 0.0, 1.0, 200 + n);
    auto [phys, map] = embed_paqo(p, n * n / 50.0, 1.1);
    for (int trial = 0; trial < 20; ++trial) {
      const SpinConfig logical = random_config(n, rng);
      const SpinConfig codeword = embed_config(map, logical);
      for (int flip = 0; flip < phys.num_spins; ++flip) {
        SpinConfig noisy = codeword;
        noisy[flip] = static_cast<std::int8_t>(-noisy[flip]);
        REQUIRE(equal_up_to_global_flip(bp_decode(noisy, map), logical));
      }
    }
  }
}

TEST_CASE("bp agrees with first-row reconstruction on unbroken configs") {
  const int n = 7;
  LogicalProblem p = generate_maxcut(n, 0.5, 9);
  auto [phys, map] = embed_paqo(p, n * n / 50.0, 1.1);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const SpinConfig logical = random_config(n, rng);
    const SpinConfig codeword = embed_config(map, logical);
    SpinConfig first_row(n, 1);
    for (int j = 1; j < n; ++j) first_row[j] = codeword[map.pair_index.at({0, j})];
    CHECK(bp_decode(codeword, map) == first_row);
  }
}

TEST_CASE("documented failure: single broken constraint misleads bp") {
  // Three-group frustration instance; flipping the A-C block of alphas
  // violates exactly the designated tile and bp cannot undo a coherent
  // block flip. Unequal group sizes break the C-flip degeneracy, so the
  // misdecoded state is strictly excited.
  LogicalProblem abc = build_abc_instance(2, 2, 3);
  auto [phys, map] = embed_paqo(abc, 49 / 50.0, 1.1);
  const GroundState gs = brute_force_gs(abc);
  const SpinConfig codeword = embed_config(map, gs.config);
  SpinConfig broken = codeword;
  for (int i : {0, 1})
    for (int j : {4, 5, 6}) {
      const int idx = map.pair_index.at({i, j});
      broken[idx] = static_cast<std::int8_t>(-broken[idx]);
    }
  ConstraintReport report = verify_constraints(broken, map, phys);
  REQUIRE(report.violated_plaquettes.size() == 1);
  const SpinConfig decoded = bp_decode(broken, map);
  CHECK(energy(abc, decoded) > gs.energy + energy_tolerance(gs.energy));
}

TEST_CASE("constraint verification") {
  LogicalProblem p = generate_maxcut(6, 0.5, 3);
  auto [phys, map] = embed_square(p, 0.0, 1.1);
  SpinConfig good = embed_config(map, {1, -1, 1, 1, -1, -1});
  ConstraintReport clean = verify_constraints(good, map, phys);
  CHECK(clean.broken_chains.empty());
  CHECK(clean.violated_plaquettes.empty());

  SpinConfig damaged = good;
  damaged[map.chains[3][1]] = static_cast<std::int8_t>(-damaged[map.chains[3][1]]);
  ConstraintReport rep = verify_constraints(damaged, map, phys);
  REQUIRE(rep.broken_chains.size() == 1);
  CHECK(rep.broken_chains[0] == 3);
}

TEST_CASE("decoders are pure") {
  const int n = 6;
  LogicalProblem p = generate_gaussian_sk(n, 0.0, 1.0, 77);
  auto [phys, map] = embed_paqo(p, n * n / 50.0, 1.1);
  Rng rng(8);
  const SpinConfig noisy = random_config(phys.num_spins, rng);
  CHECK(bp_decode(noisy, map) == bp_decode(noisy, map));
}
