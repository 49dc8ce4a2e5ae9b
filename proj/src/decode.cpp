#include "qabench/decode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qabench {

SpinConfig majority_vote(const SpinConfig& physical, const EmbeddingMap& map) {
  if (map.scheme != Scheme::square && map.scheme != Scheme::chimera)
    throw std::invalid_argument("majority_vote: map is not a chain embedding");
  SpinConfig logical(map.n);
  for (int i = 0; i < map.n; ++i) {
    int sum = 0;
    for (int s : map.chains[i]) sum += physical.at(s);
    logical[i] = sum >= 0 ? 1 : -1;
  }
  return logical;
}

SpinConfig bp_decode(const SpinConfig& physical, const EmbeddingMap& map,
                     const BpParams& params) {
  if (map.scheme != Scheme::paqo)
    throw std::invalid_argument("bp_decode: map is not a parity embedding");
  const int n = map.n;
  const int num_vars = n * (n - 1) / 2;
  if (static_cast<int>(physical.size()) < num_vars)
    throw std::invalid_argument("bp_decode: physical config too short");

  // Checks: all three-variable loops (i, j, k). Each touches the three spins
  // alpha_ij, alpha_ik, alpha_jk.
  std::vector<std::array<int, 3>> checks;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        checks.push_back({map.pair_index.at({i, j}), map.pair_index.at({i, k}),
                          map.pair_index.at({j, k})});

  const double prior_mag = std::log((1.0 - params.prior_flip_prob) /
                                    params.prior_flip_prob);
  std::vector<double> prior(num_vars);
  for (int v = 0; v < num_vars; ++v) prior[v] = prior_mag * physical[v];

  // LLR convention: positive means alpha = +1. Even-parity checks use the
  // tanh product rule.
  const int num_edges = static_cast<int>(checks.size()) * 3;
  std::vector<double> var_to_check(num_edges), check_to_var(num_edges, 0.0);
  for (int c = 0; c < static_cast<int>(checks.size()); ++c)
    for (int e = 0; e < 3; ++e) var_to_check[3 * c + e] = prior[checks[c][e]];

  std::vector<std::vector<int>> edges_of_var(num_vars);
  for (int c = 0; c < static_cast<int>(checks.size()); ++c)
    for (int e = 0; e < 3; ++e) edges_of_var[checks[c][e]].push_back(3 * c + e);

  std::vector<std::int8_t> decision(num_vars);
  for (int v = 0; v < num_vars; ++v) decision[v] = physical[v] >= 0 ? 1 : -1;

  std::vector<double> posterior(num_vars);
  for (int iter = 0; iter < params.max_iters; ++iter) {
    for (int c = 0; c < static_cast<int>(checks.size()); ++c) {
      double t[3];
      for (int e = 0; e < 3; ++e)
        t[e] = std::tanh(0.5 * var_to_check[3 * c + e]);
      for (int e = 0; e < 3; ++e) {
        double prod = 1.0;
        for (int o = 0; o < 3; ++o)
          if (o != e) prod *= t[o];
        prod = std::clamp(prod, -1.0 + 1e-12, 1.0 - 1e-12);
        check_to_var[3 * c + e] = 2.0 * std::atanh(prod);
      }
    }
    for (int v = 0; v < num_vars; ++v) {
      double total = prior[v];
      for (int e : edges_of_var[v]) total += check_to_var[e];
      posterior[v] = total;
    }
    for (int c = 0; c < static_cast<int>(checks.size()); ++c) {
      for (int e = 0; e < 3; ++e) {
        const int v = checks[c][e];
        const double fresh = posterior[v] - check_to_var[3 * c + e];
        var_to_check[3 * c + e] = params.damping * var_to_check[3 * c + e] +
                                  (1.0 - params.damping) * fresh;
      }
    }
    bool stable = true;
    for (int v = 0; v < num_vars; ++v) {
      const std::int8_t d = posterior[v] >= 0 ? 1 : -1;
      if (d != decision[v]) stable = false;
      decision[v] = d;
    }
    if (stable && iter > 0) break;
  }

  // Gauge fixing s_0 = +1; the global flip partner is equally valid for
  // problems without 1-local terms.
  SpinConfig logical(n, 1);
  for (int j = 1; j < n; ++j) logical[j] = decision[map.pair_index.at({0, j})];
  return logical;
}

SpinConfig decode(const SpinConfig& physical, const EmbeddingMap& map,
                  const BpParams& params) {
  switch (map.scheme) {
    case Scheme::direct: return physical;
    case Scheme::square:
    case Scheme::chimera: return majority_vote(physical, map);
    case Scheme::paqo: return bp_decode(physical, map, params);
  }
  throw std::invalid_argument("decode: unknown scheme");
}

ConstraintReport verify_constraints(const SpinConfig& physical,
                                    const EmbeddingMap& map,
                                    const PhysicalProblem& problem) {
  ConstraintReport report;
  if (map.scheme == Scheme::square || map.scheme == Scheme::chimera) {
    for (int i = 0; i < static_cast<int>(map.chains.size()); ++i) {
      const auto& chain = map.chains[i];
      for (std::size_t k = 1; k < chain.size(); ++k) {
        if (physical.at(chain[k]) != physical.at(chain[0])) {
          report.broken_chains.push_back(i);
          break;
        }
      }
    }
  }
  for (std::size_t l = 0; l < problem.four_local.size(); ++l) {
    int prod = 1;
    for (int s : problem.four_local[l].spins)
      if (s < problem.num_spins) prod *= physical.at(s);
    if (prod < 0) report.violated_plaquettes.push_back(static_cast<int>(l));
  }
  return report;
}

}  // namespace qabench
