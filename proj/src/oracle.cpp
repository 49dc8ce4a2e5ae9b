#include "qabench/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "qabench/embed.hpp"

namespace qabench {

namespace {

// Per-spin term lists for incremental gray-code enumeration. Built directly
// from the problem terms; independent of the Monte Carlo engine's tables.
struct TermLists {
  int num_spins = 0;
  std::vector<double> bias;
  std::vector<std::vector<std::pair<int, double>>> pairs;   // (other, J)
  std::vector<std::vector<std::pair<std::array<int, 3>, double>>> quads;
};

TermLists build_terms(const LogicalProblem& problem) {
  TermLists t;
  t.num_spins = problem.num_variables();
  t.bias.assign(t.num_spins, 0.0);
  t.pairs.resize(t.num_spins);
  t.quads.resize(t.num_spins);
  for (const Coupler& c : problem.couplers()) {
    t.pairs[c.i].push_back({c.j, c.value});
    t.pairs[c.j].push_back({c.i, c.value});
  }
  return t;
}

TermLists build_terms(const PhysicalProblem& problem) {
  TermLists t;
  t.num_spins = problem.num_spins;
  t.bias.assign(t.num_spins, 0.0);
  t.pairs.resize(t.num_spins);
  t.quads.resize(t.num_spins);
  for (const Bias& b : problem.one_local) t.bias[b.spin] += b.value;
  for (const PairTerm& p : problem.two_local) {
    t.pairs[p.a].push_back({p.b, p.value});
    t.pairs[p.b].push_back({p.a, p.value});
  }
  for (const QuadTerm& q : problem.four_local) {
    for (int k = 0; k < 4; ++k) {
      const int s = q.spins[k];
      if (s >= t.num_spins) continue;  // fixed +1 ancilla
      std::array<int, 3> others{};
      int m = 0;
      for (int l = 0; l < 4; ++l)
        if (l != k) others[m++] = q.spins[l];
      t.quads[s].push_back({others, q.value});
    }
  }
  return t;
}

double local_field(const TermLists& t, const SpinConfig& s, int i) {
  double f = t.bias[i];
  for (const auto& [j, v] : t.pairs[i]) f += v * s[j];
  for (const auto& [others, v] : t.quads[i]) {
    int prod = 1;
    for (int o : others) prod *= o < t.num_spins ? s[o] : 1;
    f += v * prod;
  }
  return f;
}

GroundState enumerate_gs(const TermLists& terms, double initial_energy) {
  const int n = terms.num_spins;
  if (n > 30) throw std::invalid_argument("brute_force_gs: more than 30 spins");
  SpinConfig s(n, 1);
  double e = initial_energy;
  GroundState best{e, 1, s};
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int i = std::countr_zero(g);
    e += -2.0 * s[i] * local_field(terms, s, i);
    s[i] = static_cast<std::int8_t>(-s[i]);
    const double tol = energy_tolerance(best.energy);
    if (e < best.energy - tol) {
      best = {e, 1, s};
    } else if (std::abs(e - best.energy) <= tol) {
      best.degeneracy++;
    }
  }
  return best;
}

}  // namespace

GroundState brute_force_gs(const LogicalProblem& problem) {
  const TermLists terms = build_terms(problem);
  return enumerate_gs(terms, energy(problem, SpinConfig(problem.num_variables(), 1)));
}

GroundState brute_force_gs(const PhysicalProblem& problem) {
  const TermLists terms = build_terms(problem);
  return enumerate_gs(terms, energy(problem, SpinConfig(problem.num_spins, 1)));
}

LogicalProblem build_abc_instance(int na, int nb, int nc) {
  if (na < 1 || nb < 1 || nc < 1)
    throw std::invalid_argument("build_abc_instance: group sizes must be >= 1");
  const int n = na + nb + nc;
  auto group = [na, nb](int i) { return i < na ? 0 : (i < na + nb ? 1 : 2); };
  std::vector<Coupler> couplers;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      couplers.push_back({i, j, group(i) == group(j) ? -1.0 : 1.0});
  return LogicalProblem(n, std::move(couplers),
                        "abc_" + std::to_string(na) + "_" + std::to_string(nb) +
                            "_" + std::to_string(nc));
}

namespace {

struct ParityStructure {
  LogicalProblem logical;
  PhysicalProblem physical;  // tiles and biases; constraint values unused here
  EmbeddingMap map;
  int designated_tile = -1;  // index into physical.four_local
};

ParityStructure abc_parity(int na, int nb, int nc) {
  LogicalProblem logical = build_abc_instance(na, nb, nc);
  auto [physical, map] = embed_paqo(logical, 1.0, 0.0);
  const int n = na + nb + nc;
  // The tile at the crossing of the A/B row boundary and the B/C column
  // boundary is the one whose break frees a whole inter-group region.
  const int ti = na - 1, tj = na + nb - 1;
  std::array<int, 4> want{};
  {
    std::array<std::pair<int, int>, 4> corners = {
        std::pair(ti, tj), std::pair(ti, tj + 1), std::pair(ti + 1, tj),
        std::pair(ti + 1, tj + 1)};
    int k = 0;
    for (const auto& [a, b] : corners) want[k++] = map.pair_index.at({a, b});
    std::sort(want.begin(), want.end());
  }
  ParityStructure result{std::move(logical), std::move(physical), std::move(map), -1};
  for (std::size_t l = 0; l < result.physical.four_local.size(); ++l)
    if (result.physical.four_local[l].spins == want)
      result.designated_tile = static_cast<int>(l);
  if (result.designated_tile < 0)
    throw std::logic_error("abc_parity: designated tile not found");
  return result;
}

double bias_energy(const ParityStructure& ps, const SpinConfig& alpha) {
  double e = 0.0;
  for (const Bias& b : ps.physical.one_local) e += b.value * alpha[b.spin];
  return e;
}

// Indices of violated tiles (corner product -1, fixed ancillas +1).
std::vector<int> violated_tiles(const ParityStructure& ps, const SpinConfig& alpha) {
  std::vector<int> out;
  for (std::size_t l = 0; l < ps.physical.four_local.size(); ++l) {
    int prod = 1;
    for (int s : ps.physical.four_local[l].spins)
      if (s < ps.physical.num_spins) prod *= alpha[s];
    if (prod < 0) out.push_back(static_cast<int>(l));
  }
  return out;
}

struct BreakSearch {
  double best_valid = std::numeric_limits<double>::infinity();
  double best_broken = std::numeric_limits<double>::infinity();

  void offer(const ParityStructure& ps, const SpinConfig& alpha) {
    const auto violations = violated_tiles(ps, alpha);
    const double e = bias_energy(ps, alpha);
    if (violations.empty())
      best_valid = std::min(best_valid, e);
    else if (violations.size() == 1 && violations[0] == ps.designated_tile)
      best_broken = std::min(best_broken, e);
  }

  double gain() const {
    if (!std::isfinite(best_valid) || !std::isfinite(best_broken))
      throw std::runtime_error("broken_constraint_gain: search found no candidates");
    return (best_valid - best_broken) / 2.0;
  }
};

double block_restricted_gain(int na, int nb, int nc) {
  const ParityStructure ps = abc_parity(na, nb, nc);
  const int n = na + nb + nc;
  auto group = [na, nb](int i) { return i < na ? 0 : (i < na + nb ? 1 : 2); };

  BreakSearch search;
  for (int mask = 0; mask < 8; ++mask) {
    SpinConfig logical(n);
    for (int i = 0; i < n; ++i)
      logical[i] = (mask >> group(i)) & 1 ? -1 : 1;
    const SpinConfig codeword = embed_config(ps.map, logical);
    search.offer(ps, codeword);
    // Single-region flips: invert all alpha spins of one inter-group block.
    for (int ga = 0; ga < 3; ++ga) {
      for (int gb = ga + 1; gb < 3; ++gb) {
        SpinConfig flipped = codeword;
        for (const auto& [pair, idx] : ps.map.pair_index) {
          const int gi = group(pair.first), gj = group(pair.second);
          if ((gi == ga && gj == gb) || (gi == gb && gj == ga))
            flipped[idx] = static_cast<std::int8_t>(-flipped[idx]);
        }
        search.offer(ps, flipped);
      }
    }
  }
  return search.gain();
}

}  // namespace

double broken_constraint_gain_full(int k) {
  const int n = 3 * k;
  const ParityStructure ps = abc_parity(k, k, k);
  const int spins = ps.physical.num_spins;
  if (spins > 20)
    throw std::invalid_argument("broken_constraint_gain_full: too many spins for "
                                "full enumeration (N = " + std::to_string(n) + ")");
  BreakSearch search;
  SpinConfig alpha(spins, 1);
  const std::uint64_t total = 1ULL << spins;
  for (std::uint64_t b = 0; b < total; ++b) {
    for (int s = 0; s < spins; ++s)
      alpha[s] = (b >> s) & 1 ? -1 : 1;
    search.offer(ps, alpha);
  }
  return search.gain();
}

double broken_constraint_gain_block(int k) {
  if (k < 2) throw std::invalid_argument("broken_constraint_gain: k must be >= 2");
  return block_restricted_gain(k, k, k);
}

double broken_constraint_gain(int k) {
  if (k < 2) throw std::invalid_argument("broken_constraint_gain: k must be >= 2");
  return 3 * k == 6 ? broken_constraint_gain_full(k) : broken_constraint_gain_block(k);
}

std::vector<ConstraintMapEntry> min_constraint_map(int n) {
  if (n < 6 || n > 12)
    throw std::invalid_argument("min_constraint_map: n must be in [6, 12]");
  std::vector<ConstraintMapEntry> grid;
  for (int na = 2; na <= n - 4; ++na) {
    for (int nb = 2; na + nb <= n - 2; ++nb) {
      const int nc = n - na - nb;
      const double strength = block_restricted_gain(na, nb, nc);
      grid.push_back({na, nb, nc, na - 1, na + nb - 1,
                      strength / (static_cast<double>(n) * n)});
    }
  }
  return grid;
}

namespace {

Eigen::MatrixXd transverse_hamiltonian(const LogicalProblem& problem,
                                       const std::vector<double>& fields,
                                       double problem_weight, double driver_gamma) {
  const int n = problem.num_variables();
  if (n > 12)
    throw std::invalid_argument("ed_spectrum: more than 12 spins for dense ED");
  if (!fields.empty() && static_cast<int>(fields.size()) != n)
    throw std::invalid_argument("ed_spectrum: field vector length mismatch");
  const int dim = 1 << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    auto spin = [b](int i) { return (b >> i) & 1 ? -1.0 : 1.0; };
    double diag = 0.0;
    for (const Coupler& c : problem.couplers())
      diag += c.value * spin(c.i) * spin(c.j);
    if (!fields.empty())
      for (int i = 0; i < n; ++i) diag += fields[i] * spin(i);
    h(b, b) = problem_weight * diag;
    for (int i = 0; i < n; ++i) h(b, b ^ (1 << i)) -= driver_gamma;
  }
  return h;
}

}  // namespace

SpectrumResult ed_spectrum(const LogicalProblem& problem,
                           const std::vector<double>& fields, double gamma0,
                           const std::vector<double>& s_grid) {
  SpectrumResult result;
  result.s_grid = s_grid;
  for (double t : s_grid) {
    Eigen::MatrixXd h = transverse_hamiltonian(problem, fields, t, (1.0 - t) * gamma0);
    const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
    if (asym != 0.0)
      throw std::logic_error("ed_spectrum: Hamiltonian not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const auto& evals = solver.eigenvalues();
    result.eigenvalues.emplace_back(evals.data(), evals.data() + evals.size());
    result.gap.push_back(evals(1) - evals(0));
    const auto gs = solver.eigenvectors().col(0);
    std::vector<double> probs(gs.size());
    for (int b = 0; b < gs.size(); ++b) probs[b] = gs(b) * gs(b);
    result.gs_probabilities.push_back(std::move(probs));
  }
  return result;
}

double static_transverse_gap(const LogicalProblem& problem,
                             const std::vector<double>& fields, double gamma) {
  Eigen::MatrixXd h = transverse_hamiltonian(problem, fields, 1.0, gamma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  return solver.eigenvalues()(1) - solver.eigenvalues()(0);
}

std::pair<double, double> min_gap(const SpectrumResult& spectrum) {
  if (spectrum.gap.empty())
    throw std::invalid_argument("min_gap: empty spectrum grid");
  std::size_t best = 0;
  for (std::size_t k = 1; k < spectrum.gap.size(); ++k)
    if (spectrum.gap[k] < spectrum.gap[best]) best = k;
  return {spectrum.s_grid[best], spectrum.gap[best]};
}

double chain_gap_estimate(double gamma, double j, int n) {
  if (gamma <= 0 || j <= 0)
    throw std::invalid_argument("chain_gap_estimate: gamma and j must be > 0");
  if (n < 2) throw std::invalid_argument("chain_gap_estimate: n must be >= 2");
  return std::pow(gamma, n) / std::pow(j, n - 1);
}

AvoidedCrossingDemo avoided_crossing_demo() {
  // Ferromagnetic 3-spin chain with competing longitudinal fields: the field
  // sum narrowly favors all-down at the end of the anneal, while the strong
  // field on the first spin makes the opposite branch softer against quantum
  // fluctuations and hence lower at intermediate times. The levels meet in an
  // interior avoided crossing and the dominant basis state swaps across it.
  LogicalProblem chain(3, {{0, 1, -1.0}, {1, 2, -1.0}}, "avoided-crossing-demo");
  return {std::move(chain), {0.9, -0.42, -0.42}, 1.0};
}

}  // namespace qabench
