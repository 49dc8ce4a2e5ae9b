#include "qabench/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qabench/oracle.hpp"

namespace qabench {

namespace {

std::pair<int, int> sorted_edge(int a, int b) {
  return a < b ? std::pair(a, b) : std::pair(b, a);
}

void sort_terms(PhysicalProblem& phys) {
  std::sort(phys.one_local.begin(), phys.one_local.end(),
            [](const Bias& a, const Bias& b) { return a.spin < b.spin; });
  std::sort(phys.two_local.begin(), phys.two_local.end(),
            [](const PairTerm& a, const PairTerm& b) {
              return std::pair(a.a, a.b) < std::pair(b.a, b.b);
            });
  std::sort(phys.four_local.begin(), phys.four_local.end(),
            [](const QuadTerm& a, const QuadTerm& b) { return a.spins < b.spins; });
}

// alpha_{ij} spin index in row-major upper-triangle order.
int pair_rank(int n, int i, int j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

double chain_constraint(const LogicalProblem& problem, int i, double omega,
                        double gamma) {
  if (i < 0 || i >= problem.num_variables())
    throw std::invalid_argument("chain_constraint: variable index out of range");
  if (omega < 0 || gamma < 0)
    throw std::invalid_argument("chain_constraint: omega and gamma must be >= 0");
  if (omega == 0 && gamma == 0)
    throw std::invalid_argument("chain_constraint: unconstrained chain (omega = gamma = 0)");
  double sum = 0.0;
  for (const Coupler& c : problem.couplers())
    if (c.i == i || c.j == i) sum += std::abs(c.value);
  return omega + gamma * sum;
}

double plaquette_constraint(const LogicalProblem& problem,
                            const std::array<std::pair<int, int>, 4>& corners,
                            double omega, double gamma) {
  std::map<int, int> occurrences;
  double sum = 0.0;
  for (const auto& corner : corners) {
    if (corner.first < 0 && corner.second < 0) continue;  // fixed ancilla corner
    auto [a, b] = sorted_edge(corner.first, corner.second);
    if (a < 0 || b >= problem.num_variables() || a == b)
      throw std::invalid_argument("plaquette_constraint: invalid corner pair");
    occurrences[a]++;
    occurrences[b]++;
    sum += std::abs(problem.coupling(a, b));
  }
  for (const auto& [var, count] : occurrences) {
    if (count % 2 != 0)
      throw std::invalid_argument(
          "plaquette_constraint: parity-structure error, variable " +
          std::to_string(var) + " appears an odd number of times");
  }
  return omega + gamma * sum;
}

std::pair<PhysicalProblem, EmbeddingMap> embed_square(const LogicalProblem& problem,
                                                      double omega, double gamma) {
  const int n = problem.num_variables();
  if (n < 3) throw std::invalid_argument("embed_square: n must be >= 3");

  // Crossing-chain layout: variable i occupies spins (i, 0..n-2), where
  // position j-1 meets chain j (for j > i) and position j meets chain j
  // (for j < i). Every spin carries exactly one inter-chain coupler slot.
  const int len = n - 1;
  auto spin = [len](int var, int pos) { return var * len + pos; };

  PhysicalProblem phys;
  phys.num_spins = n * len;
  phys.scheme = Scheme::square;

  EmbeddingMap map;
  map.scheme = Scheme::square;
  map.n = n;
  map.constraint = {omega, gamma};
  map.chains.resize(n);

  for (int i = 0; i < n; ++i) {
    const double ci = chain_constraint(problem, i, omega, gamma);
    for (int k = 0; k < len; ++k) map.chains[i].push_back(spin(i, k));
    for (int k = 0; k + 1 < len; ++k)
      phys.two_local.push_back({spin(i, k), spin(i, k + 1), -ci});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto edge = sorted_edge(spin(i, j - 1), spin(j, i));
      map.coupler_assignment[{i, j}] = edge;
      const double jij = problem.coupling(i, j);
      if (jij != 0.0) phys.two_local.push_back({edge.first, edge.second, jij});
    }
  }
  sort_terms(phys);
  return {std::move(phys), std::move(map)};
}

std::pair<PhysicalProblem, EmbeddingMap> embed_chimera(const LogicalProblem& problem,
                                                       int c, double omega,
                                                       double gamma) {
  const int n = problem.num_variables();
  if (n < 2) throw std::invalid_argument("embed_chimera: n must be >= 2");
  if (c < 2) throw std::invalid_argument("embed_chimera: c must be >= 2");

  // Triangular clique layout: variable i (block b = i/c, offset t = i%c) is a
  // horizontal run of right-side spins in cells (b, 0..b) joined in the
  // diagonal cell (b, b) to a vertical run of left-side spins in cells
  // (b..m-1, b). Chain length m+1 with m = ceil(n/c).
  const int m = (n + c - 1) / c;

  EmbeddingMap map;
  map.scheme = Scheme::chimera;
  map.n = n;
  map.constraint = {omega, gamma};
  map.chimera_c = c;
  map.chains.resize(n);

  PhysicalProblem phys;
  phys.scheme = Scheme::chimera;

  std::map<std::tuple<int, int, bool, int>, int> node_index;
  std::vector<ChimeraGraph::Node> nodes;
  auto spin = [&](int row, int col, bool right, int offset) {
    auto key = std::tuple(row, col, right, offset);
    auto it = node_index.find(key);
    if (it != node_index.end()) return it->second;
    const int idx = static_cast<int>(nodes.size());
    node_index[key] = idx;
    nodes.push_back({row, col, right, offset});
    return idx;
  };

  for (int i = 0; i < n; ++i) {
    const int b = i / c;
    const int t = i % c;
    const double ci = chain_constraint(problem, i, omega, gamma);
    std::vector<int>& chain = map.chains[i];
    for (int q = 0; q <= b; ++q) chain.push_back(spin(b, q, true, t));
    for (int r = b; r < m; ++r) chain.push_back(spin(r, b, false, t));
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      auto edge = sorted_edge(chain[k], chain[k + 1]);
      phys.two_local.push_back({edge.first, edge.second, -ci});
    }
  }
  for (int i = 0; i < n; ++i) {
    const int bi = i / c, ti = i % c;
    for (int j = i + 1; j < n; ++j) {
      const int bj = j / c, tj = j % c;
      // Couplers live on intra-cell K_{c,c} edges: cell (bj, bi) joins the
      // vertical run of i (left side) with the horizontal run of j (right).
      auto edge = sorted_edge(spin(bj, bi, false, ti), spin(bj, bi, true, tj));
      map.coupler_assignment[{i, j}] = edge;
      const double jij = problem.coupling(i, j);
      if (jij != 0.0) phys.two_local.push_back({edge.first, edge.second, jij});
    }
  }
  phys.num_spins = static_cast<int>(nodes.size());
  map.chimera_nodes = std::move(nodes);
  sort_terms(phys);
  return {std::move(phys), std::move(map)};
}

std::pair<PhysicalProblem, EmbeddingMap> embed_paqo(const LogicalProblem& problem,
                                                    double omega, double gamma) {
  const int n = problem.num_variables();
  if (n < 3) throw std::invalid_argument("embed_paqo: n must be >= 3");

  PhysicalProblem phys;
  phys.scheme = Scheme::paqo;
  phys.num_spins = n * (n - 1) / 2;

  EmbeddingMap map;
  map.scheme = Scheme::paqo;
  map.n = n;
  map.constraint = {omega, gamma};

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int idx = pair_rank(n, i, j);
      map.pair_index[{i, j}] = idx;
      map.coupler_assignment[{i, j}] = {idx, -1};
      const double jij = problem.coupling(i, j);
      if (jij != 0.0) phys.one_local.push_back({idx, jij});
    }
  }

  // Interior tiles {(i,j), (i,j+1), (i+1,j), (i+1,j+1)} for i+1 < j < n-1.
  // Satisfied tiles (corner product +1) must be energetically favored, so the
  // stored coefficient is -C_l.
  for (int i = 0; i + 3 < n; ++i) {
    for (int j = i + 2; j + 1 < n; ++j) {
      std::array<std::pair<int, int>, 4> corners = {
          std::pair(i, j), std::pair(i, j + 1), std::pair(i + 1, j),
          std::pair(i + 1, j + 1)};
      const double cl = plaquette_constraint(problem, corners, omega, gamma);
      std::array<int, 4> spins = {pair_rank(n, i, j), pair_rank(n, i, j + 1),
                                  pair_rank(n, i + 1, j), pair_rank(n, i + 1, j + 1)};
      std::sort(spins.begin(), spins.end());
      phys.four_local.push_back({spins, -cl});
    }
  }
  // Boundary tiles along the diagonal, completed with one fixed +1 ancilla.
  for (int i = 0; i + 2 < n; ++i) {
    std::array<std::pair<int, int>, 4> corners = {
        std::pair(i, i + 1), std::pair(i, i + 2), std::pair(i + 1, i + 2),
        std::pair(-1, -1)};
    const double cl = plaquette_constraint(problem, corners, omega, gamma);
    const int ancilla = phys.num_spins + i;
    std::array<int, 4> spins = {pair_rank(n, i, i + 1), pair_rank(n, i, i + 2),
                                pair_rank(n, i + 1, i + 2), ancilla};
    std::sort(spins.begin(), spins.end());
    phys.four_local.push_back({spins, -cl});
    map.fixed_spins.push_back(ancilla);
  }
  phys.num_fixed = n - 2;
  sort_terms(phys);
  return {std::move(phys), std::move(map)};
}

SpinConfig embed_config(const EmbeddingMap& map, const SpinConfig& logical) {
  if (static_cast<int>(logical.size()) != map.n)
    throw std::invalid_argument("embed_config: logical config length mismatch");
  if (map.scheme == Scheme::paqo) {
    SpinConfig phys(map.pair_index.size(), 1);
    for (const auto& [pair, idx] : map.pair_index)
      phys[idx] = static_cast<std::int8_t>(logical[pair.first] * logical[pair.second]);
    return phys;
  }
  int num = 0;
  for (const auto& chain : map.chains)
    for (int s : chain) num = std::max(num, s + 1);
  SpinConfig phys(num, 1);
  for (int i = 0; i < map.n; ++i)
    for (int s : map.chains[i]) phys[s] = logical[i];
  return phys;
}

double constant_offset(const EmbeddingMap& map, const PhysicalProblem& physical) {
  double offset = 0.0;
  if (map.scheme == Scheme::paqo) {
    for (const QuadTerm& t : physical.four_local) offset += t.value;
    return offset;
  }
  std::set<std::pair<int, int>> carriers;
  for (const auto& [pair, edge] : map.coupler_assignment) carriers.insert(edge);
  for (const PairTerm& t : physical.two_local)
    if (!carriers.count({t.a, t.b})) offset += t.value;  // chain edge, satisfied
  return offset;
}

double physical_gs_energy(const EmbeddingMap& map, const PhysicalProblem& physical,
                          double logical_gs_energy, bool validate) {
  const double e = logical_gs_energy + constant_offset(map, physical);
  if (validate) {
    if (physical.num_spins > 24)
      throw std::invalid_argument(
          "physical_gs_energy: validation requires <= 24 physical spins");
    const GroundState gs = brute_force_gs(physical);
    if (std::abs(gs.energy - e) > energy_tolerance(e))
      throw std::runtime_error(
          "physical_gs_energy: constraint too weak, brute-force ground state at " +
          std::to_string(gs.energy) + " undercuts embedded logical ground state " +
          std::to_string(e));
  }
  return e;
}

bool ChimeraGraph::adjacent(const Node& a, const Node& b) const {
  if (a.row == b.row && a.col == b.col) return a.right != b.right;
  if (!a.right && !b.right && a.col == b.col && a.offset == b.offset)
    return std::abs(a.row - b.row) == 1;
  if (a.right && b.right && a.row == b.row && a.offset == b.offset)
    return std::abs(a.col - b.col) == 1;
  return false;
}

namespace {

void check_chain_scheme(const EmbeddingMap& map, const PhysicalProblem& physical,
                        const LogicalProblem& logical, ValidationReport& report) {
  const int n = logical.num_variables();
  auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };

  if (static_cast<int>(map.chains.size()) != n)
    complain("chain count does not match logical variable count");

  std::map<std::pair<int, int>, double> edges;
  for (const PairTerm& t : physical.two_local) edges[{t.a, t.b}] = t.value;

  std::set<int> seen;
  const int c = map.chimera_c;
  const std::size_t expected_len =
      map.scheme == Scheme::square
          ? static_cast<std::size_t>(n - 1)
          : static_cast<std::size_t>(n <= c ? 2 : (n + c - 1) / c + 1);
  for (int i = 0; i < static_cast<int>(map.chains.size()); ++i) {
    const auto& chain = map.chains[i];
    if (chain.size() != expected_len)
      complain("chain " + std::to_string(i) + " has unexpected length " +
               std::to_string(chain.size()));
    const double ci = chain_constraint(logical, i, map.constraint.omega,
                                       map.constraint.gamma);
    for (int s : chain) {
      if (!seen.insert(s).second)
        complain("chains are not vertex-disjoint at spin " + std::to_string(s));
    }
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      auto e = sorted_edge(chain[k], chain[k + 1]);
      auto it = edges.find(e);
      if (it == edges.end()) {
        complain("chain " + std::to_string(i) + " missing edge (" +
                 std::to_string(e.first) + ", " + std::to_string(e.second) + ")");
      } else if (std::abs(it->second + ci) > 1e-12 * std::max(1.0, ci)) {
        complain("chain " + std::to_string(i) + " edge strength " +
                 std::to_string(it->second) + " != -C_i = " + std::to_string(-ci));
      }
    }
  }

  std::set<std::pair<int, int>> used_edges;
  std::map<int, int> carriers_per_spin;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto it = map.coupler_assignment.find({i, j});
      if (it == map.coupler_assignment.end()) {
        complain("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                 ") has no carrier assignment");
        continue;
      }
      const auto edge = it->second;
      if (!used_edges.insert(edge).second)
        complain("carrier edge (" + std::to_string(edge.first) + ", " +
                 std::to_string(edge.second) + ") assigned to multiple pairs");
      const double jij = logical.coupling(i, j);
      auto found = edges.find(edge);
      if (jij != 0.0) {
        if (found == edges.end() || std::abs(found->second - jij) > 1e-12)
          complain("logical coupler (" + std::to_string(i) + ", " +
                   std::to_string(j) + ") not carried with its value");
        carriers_per_spin[edge.first]++;
        carriers_per_spin[edge.second]++;
      }
    }
  }
  if (map.scheme == Scheme::square) {
    for (const auto& [s, count] : carriers_per_spin)
      if (count > 1)
        complain("square spin " + std::to_string(s) + " hosts " +
                 std::to_string(count) + " logical couplers");
  }
  if (map.scheme == Scheme::chimera) {
    if (static_cast<int>(map.chimera_nodes.size()) != physical.num_spins) {
      complain("chimera node coordinates missing");
    } else {
      ChimeraGraph graph{0, 0, c};
      for (const PairTerm& t : physical.two_local) {
        if (!graph.adjacent(map.chimera_nodes[t.a], map.chimera_nodes[t.b]))
          complain("edge (" + std::to_string(t.a) + ", " + std::to_string(t.b) +
                   ") violates chimera adjacency");
      }
    }
  }
}

void check_paqo(const EmbeddingMap& map, const PhysicalProblem& physical,
                const LogicalProblem& logical, ValidationReport& report) {
  const int n = logical.num_variables();
  auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };

  if (physical.num_spins != n * (n - 1) / 2)
    complain("paqo spin count != n(n-1)/2");
  if (static_cast<int>(physical.four_local.size()) != (n - 1) * (n - 2) / 2)
    complain("paqo plaquette count != (n-1)(n-2)/2");

  std::map<int, std::pair<int, int>> spin_to_pair;
  for (const auto& [pair, idx] : map.pair_index) spin_to_pair[idx] = pair;

  std::map<int, double> biases;
  for (const Bias& b : physical.one_local) biases[b.spin] = b.value;
  for (const Coupler& cpl : logical.couplers()) {
    auto it = map.pair_index.find({cpl.i, cpl.j});
    if (it == map.pair_index.end()) {
      complain("pair (" + std::to_string(cpl.i) + ", " + std::to_string(cpl.j) +
               ") has no physical spin");
      continue;
    }
    auto found = biases.find(it->second);
    if (found == biases.end() || std::abs(found->second - cpl.value) > 1e-12)
      complain("coupler (" + std::to_string(cpl.i) + ", " + std::to_string(cpl.j) +
               ") not present as bias on its spin");
  }

  for (const QuadTerm& t : physical.four_local) {
    std::array<std::pair<int, int>, 4> corners;
    int k = 0;
    bool resolved = true;
    std::map<int, int> occurrences;
    for (int s : t.spins) {
      if (s >= physical.num_spins) {
        corners[k++] = {-1, -1};  // fixed ancilla
        continue;
      }
      auto it = spin_to_pair.find(s);
      if (it == spin_to_pair.end()) {
        complain("plaquette references unmapped spin " + std::to_string(s));
        resolved = false;
        break;
      }
      occurrences[it->second.first]++;
      occurrences[it->second.second]++;
      corners[k++] = it->second;
    }
    if (!resolved) continue;
    bool odd = false;
    for (const auto& [var, count] : occurrences)
      if (count % 2 != 0) odd = true;
    if (odd) {
      complain("plaquette has odd parity");
      continue;
    }
    const double cl = plaquette_constraint(logical, corners, map.constraint.omega,
                                           map.constraint.gamma);
    if (std::abs(t.value + cl) > 1e-12 * std::max(1.0, cl))
      complain("plaquette coefficient " + std::to_string(t.value) +
               " != -C_l = " + std::to_string(-cl));
  }
}

}  // namespace

ValidationReport validate_embedding(const EmbeddingMap& map,
                                    const PhysicalProblem& physical,
                                    const LogicalProblem& logical) {
  ValidationReport report;
  try {
    physical.validate();
  } catch (const std::invalid_argument& e) {
    report.violations.push_back(e.what());
  }
  if (map.scheme == Scheme::paqo)
    check_paqo(map, physical, logical, report);
  else
    check_chain_scheme(map, physical, logical, report);
  report.ok = report.violations.empty();
  return report;
}

void write_embedding(const EmbeddingMap& map, const PhysicalProblem& physical,
                     const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["scheme"] = to_string(map.scheme);
  j["n"] = map.n;
  j["omega"] = map.constraint.omega;
  j["gamma"] = map.constraint.gamma;
  j["num_spins"] = physical.num_spins;
  j["num_fixed"] = physical.num_fixed;
  for (const Bias& b : physical.one_local)
    j["one_local"].push_back({b.spin, b.value});
  for (const PairTerm& t : physical.two_local)
    j["two_local"].push_back({t.a, t.b, t.value});
  for (const QuadTerm& t : physical.four_local)
    j["four_local"].push_back({t.spins[0], t.spins[1], t.spins[2], t.spins[3], t.value});
  j["chains"] = map.chains;
  for (const auto& [pair, idx] : map.pair_index)
    j["pair_index"].push_back({pair.first, pair.second, idx});
  j["fixed_spins"] = map.fixed_spins;
  for (const auto& [pair, edge] : map.coupler_assignment)
    j["coupler_assignment"].push_back({pair.first, pair.second, edge.first, edge.second});
  j["chimera_c"] = map.chimera_c;
  for (const auto& node : map.chimera_nodes)
    j["chimera_nodes"].push_back({node.row, node.col, node.right ? 1 : 0, node.offset});
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);
  out << j.dump(2) << "\n";
}

std::pair<PhysicalProblem, EmbeddingMap> read_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": embedding parse error: " + e.what());
  }
  PhysicalProblem phys;
  EmbeddingMap map;
  try {
    map.scheme = phys.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    map.n = j.at("n").get<int>();
    map.constraint = {j.at("omega").get<double>(), j.at("gamma").get<double>()};
    phys.num_spins = j.at("num_spins").get<int>();
    phys.num_fixed = j.value("num_fixed", 0);
    for (const auto& e : j.value("one_local", nlohmann::json::array()))
      phys.one_local.push_back({e[0].get<int>(), e[1].get<double>()});
    for (const auto& e : j.value("two_local", nlohmann::json::array()))
      phys.two_local.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    for (const auto& e : j.value("four_local", nlohmann::json::array()))
      phys.four_local.push_back(
          {{e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()},
           e[4].get<double>()});
    map.chains = j.value("chains", std::vector<std::vector<int>>{});
    for (const auto& e : j.value("pair_index", nlohmann::json::array()))
      map.pair_index[{e[0].get<int>(), e[1].get<int>()}] = e[2].get<int>();
    map.fixed_spins = j.value("fixed_spins", std::vector<int>{});
    for (const auto& e : j.value("coupler_assignment", nlohmann::json::array()))
      map.coupler_assignment[{e[0].get<int>(), e[1].get<int>()}] = {e[2].get<int>(),
                                                                    e[3].get<int>()};
    map.chimera_c = j.value("chimera_c", 0);
    for (const auto& e : j.value("chimera_nodes", nlohmann::json::array()))
      map.chimera_nodes.push_back(
          {e[0].get<int>(), e[1].get<int>(), e[2].get<int>() != 0, e[3].get<int>()});
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": embedding parse error: " + e.what());
  }
  phys.validate();
  return {std::move(phys), std::move(map)};
}

}  // namespace qabench
