#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qabench/model.hpp"

namespace qabench {

struct ConstraintParams {
  double omega = 0.0;
  double gamma = 1.1;
};

// Chimera cell-grid adjacency: within a cell every left spin couples to every
// right spin; left spins couple vertically, right spins horizontally.
struct ChimeraGraph {
  int rows = 0;
  int cols = 0;
  int c = 0;

  struct Node {
    int row, col;
    bool right;  // false = left (vertical) side
    int offset;  // 0..c-1
  };

  bool adjacent(const Node& a, const Node& b) const;
};

// Invertible bookkeeping between logical variables and physical spins.
struct EmbeddingMap {
  Scheme scheme = Scheme::direct;
  int n = 0;  // logical variables

  // square / chimera: chains[i] lists the physical spins acting as variable i.
  std::vector<std::vector<int>> chains;

  // paqo: physical spin index holding alpha_{ij}, keyed by (i, j) with i < j.
  std::map<std::pair<int, int>, int> pair_index;

  // paqo boundary ancillas, pinned to +1 (indices >= num_spins).
  std::vector<int> fixed_spins;

  // Logical pair (i, j) -> the single physical edge carrying J_ij. For paqo
  // the "edge" is (spin, -1): the coupler becomes a 1-local bias.
  std::map<std::pair<int, int>, std::pair<int, int>> coupler_assignment;

  ConstraintParams constraint;

  // chimera only: half-cell size and per-spin lattice coordinates, kept so
  // adjacency legality stays checkable after the fact.
  int chimera_c = 0;
  std::vector<ChimeraGraph::Node> chimera_nodes;
};

// C_i = omega + gamma * sum_{j != i} |J_ij|.
double chain_constraint(const LogicalProblem& problem, int i, double omega,
                        double gamma);

// C_l = omega + gamma * sum over corner couplers |J|. Corners carrying no
// logical coupler (including ancilla corners, passed as {-1, -1}) contribute 0.
// The corner pairs must form a valid parity tile: every logical index appears
// an even number of times.
double plaquette_constraint(const LogicalProblem& problem,
                            const std::array<std::pair<int, int>, 4>& corners,
                            double omega, double gamma);

std::pair<PhysicalProblem, EmbeddingMap> embed_square(const LogicalProblem& problem,
                                                      double omega, double gamma);

std::pair<PhysicalProblem, EmbeddingMap> embed_chimera(const LogicalProblem& problem,
                                                       int c, double omega,
                                                       double gamma);

std::pair<PhysicalProblem, EmbeddingMap> embed_paqo(const LogicalProblem& problem,
                                                    double omega, double gamma);

// Lift a logical configuration: chain replication, or alpha_ij = s_i * s_j.
SpinConfig embed_config(const EmbeddingMap& map, const SpinConfig& logical);

// Energy of the embedded logical ground state, assuming unbroken constraints:
// logical gs energy minus the fully satisfied constraint energy. With
// validate=true and a small spin count, cross-checks against brute force and
// throws if any constraint breaks in the true physical ground state.
double physical_gs_energy(const EmbeddingMap& map, const PhysicalProblem& physical,
                          double logical_gs_energy, bool validate = false);

// Fully satisfied constraint energy: energy(physical, embed_config(s)) =
// energy(logical, s) + constant_offset for every logical config s.
double constant_offset(const EmbeddingMap& map, const PhysicalProblem& physical);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate_embedding(const EmbeddingMap& map,
                                    const PhysicalProblem& physical,
                                    const LogicalProblem& logical);

void write_embedding(const EmbeddingMap& map, const PhysicalProblem& physical,
                     const std::string& path);
std::pair<PhysicalProblem, EmbeddingMap> read_embedding(const std::string& path);

}  // namespace qabench
