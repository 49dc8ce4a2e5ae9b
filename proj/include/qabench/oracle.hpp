#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qabench/model.hpp"

namespace qabench {

struct GroundState {
  double energy = 0.0;
  long degeneracy = 0;
  SpinConfig config;  // one representative minimizer
};

// Exact minimum over all 2^n configurations; n <= 30.
GroundState brute_force_gs(const LogicalProblem& problem);
GroundState brute_force_gs(const PhysicalProblem& problem);

// Three-group frustration instance: groups of sizes (na, nb, nc), couplers
// favoring alignment inside each group and anti-alignment between groups
// (J = -1 intra, J = +1 inter under the minimized-energy convention).
LogicalProblem build_abc_instance(int na, int nb, int nc);

// Energy advantage of the best parity configuration that violates exactly the
// designated tile over the best valid codeword, for the symmetric ABC
// instance with nA = nB = nC = k. Measured in unsatisfied-coupling units
// (half the raw energy difference); equals (1/9)N^2 with N = 3k.
// N = 6 runs full enumeration, larger sizes the block-restricted search.
double broken_constraint_gain(int k);
double broken_constraint_gain_full(int k);   // feasible for k = 2 only
double broken_constraint_gain_block(int k);

struct ConstraintMapEntry {
  int na, nb, nc;
  int tile_i, tile_j;              // designated tile position in the parity grid
  double min_strength_over_n2;     // minimal uniform constraint strength / N^2
};

// Minimal uniform constraint strength, per reachable tile position, at which
// the valid codeword beats the single-break state. Block-restricted; n <= 12.
std::vector<ConstraintMapEntry> min_constraint_map(int n);

struct SpectrumResult {
  std::vector<double> s_grid;
  std::vector<std::vector<double>> eigenvalues;       // ascending per grid point
  std::vector<double> gap;                            // E1 - E0
  std::vector<std::vector<double>> gs_probabilities;  // per basis state
};

// Dense spectrum of H(t) = (1-t) * (-gamma0 * sum_i X_i) + t * H_problem,
// where H_problem is the diagonal coupler Hamiltonian plus optional
// longitudinal fields (empty vector = none). Spin count <= 12.
SpectrumResult ed_spectrum(const LogicalProblem& problem,
                           const std::vector<double>& fields, double gamma0,
                           const std::vector<double>& s_grid);

// Gap of the static Hamiltonian -gamma * sum_i X_i + H_problem.
double static_transverse_gap(const LogicalProblem& problem,
                             const std::vector<double>& fields, double gamma);

// Grid argmin of the gap; ties resolve to the smallest t.
std::pair<double, double> min_gap(const SpectrumResult& spectrum);  // (t*, gap)

// Asymptotic ferromagnetic-chain gap Gamma^N / J^(N-1).
double chain_gap_estimate(double gamma, double j, int n);

// Shipped 3-spin demo exhibiting an interior avoided crossing: ferromagnetic
// chain couplers plus small symmetry-breaking longitudinal fields.
struct AvoidedCrossingDemo {
  LogicalProblem problem;
  std::vector<double> fields;
  double gamma0;
};
AvoidedCrossingDemo avoided_crossing_demo();

}  // namespace qabench
