#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace qabench {

enum class Scheme { direct, square, chimera, paqo };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// One entry of the upper-triangular coupler matrix, i < j.
struct Coupler {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

// Spin values, one ±1 entry per variable.
using SpinConfig = std::vector<std::int8_t>;

// Quadratic ±1-spin problem on a complete or partial graph: E = sum_{i<j} J_ij s_i s_j.
// No 1-local terms by construction. Immutable after construction.
class LogicalProblem {
 public:
  LogicalProblem(int n, std::vector<Coupler> couplers, std::string label = "",
                 std::uint64_t seed = 0);

  int num_variables() const { return n_; }
  const std::vector<Coupler>& couplers() const { return couplers_; }
  const std::string& label() const { return label_; }
  std::uint64_t seed() const { return seed_; }

  // J_ij for i != j (either order); 0 when the pair is absent.
  double coupling(int i, int j) const;

 private:
  int n_;
  std::vector<Coupler> couplers_;  // sorted by (i, j), unique
  std::string label_;
  std::uint64_t seed_;
};

struct Bias {
  int spin = 0;
  double value = 0.0;
};

struct PairTerm {
  int a = 0;
  int b = 0;  // a < b
  double value = 0.0;
};

// 4-spin product term. Indices >= num_spins refer to fixed +1 ancillas that
// are never simulated; boundary tiles of the parity embedding use one.
struct QuadTerm {
  std::array<int, 4> spins{};  // sorted ascending
  double value = 0.0;
};

struct PhysicalProblem {
  int num_spins = 0;
  int num_fixed = 0;  // fixed ancilla indices occupy [num_spins, num_spins + num_fixed)
  Scheme scheme = Scheme::direct;
  std::vector<Bias> one_local;
  std::vector<PairTerm> two_local;
  std::vector<QuadTerm> four_local;

  void validate() const;  // throws std::invalid_argument on violated invariants
};

double energy(const LogicalProblem& problem, const SpinConfig& config);
double energy(const PhysicalProblem& problem, const SpinConfig& config);

// |dE| tolerance used for ground-state comparisons throughout.
inline double energy_tolerance(double e) {
  return 1e-9 * std::max(1.0, std::abs(e));
}

// MaxCut instance with exactly round(p*n*(n-1)/2) distinct antiferromagnetic
// unit edges drawn uniformly without replacement. Under the minimized-energy
// convention here antiferromagnetic means J = +1.
LogicalProblem generate_maxcut(int n, double p, std::uint64_t seed);

// Fully connected instance with Gaussian couplers; sigma is the standard
// deviation.
LogicalProblem generate_gaussian_sk(int n, double mu, double sigma,
                                    std::uint64_t seed);

LogicalProblem read_problem(const std::string& path);
void write_problem(const LogicalProblem& problem, const std::string& path);

std::string problem_to_json_string(const LogicalProblem& problem);
LogicalProblem problem_from_json_string(const std::string& text);

}  // namespace qabench
