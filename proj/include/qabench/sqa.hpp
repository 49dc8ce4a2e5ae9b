#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qabench/model.hpp"

namespace qabench {

struct SqaParams {
  int slices = 1024;        // Trotter slices M
  double beta = 1024.0;     // inverse temperature
  double gamma0 = 0.5;      // transverse field at the start
  double gammaf = 0.001;    // transverse field at the end
  long sweeps = 1000;       // anneal time T, one Metropolis attempt per (spin, slice)
  std::uint64_t seed = 0;
  bool audit = false;          // verify incremental energies against recomputation
  bool keep_configs = false;   // retain the final slice configurations

  void validate() const;
};

struct SqaResult {
  std::vector<double> slice_energies;  // per-slice spatial energy after the last sweep
  double gs_hit_fraction = 0.0;
  long sweeps = 0;
  std::vector<SpinConfig> final_slices;  // filled when keep_configs is set
};

// Quadratic schedule with the steep edge at the start:
// Gamma(u) = gammaf + (gamma0 - gammaf) * (1 - u)^2.
double gamma_schedule(double u, const SqaParams& params);

// Trotter imaginary-time coupling J_perp = 0.5 * ln coth(beta * gamma / M).
double slice_coupling(double beta, double gamma, int slices);

// Path-integral Metropolis kernel over M Trotter replicas with action
// S = (beta/M) * sum_k E(slice k) - J_perp * sum time bonds. One sweep visits
// every (spin, slice) pair in lexicographic order. Fixed transverse field per
// sweep; annealing is driven from outside.
class SqaEngine {
 public:
  SqaEngine(const PhysicalProblem& problem, const SqaParams& params);
  ~SqaEngine();
  SqaEngine(SqaEngine&&) noexcept;
  SqaEngine& operator=(SqaEngine&&) noexcept;

  void sweep(double gamma);

  int num_spins() const;
  int num_slices() const;
  SpinConfig slice(int k) const;
  double slice_energy(int k) const;      // tracked incrementally
  void recompute_energies();             // refresh from scratch

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double beta_ = 0.0;
};

// Full annealed run; deterministic given (problem, params). gs_energy must be
// the verified ground-state energy.
SqaResult run_sqa(const PhysicalProblem& problem, const SqaParams& params,
                  double gs_energy);
SqaResult run_sqa(const LogicalProblem& problem, const SqaParams& params,
                  double gs_energy);

// p_gs: arithmetic mean of gs_hit_fraction across repetitions.
double success_probability(const std::vector<SqaResult>& results);

}  // namespace qabench
