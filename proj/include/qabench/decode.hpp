#pragma once

#include <vector>

#include "qabench/embed.hpp"
#include "qabench/model.hpp"

namespace qabench {

struct BpParams {
  int max_iters = 50;
  double damping = 0.5;
  double prior_flip_prob = 0.05;  // assumed physical bit-flip probability
};

// Chain decoder: logical value = sign of the chain's spin sum, ties to +1.
SpinConfig majority_vote(const SpinConfig& physical, const EmbeddingMap& map);

// Parity decoder: damped sum-product over all three-variable loops
// alpha_ij * alpha_ik * alpha_jk = +1, followed by first-row reconstruction
// with the gauge choice s_0 = +1. Non-convergence is not an error; the hard
// decisions at the iteration cap are used.
SpinConfig bp_decode(const SpinConfig& physical, const EmbeddingMap& map,
                     const BpParams& params = {});

// Scheme dispatch; direct is the identity.
SpinConfig decode(const SpinConfig& physical, const EmbeddingMap& map,
                  const BpParams& params = {});

struct ConstraintReport {
  std::vector<int> broken_chains;        // chain indices with non-uniform spins
  std::vector<int> violated_plaquettes;  // indices into physical.four_local
};

ConstraintReport verify_constraints(const SpinConfig& physical,
                                    const EmbeddingMap& map,
                                    const PhysicalProblem& problem);

}  // namespace qabench
