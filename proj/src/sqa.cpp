#include "qabench/sqa.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "qabench/rng.hpp"

namespace qabench {

void SqaParams::validate() const {
  if (slices < 2) throw std::invalid_argument("SqaParams: slices must be >= 2");
  if (beta <= 0) throw std::invalid_argument("SqaParams: beta must be > 0");
  if (!(gamma0 > gammaf) || gammaf <= 0)
    throw std::invalid_argument("SqaParams: need gamma0 > gammaf > 0");
  if (sweeps < 1) throw std::invalid_argument("SqaParams: sweeps must be >= 1");
}

double gamma_schedule(double u, const SqaParams& params) {
  if (u < 0.0 || u > 1.0)
    throw std::invalid_argument("gamma_schedule: progress outside [0, 1]");
  const double rest = 1.0 - u;
  return params.gammaf + (params.gamma0 - params.gammaf) * rest * rest;
}

double slice_coupling(double beta, double gamma, int slices) {
  double x = beta * gamma / slices;
  if (x <= 0) throw std::invalid_argument("slice_coupling: beta*gamma/M must be > 0");
  x = std::max(x, 1e-12);  // coth blows up, clamp the argument
  return 0.5 * std::log(1.0 / std::tanh(x));
}

namespace {

// Flattened per-spin adjacency for O(degree) flip cost. Fixed ancillas are
// redirected to a sentinel slot holding a permanent +1, so the hot loop has
// no branches on term arity.
struct FlatTerms {
  int num_spins = 0;
  std::vector<double> bias;
  std::vector<int> pair_start;
  std::vector<int> pair_nbr;
  std::vector<double> pair_val;
  std::vector<int> quad_start;
  std::vector<std::array<int, 3>> quad_others;
  std::vector<double> quad_val;

  double local_field(const std::int8_t* s, int i) const {
    double f = bias[i];
    for (int k = pair_start[i]; k < pair_start[i + 1]; ++k)
      f += pair_val[k] * s[pair_nbr[k]];
    for (int k = quad_start[i]; k < quad_start[i + 1]; ++k) {
      const auto& o = quad_others[k];
      f += quad_val[k] * s[o[0]] * s[o[1]] * s[o[2]];
    }
    return f;
  }
};

FlatTerms flatten(const PhysicalProblem& problem) {
  const int n = problem.num_spins;
  FlatTerms t;
  t.num_spins = n;
  t.bias.assign(n, 0.0);
  for (const Bias& b : problem.one_local) t.bias[b.spin] += b.value;

  std::vector<std::vector<std::pair<int, double>>> pairs(n);
  for (const PairTerm& p : problem.two_local) {
    pairs[p.a].push_back({p.b, p.value});
    pairs[p.b].push_back({p.a, p.value});
  }
  std::vector<std::vector<std::pair<std::array<int, 3>, double>>> quads(n);
  auto redirect = [n](int idx) { return idx < n ? idx : n; };
  for (const QuadTerm& q : problem.four_local) {
    for (int k = 0; k < 4; ++k) {
      if (q.spins[k] >= n) continue;
      std::array<int, 3> others{};
      int m = 0;
      for (int l = 0; l < 4; ++l)
        if (l != k) others[m++] = redirect(q.spins[l]);
      quads[q.spins[k]].push_back({others, q.value});
    }
  }
  t.pair_start.push_back(0);
  t.quad_start.push_back(0);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, v] : pairs[i]) {
      t.pair_nbr.push_back(j);
      t.pair_val.push_back(v);
    }
    for (const auto& [o, v] : quads[i]) {
      t.quad_others.push_back(o);
      t.quad_val.push_back(v);
    }
    t.pair_start.push_back(static_cast<int>(t.pair_nbr.size()));
    t.quad_start.push_back(static_cast<int>(t.quad_others.size()));
  }
  return t;
}

PhysicalProblem as_direct_physical(const LogicalProblem& problem) {
  PhysicalProblem phys;
  phys.scheme = Scheme::direct;
  phys.num_spins = problem.num_variables();
  for (const Coupler& c : problem.couplers())
    phys.two_local.push_back({c.i, c.j, c.value});
  return phys;
}

}  // namespace

struct SqaEngine::Impl {
  PhysicalProblem problem;
  FlatTerms terms;
  int n = 0;
  int m = 0;
  int stride = 0;
  double spatial_weight = 0.0;
  bool audit = false;
  Rng rng;
  std::vector<std::int8_t> spins;  // slice-major, sentinel +1 at position n
  std::vector<double> energies;
  long accepted_since_audit = 0;

  Impl(const PhysicalProblem& p, const SqaParams& params)
      : problem(p),
        terms(flatten(p)),
        n(p.num_spins),
        m(params.slices),
        stride(p.num_spins + 1),
        spatial_weight(params.beta / params.slices),
        audit(params.audit),
        rng(params.seed) {
    spins.assign(static_cast<std::size_t>(m) * stride, 1);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i)
        spins[static_cast<std::size_t>(k) * stride + i] =
            rng.next_u64() & 1 ? 1 : -1;
    energies.resize(m);
    recompute();
  }

  double full_slice_energy(const std::int8_t* s) const {
    double e = 0.0;
    for (const Bias& b : problem.one_local) e += b.value * s[b.spin];
    for (const PairTerm& t : problem.two_local) e += t.value * s[t.a] * s[t.b];
    for (const QuadTerm& t : problem.four_local) {
      int prod = 1;
      for (int idx : t.spins) prod *= s[idx < n ? idx : n];
      e += t.value * prod;
    }
    return e;
  }

  void recompute() {
    for (int k = 0; k < m; ++k)
      energies[k] = full_slice_energy(&spins[static_cast<std::size_t>(k) * stride]);
  }

  void sweep(double gamma, double beta) {
    const double jperp = slice_coupling(beta, gamma, m);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) {
        std::int8_t* slice = &spins[static_cast<std::size_t>(k) * stride];
        const std::int8_t* prev =
            &spins[static_cast<std::size_t>(k == 0 ? m - 1 : k - 1) * stride];
        const std::int8_t* next =
            &spins[static_cast<std::size_t>(k + 1 == m ? 0 : k + 1) * stride];
        const double de = -2.0 * slice[i] * terms.local_field(slice, i);
        const double ds =
            spatial_weight * de + 2.0 * jperp * slice[i] * (prev[i] + next[i]);
        if (ds > 0) {
          if (ds > 44.0) continue;  // exp(-ds) below double resolution
          if (rng.uniform() >= std::exp(-ds)) continue;
        }
        slice[i] = static_cast<std::int8_t>(-slice[i]);
        energies[k] += de;
        if (audit && ++accepted_since_audit >= 10000) {
          accepted_since_audit = 0;
          std::vector<double> tracked = energies;
          recompute();
          for (int q = 0; q < m; ++q)
            if (std::abs(tracked[q] - energies[q]) > 1e-9)
              throw std::logic_error("SqaEngine: incremental energy bookkeeping drift");
        }
      }
    }
  }
};

namespace {
const PhysicalProblem& checked(const PhysicalProblem& problem,
                               const SqaParams& params) {
  params.validate();
  problem.validate();
  return problem;
}
}  // namespace

SqaEngine::SqaEngine(const PhysicalProblem& problem, const SqaParams& params)
    : impl_(std::make_unique<Impl>(checked(problem, params), params)),
      beta_(params.beta) {}

SqaEngine::~SqaEngine() = default;
SqaEngine::SqaEngine(SqaEngine&&) noexcept = default;
SqaEngine& SqaEngine::operator=(SqaEngine&&) noexcept = default;

void SqaEngine::sweep(double gamma) { impl_->sweep(gamma, beta_); }
int SqaEngine::num_spins() const { return impl_->n; }
int SqaEngine::num_slices() const { return impl_->m; }

SpinConfig SqaEngine::slice(int k) const {
  const std::int8_t* s = &impl_->spins[static_cast<std::size_t>(k) * impl_->stride];
  return SpinConfig(s, s + impl_->n);
}

double SqaEngine::slice_energy(int k) const { return impl_->energies[k]; }
void SqaEngine::recompute_energies() { impl_->recompute(); }

SqaResult run_sqa(const PhysicalProblem& problem, const SqaParams& params,
                  double gs_energy) {
  SqaEngine engine(problem, params);
  for (long sweep = 0; sweep < params.sweeps; ++sweep) {
    const double u =
        params.sweeps > 1 ? static_cast<double>(sweep) / (params.sweeps - 1) : 0.0;
    engine.sweep(gamma_schedule(u, params));
  }
  engine.recompute_energies();

  SqaResult result;
  result.sweeps = params.sweeps;
  result.slice_energies.resize(params.slices);
  const double tol = energy_tolerance(gs_energy);
  int hits = 0;
  for (int k = 0; k < params.slices; ++k) {
    result.slice_energies[k] = engine.slice_energy(k);
    if (std::abs(result.slice_energies[k] - gs_energy) <= tol) ++hits;
  }
  result.gs_hit_fraction = static_cast<double>(hits) / params.slices;
  if (params.keep_configs) {
    result.final_slices.reserve(params.slices);
    for (int k = 0; k < params.slices; ++k)
      result.final_slices.push_back(engine.slice(k));
  }
  return result;
}

SqaResult run_sqa(const LogicalProblem& problem, const SqaParams& params,
                  double gs_energy) {
  return run_sqa(as_direct_physical(problem), params, gs_energy);
}

double success_probability(const std::vector<SqaResult>& results) {
  if (results.empty())
    throw std::invalid_argument("success_probability: no results");
  double sum = 0.0;
  for (const SqaResult& r : results) sum += r.gs_hit_fraction;
  return sum / results.size();
}

}  // namespace qabench
