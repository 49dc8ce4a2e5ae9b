// Command-line front end: instance generation, embedding, SQA runs, sweeps,
// TTS analysis, exact spectra, and the parity-constraint-strength map.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qabench/analysis.hpp"
#include "qabench/decode.hpp"
#include "qabench/embed.hpp"
#include "qabench/harness.hpp"
#include "qabench/model.hpp"
#include "qabench/oracle.hpp"
#include "qabench/rng.hpp"
#include "qabench/sqa.hpp"

namespace {

using namespace qabench;

struct SweepOptions {
  std::vector<int> sizes{5, 6, 7, 8, 9};
  std::vector<std::string> types{"maxcut"};
  double p = 0.5;
  std::vector<std::string> schemes{"direct", "square", "chimera", "paqo"};
  std::vector<long> times;
  int instances = 10;
  int reps = 30;
  int slices = 1024;
  double beta = 1024.0;
  double gamma0 = 0.5;
  double gammaf = 0.001;
  double omega = 0.0;
  double gamma_sum = 1.1;
  double paqo_omega_scale = 1.0 / 50.0;
  int chimera_c = 4;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out = "out";
  bool resume = false;
  bool prune = false;
};

void add_sweep_flags(CLI::App* cmd, SweepOptions& o) {
  cmd->add_option("--sizes", o.sizes, "logical problem sizes")
      ->envname("QABENCH_SIZES");
  cmd->add_option("--type", o.types, "instance families: maxcut, gaussian")
      ->envname("QABENCH_TYPE");
  cmd->add_option("--p", o.p, "maxcut edge density")->envname("QABENCH_P");
  cmd->add_option("--schemes", o.schemes,
                  "subset of direct, square, chimera, paqo")
      ->envname("QABENCH_SCHEMES");
  cmd->add_option("--times", o.times,
                  "anneal times in sweeps (default: 29 log-spaced in [5, 28000])")
      ->envname("QABENCH_TIMES");
  cmd->add_option("--instances", o.instances, "instances per size")
      ->envname("QABENCH_INSTANCES");
  cmd->add_option("--reps", o.reps, "repetitions per (instance, scheme, T)")
      ->envname("QABENCH_REPS");
  cmd->add_option("--slices", o.slices, "Trotter slices")->envname("QABENCH_SLICES");
  cmd->add_option("--beta", o.beta, "inverse temperature")->envname("QABENCH_BETA");
  cmd->add_option("--gamma0", o.gamma0, "initial transverse field")
      ->envname("QABENCH_GAMMA0");
  cmd->add_option("--gammaf", o.gammaf, "final transverse field")
      ->envname("QABENCH_GAMMAF");
  cmd->add_option("--omega", o.omega, "constant constraint offset for chains")
      ->envname("QABENCH_OMEGA");
  cmd->add_option("--gamma-sum", o.gamma_sum, "sum-constraint prefactor")
      ->envname("QABENCH_GAMMA_SUM");
  cmd->add_option("--paqo-omega-scale", o.paqo_omega_scale,
                  "parity constraint offset as a fraction of n^2")
      ->envname("QABENCH_PAQO_OMEGA_SCALE");
  cmd->add_option("--c", o.chimera_c, "chimera half-cell size")
      ->envname("QABENCH_C");
  cmd->add_option("--seed", o.seed, "master seed")->envname("QABENCH_SEED");
  cmd->add_option("--workers", o.workers, "worker threads")
      ->envname("QABENCH_WORKERS");
  cmd->add_option("--out", o.out, "output directory")->envname("QABENCH_OUT");
  cmd->add_flag("--resume", o.resume, "skip already-persisted records")
      ->envname("QABENCH_RESUME");
  cmd->add_flag("--prune", o.prune, "drop small-n/long-T tercile combinations")
      ->envname("QABENCH_PRUNE");
}

ExperimentPlan plan_from(const SweepOptions& o) {
  ExperimentPlan plan;
  plan.sizes = o.sizes;
  for (const std::string& t : o.types) plan.kinds.push_back({t, o.p});
  plan.instances_per_size = o.instances;
  for (const std::string& s : o.schemes)
    plan.schemes.push_back(scheme_from_string(s));
  plan.anneal_times = o.times.empty() ? log_spaced_times(5, 28000, 29) : o.times;
  plan.repetitions = o.reps;
  plan.sqa.slices = o.slices;
  plan.sqa.beta = o.beta;
  plan.sqa.gamma0 = o.gamma0;
  plan.sqa.gammaf = o.gammaf;
  plan.prune = o.prune;
  plan.chimera_c = o.chimera_c;
  plan.chain_omega = o.omega;
  plan.paqo_omega_scale = o.paqo_omega_scale;
  plan.gamma_sum = o.gamma_sum;
  plan.master_seed = o.seed;
  return plan;
}

int cmd_gen(const std::string& type, int n, double p, std::uint64_t seed,
            const std::string& out) {
  LogicalProblem problem =
      type == "maxcut" ? generate_maxcut(n, p, seed)
                       : generate_gaussian_sk(n, 0.0, 1.0, seed);
  write_problem(problem, out);
  std::cout << "wrote " << out << " (" << problem.label() << ", "
            << problem.couplers().size() << " couplers)\n";
  return 0;
}

int cmd_embed(const std::string& in, const std::string& scheme_name, int c,
              double omega, double gamma, const std::string& out) {
  const LogicalProblem problem = read_problem(in);
  const Scheme scheme = scheme_from_string(scheme_name);
  auto [physical, map] = [&] {
    switch (scheme) {
      case Scheme::square:
        return embed_square(problem, omega, gamma);
      case Scheme::chimera:
        return embed_chimera(problem, c, omega, gamma);
      case Scheme::paqo:
        return embed_paqo(problem, omega, gamma);
      default:
        throw CLI::ValidationError("--scheme", "direct needs no embedding");
    }
  }();
  const ValidationReport report = validate_embedding(map, physical, problem);
  write_embedding(map, physical, out);
  std::cout << "wrote " << out << ": " << physical.num_spins << " spins, "
            << physical.two_local.size() << " pair terms, "
            << physical.four_local.size() << " plaquettes, validation "
            << (report.ok ? "ok" : "FAILED") << "\n";
  for (const std::string& v : report.violations) std::cerr << "  " << v << "\n";
  return report.ok ? 0 : 1;
}

int cmd_run(const SweepOptions& o, const std::string& instance_file,
            const std::string& scheme_name, long anneal_time, int rep) {
  ExperimentPlan plan = plan_from(o);
  const LogicalProblem problem = read_problem(instance_file);
  WorkItem item;
  item.instance = problem.label().empty() ? instance_file : problem.label();
  item.kind = {"file", 0.0};
  item.n = problem.num_variables();
  item.scheme = scheme_from_string(scheme_name);
  item.anneal_time = anneal_time;
  item.rep = rep;
  item.seed = derive_seed(plan.master_seed, item.key());

  // Mirror execute_item, but on the explicit instance from disk.
  SqaParams params = plan.sqa;
  params.sweeps = anneal_time;
  params.seed = item.seed;
  const GroundState gs = brute_force_gs(problem);
  RunRecord record;
  record.instance = item.instance;
  record.family = "file";
  record.n = item.n;
  record.scheme = scheme_name;
  record.anneal_time = anneal_time;
  record.rep = rep;
  record.seed = item.seed;
  if (item.scheme == Scheme::direct) {
    const SqaResult result = run_sqa(problem, params, gs.energy);
    record.p_gs_phys = record.p_gs_log = result.gs_hit_fraction;
  } else {
    auto [physical, map] = [&] {
      if (item.scheme == Scheme::square)
        return embed_square(problem, plan.chain_omega, plan.gamma_sum);
      if (item.scheme == Scheme::chimera)
        return embed_chimera(problem, plan.chimera_c, plan.chain_omega,
                             plan.gamma_sum);
      return embed_paqo(problem, plan.paqo_omega_scale * item.n * item.n,
                        plan.gamma_sum);
    }();
    const double phys_gs = physical_gs_energy(map, physical, gs.energy);
    params.keep_configs = true;
    const SqaResult result = run_sqa(physical, params, phys_gs);
    record.p_gs_phys = result.gs_hit_fraction;
    int hits = 0;
    const double tol = energy_tolerance(gs.energy);
    for (const SpinConfig& slice : result.final_slices)
      if (energy(problem, decode(slice, map)) <= gs.energy + tol) ++hits;
    record.p_gs_log = static_cast<double>(hits) / result.final_slices.size();
  }
  std::cout << record_to_jsonl(record) << "\n";
  return 0;
}

int cmd_sweep(const SweepOptions& o) {
  const ExperimentPlan plan = plan_from(o);
  std::filesystem::create_directories(o.out);
  const std::string jsonl = (std::filesystem::path(o.out) / "records.jsonl").string();
  std::size_t done = 0;
  const std::size_t total = plan_grid(plan).size();
  const auto records = execute_plan(plan, o.workers, jsonl, o.resume,
                                    [&](const RunRecord&) {
                                      if (++done % 500 == 0)
                                        std::cerr << done << "/" << total << "\n";
                                    });
  std::cout << "wrote " << records.size() << " records to " << jsonl << "\n";
  return 0;
}

int cmd_analyze(const std::string& records_file, double p_target,
                const std::string& out) {
  const SummaryBundle bundle = summarize(read_records(records_file), p_target);
  write_summary(bundle, out);
  std::cout << "wrote " << bundle.instances.size() << " instance summaries, "
            << bundle.aggregates.size() << " aggregates, " << bundle.fits.size()
            << " fit rows to " << out << "\n";
  return 0;
}

int cmd_fit(const std::string& records_file, double p_target) {
  const SummaryBundle bundle = summarize(read_records(records_file), p_target);
  std::printf("family,p,scheme,sizes_used,m_log,c_log,r_log\n");
  for (const FitRow& f : bundle.fits) {
    if (f.available)
      std::printf("%s,%g,%s,%d,%.4f,%.4f,%.4f\n", f.family.c_str(), f.p,
                  f.scheme.c_str(), f.sizes_used, f.logical.m, f.logical.c_fit,
                  f.logical.r_corr);
    else
      std::printf("%s,%g,%s,%d,,,\n", f.family.c_str(), f.p, f.scheme.c_str(),
                  f.sizes_used);
  }
  return 0;
}

int cmd_spectrum(const std::string& instance_file, bool demo, double gamma0,
                 std::vector<double> fields, int grid, const std::string& out) {
  LogicalProblem problem = demo ? avoided_crossing_demo().problem
                                : read_problem(instance_file);
  if (demo) {
    const AvoidedCrossingDemo d = avoided_crossing_demo();
    fields = d.fields;
    gamma0 = d.gamma0;
  }
  std::vector<double> s_grid;
  for (int k = 0; k < grid; ++k)
    s_grid.push_back(static_cast<double>(k) / (grid - 1));
  const SpectrumResult spec = ed_spectrum(problem, fields, gamma0, s_grid);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out);
  const std::size_t levels = std::min<std::size_t>(8, spec.eigenvalues[0].size());
  os << "t";
  for (std::size_t l = 0; l < levels; ++l) os << ",E" << l;
  os << ",gap";
  for (int b = 0; b < 8; ++b) os << ",p" << b;
  os << "\n";
  for (std::size_t g = 0; g < spec.s_grid.size(); ++g) {
    os << spec.s_grid[g];
    for (std::size_t l = 0; l < levels; ++l) os << "," << spec.eigenvalues[g][l];
    os << "," << spec.gap[g];
    // Top-8 by final ground-state weight: emit the 8 largest at the last point.
    std::vector<std::size_t> order(spec.gs_probabilities[g].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(),
                      order.begin() + std::min<std::size_t>(8, order.size()),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        return spec.gs_probabilities[g][a] >
                               spec.gs_probabilities[g][b];
                      });
    for (std::size_t i = 0; i < 8; ++i)
      os << "," << (i < order.size() ? spec.gs_probabilities[g][order[i]] : 0.0);
    os << "\n";
  }
  const auto [t_star, gap] = min_gap(spec);
  std::cout << "wrote " << out << "; min gap " << gap << " at t=" << t_star << "\n";
  return 0;
}

int cmd_constraint_map(int n, const std::string& out) {
  const std::vector<ConstraintMapEntry> entries = min_constraint_map(n);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out);
  os << "na,nb,nc,tile_i,tile_j,min_strength_over_n2\n";
  for (const ConstraintMapEntry& e : entries)
    os << e.na << "," << e.nb << "," << e.nc << "," << e.tile_i << "," << e.tile_j
       << "," << e.min_strength_over_n2 << "\n";
  std::cout << "wrote " << entries.size() << " grid points to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding-overhead benchmark for simulated quantum annealing"};
  app.require_subcommand(1);

  std::string type = "maxcut", in, out, scheme = "square", records;
  int n = 10, rep = 0, c = 4, grid = 201, map_n = 9;
  long anneal_time = 1000;
  double p = 0.5, omega = 0.0, gamma = 1.1, p_target = 0.9, gamma0 = 1.0;
  std::uint64_t seed = 1;
  bool demo = false;
  std::vector<double> fields;
  SweepOptions sweep_opts;

  auto* gen = app.add_subcommand("gen", "generate a logical instance");
  gen->add_option("--type", type, "maxcut or gaussian")->envname("QABENCH_TYPE");
  gen->add_option("--n", n, "problem size")->required();
  gen->add_option("--p", p, "maxcut edge density")->envname("QABENCH_P");
  gen->add_option("--seed", seed, "instance seed")->envname("QABENCH_SEED");
  gen->add_option("--out", out, "output JSON file")->required();

  auto* emb = app.add_subcommand("embed", "embed an instance file");
  emb->add_option("input", in, "instance JSON file")->required();
  emb->add_option("--scheme", scheme, "square, chimera, or paqo")->required();
  emb->add_option("--c", c, "chimera half-cell size")->envname("QABENCH_C");
  emb->add_option("--omega", omega, "constraint offset")->envname("QABENCH_OMEGA");
  emb->add_option("--gamma-sum", gamma, "sum-constraint prefactor")
      ->envname("QABENCH_GAMMA_SUM");
  emb->add_option("--out", out, "output JSON file")->required();

  auto* run = app.add_subcommand("run", "execute a single work item");
  run->add_option("input", in, "instance JSON file")->required();
  run->add_option("--scheme", scheme, "direct, square, chimera, or paqo");
  run->add_option("-T,--time", anneal_time, "anneal time in sweeps");
  run->add_option("--rep", rep, "repetition index");
  add_sweep_flags(run, sweep_opts);

  auto* sweep = app.add_subcommand("sweep", "execute a full experiment plan");
  add_sweep_flags(sweep, sweep_opts);

  auto* analyze = app.add_subcommand("analyze", "summarize a JSONL record file");
  analyze->add_option("records", records, "records.jsonl")->required();
  analyze->add_option("--p-target", p_target, "TTS target probability")
      ->envname("QABENCH_P_TARGET");
  analyze->add_option("--out", out, "output directory")->required();

  auto* fit = app.add_subcommand("fit", "print overhead fit rows");
  fit->add_option("records", records, "records.jsonl")->required();
  fit->add_option("--p-target", p_target, "TTS target probability");

  auto* spectrum = app.add_subcommand("spectrum", "exact anneal spectrum CSV");
  spectrum->add_option("input", in, "instance JSON file");
  spectrum->add_flag("--demo", demo, "use the built-in avoided-crossing demo");
  spectrum->add_option("--gamma0", gamma0, "transverse field scale");
  spectrum->add_option("--fields", fields, "longitudinal fields");
  spectrum->add_option("--grid", grid, "number of t grid points");
  spectrum->add_option("--out", out, "output CSV file")->required();

  auto* cmap = app.add_subcommand("constraint-map",
                                  "minimal parity constraint strength map CSV");
  cmap->add_option("--n", map_n, "total size N of the three-group instance");
  cmap->add_option("--out", out, "output CSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(type, n, p, seed, out);
    if (emb->parsed()) return cmd_embed(in, scheme, c, omega, gamma, out);
    if (run->parsed()) return cmd_run(sweep_opts, in, scheme, anneal_time, rep);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (analyze->parsed()) return cmd_analyze(records, p_target, out);
    if (fit->parsed()) return cmd_fit(records, p_target);
    if (spectrum->parsed())
      return cmd_spectrum(in, demo, gamma0, fields, grid, out);
    if (cmap->parsed()) return cmd_constraint_map(map_n, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
