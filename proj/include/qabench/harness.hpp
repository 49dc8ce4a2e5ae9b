#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qabench/analysis.hpp"
#include "qabench/decode.hpp"
#include "qabench/embed.hpp"
#include "qabench/model.hpp"
#include "qabench/sqa.hpp"

namespace qabench {

struct InstanceKind {
  std::string family;  // "maxcut" or "gaussian"
  double p = 1.0;      // edge density (maxcut only)
};

std::string instance_id(const InstanceKind& kind, int n, int index);

struct ExperimentPlan {
  std::vector<int> sizes;
  std::vector<InstanceKind> kinds;
  int instances_per_size = 10;
  std::vector<Scheme> schemes;
  std::vector<long> anneal_times;  // strictly increasing
  int repetitions = 30;
  SqaParams sqa;  // template; sweeps and seed are set per item
  bool prune = false;
  int chimera_c = 4;
  double chain_omega = 0.0;
  double paqo_omega_scale = 1.0 / 50.0;  // omega = scale * n^2
  double gamma_sum = 1.1;
  double p_target = 0.9;
  std::uint64_t master_seed = 1;

  void validate() const;
};

struct WorkItem {
  std::string instance;
  InstanceKind kind;
  int n = 0;
  int instance_index = 0;
  Scheme scheme = Scheme::direct;
  long anneal_time = 0;
  int rep = 0;
  std::uint64_t seed = 0;  // derived from (master seed, item key)

  std::string key() const;  // unique textual key
};

struct RunRecord {
  std::string instance;
  std::string family;
  double p = 1.0;
  int n = 0;
  std::string scheme;
  long anneal_time = 0;
  int rep = 0;
  double p_gs_phys = 0.0;
  double p_gs_log = 0.0;
  double wall_ms = 0.0;  // diagnostics only, excluded from equality
  std::uint64_t seed = 0;
  bool error = false;
  std::string message;

  std::string key() const;
};

bool same_outcome(const RunRecord& a, const RunRecord& b);  // ignores wall_ms

// Cartesian product of the plan dimensions minus pruned combinations. The
// pruning rule drops (n, T) cells pairing the smallest size tercile with the
// largest anneal-time tercile and vice versa.
std::vector<WorkItem> plan_grid(const ExperimentPlan& plan);

// Item count of the unpruned grid, computed arithmetically.
unsigned long long plan_count(const ExperimentPlan& plan);

LogicalProblem build_instance(const ExperimentPlan& plan, const InstanceKind& kind,
                              int n, int index);

// Fully self-contained execution of one work item.
RunRecord execute_item(const ExperimentPlan& plan, const WorkItem& item);

// Bounded worker pool; appends to the JSONL sink as records complete. With
// resume, already-persisted keys are skipped. Returns the union of loaded and
// newly executed records.
std::vector<RunRecord> execute_plan(
    const ExperimentPlan& plan, int workers, const std::string& out_jsonl,
    bool resume = false,
    const std::function<void(const RunRecord&)>& on_record = {});

std::string record_to_jsonl(const RunRecord& record);
RunRecord record_from_jsonl(const std::string& line);
std::vector<RunRecord> read_records(const std::string& path);

struct InstanceSummary {
  std::string instance;
  std::string family;
  double p = 1.0;
  int n = 0;
  std::string scheme;
  double s_phys = 0.0;
  double s_log = 0.0;
  double t_opt_phys = 0.0;
  double t_opt_log = 0.0;
  bool finite_phys = false;
  bool finite_log = false;
};

struct SizeAggregate {
  std::string family;
  double p = 1.0;
  std::string scheme;
  int n = 0;
  int total_instances = 0;
  int finite_instances = 0;
  std::optional<Quartiles> s_log;
  std::optional<Quartiles> s_phys;
};

struct FitRow {
  std::string family;
  double p = 1.0;
  std::string scheme;
  bool available = false;
  int sizes_used = 0;
  FitResult logical;
  FitResult physical;
};

struct SummaryBundle {
  double p_target = 0.9;
  std::vector<InstanceSummary> instances;
  std::vector<SizeAggregate> aggregates;
  std::vector<FitRow> fits;
  // s_L(scheme) / s_L(direct), keyed by scheme name then instance id.
  std::map<std::string, std::vector<std::pair<std::string, double>>> overhead;
};

SummaryBundle summarize(const std::vector<RunRecord>& records, double p_target = 0.9);

// instances.csv, aggregates.csv, fits.csv, overhead.csv, manifest.json
void write_summary(const SummaryBundle& bundle, const std::string& out_dir);

std::vector<long> log_spaced_times(long lo, long hi, int count);

}  // namespace qabench
