#include "qabench/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "qabench/oracle.hpp"
#include "qabench/rng.hpp"

namespace qabench {

std::string instance_id(const InstanceKind& kind, int n, int index) {
  char buf[96];
  if (kind.family == "maxcut")
    std::snprintf(buf, sizeof buf, "maxcut-p%.2f-n%02d-i%02d", kind.p, n, index);
  else
    std::snprintf(buf, sizeof buf, "%s-n%02d-i%02d", kind.family.c_str(), n, index);
  return buf;
}

void ExperimentPlan::validate() const {
  if (sizes.empty()) throw std::invalid_argument("plan: no sizes");
  for (int n : sizes)
    if (n < 2) throw std::invalid_argument("plan: size must be >= 2");
  if (kinds.empty()) throw std::invalid_argument("plan: no instance kinds");
  for (const InstanceKind& k : kinds)
    if (k.family != "maxcut" && k.family != "gaussian")
      throw std::invalid_argument("plan: unknown family " + k.family);
  if (instances_per_size < 1)
    throw std::invalid_argument("plan: instances_per_size must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("plan: no schemes");
  if (anneal_times.empty()) throw std::invalid_argument("plan: no anneal times");
  for (std::size_t i = 0; i < anneal_times.size(); ++i) {
    if (anneal_times[i] < 1)
      throw std::invalid_argument("plan: anneal times must be >= 1");
    if (i > 0 && anneal_times[i] <= anneal_times[i - 1])
      throw std::invalid_argument("plan: anneal times must be strictly increasing");
  }
  if (repetitions < 1) throw std::invalid_argument("plan: repetitions must be >= 1");
  if (chimera_c < 2) throw std::invalid_argument("plan: chimera half-cell must be >= 2");
  if (p_target <= 0 || p_target >= 1)
    throw std::invalid_argument("plan: p_target outside (0, 1)");
  SqaParams probe = sqa;
  probe.sweeps = anneal_times.front();
  probe.validate();
}

std::string WorkItem::key() const {
  return instance + "/" + to_string(scheme) + "/T" + std::to_string(anneal_time) +
         "/r" + std::to_string(rep);
}

std::string RunRecord::key() const {
  return instance + "/" + scheme + "/T" + std::to_string(anneal_time) + "/r" +
         std::to_string(rep);
}

bool same_outcome(const RunRecord& a, const RunRecord& b) {
  return a.instance == b.instance && a.family == b.family && a.p == b.p &&
         a.n == b.n && a.scheme == b.scheme && a.anneal_time == b.anneal_time &&
         a.rep == b.rep && a.p_gs_phys == b.p_gs_phys && a.p_gs_log == b.p_gs_log &&
         a.seed == b.seed && a.error == b.error && a.message == b.message;
}

namespace {

// Tercile index 0/1/2 of position idx within a list of the given length.
int tercile(std::size_t idx, std::size_t count) {
  return static_cast<int>(idx * 3 / count);
}

bool pruned(const ExperimentPlan& plan, std::size_t size_idx, std::size_t time_idx) {
  if (!plan.prune) return false;
  const int tn = tercile(size_idx, plan.sizes.size());
  const int tt = tercile(time_idx, plan.anneal_times.size());
  return (tn == 0 && tt == 2) || (tn == 2 && tt == 0);
}

}  // namespace

std::vector<WorkItem> plan_grid(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<WorkItem> items;
  for (std::size_t si = 0; si < plan.sizes.size(); ++si) {
    const int n = plan.sizes[si];
    for (const InstanceKind& kind : plan.kinds) {
      for (int inst = 0; inst < plan.instances_per_size; ++inst) {
        const std::string id = instance_id(kind, n, inst);
        for (Scheme scheme : plan.schemes) {
          for (std::size_t ti = 0; ti < plan.anneal_times.size(); ++ti) {
            if (pruned(plan, si, ti)) continue;
            for (int rep = 0; rep < plan.repetitions; ++rep) {
              WorkItem item;
              item.instance = id;
              item.kind = kind;
              item.n = n;
              item.instance_index = inst;
              item.scheme = scheme;
              item.anneal_time = plan.anneal_times[ti];
              item.rep = rep;
              item.seed = derive_seed(plan.master_seed, item.key());
              items.push_back(std::move(item));
            }
          }
        }
      }
    }
  }
  return items;
}

unsigned long long plan_count(const ExperimentPlan& plan) {
  plan.validate();
  return static_cast<unsigned long long>(plan.sizes.size()) * plan.kinds.size() *
         plan.instances_per_size * plan.schemes.size() * plan.anneal_times.size() *
         plan.repetitions;
}

LogicalProblem build_instance(const ExperimentPlan& plan, const InstanceKind& kind,
                              int n, int index) {
  const std::uint64_t seed =
      derive_seed(plan.master_seed, "inst/" + instance_id(kind, n, index));
  if (kind.family == "maxcut") return generate_maxcut(n, kind.p, seed);
  return generate_gaussian_sk(n, 0.0, 1.0, seed);
}

namespace {

std::pair<PhysicalProblem, EmbeddingMap> embed_for(const ExperimentPlan& plan,
                                                   const LogicalProblem& problem,
                                                   Scheme scheme) {
  const int n = problem.num_variables();
  switch (scheme) {
    case Scheme::square:
      return embed_square(problem, plan.chain_omega, plan.gamma_sum);
    case Scheme::chimera:
      return embed_chimera(problem, plan.chimera_c, plan.chain_omega, plan.gamma_sum);
    case Scheme::paqo:
      return embed_paqo(problem, plan.paqo_omega_scale * n * n, plan.gamma_sum);
    default:
      throw std::invalid_argument("embed_for: direct scheme has no embedding");
  }
}

struct PreparedInstance {
  LogicalProblem problem;
  GroundState gs;
};

struct PreparedEmbedding {
  PhysicalProblem physical;
  EmbeddingMap map;
  double gs_energy = 0.0;
};

RunRecord base_record(const WorkItem& item) {
  RunRecord r;
  r.instance = item.instance;
  r.family = item.kind.family;
  r.p = item.kind.p;
  r.n = item.n;
  r.scheme = to_string(item.scheme);
  r.anneal_time = item.anneal_time;
  r.rep = item.rep;
  r.seed = item.seed;
  return r;
}

RunRecord run_prepared(const ExperimentPlan& plan, const WorkItem& item,
                       const PreparedInstance& inst, const PreparedEmbedding* emb) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord record = base_record(item);
  SqaParams params = plan.sqa;
  params.sweeps = item.anneal_time;
  params.seed = item.seed;
  if (item.scheme == Scheme::direct) {
    SqaResult result = run_sqa(inst.problem, params, inst.gs.energy);
    record.p_gs_phys = result.gs_hit_fraction;
    record.p_gs_log = result.gs_hit_fraction;
  } else {
    params.keep_configs = true;
    SqaResult result = run_sqa(emb->physical, params, emb->gs_energy);
    record.p_gs_phys = result.gs_hit_fraction;
    const double tol = energy_tolerance(inst.gs.energy);
    int hits = 0;
    for (const SpinConfig& slice : result.final_slices) {
      const SpinConfig logical = decode(slice, emb->map);
      if (energy(inst.problem, logical) <= inst.gs.energy + tol) ++hits;
    }
    record.p_gs_log =
        static_cast<double>(hits) / static_cast<double>(result.final_slices.size());
  }
  record.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return record;
}

}  // namespace

RunRecord execute_item(const ExperimentPlan& plan, const WorkItem& item) {
  try {
    PreparedInstance inst{
        build_instance(plan, item.kind, item.n, item.instance_index), {}};
    inst.gs = brute_force_gs(inst.problem);
    if (item.scheme == Scheme::direct) return run_prepared(plan, item, inst, nullptr);
    PreparedEmbedding emb;
    std::tie(emb.physical, emb.map) = embed_for(plan, inst.problem, item.scheme);
    emb.gs_energy = physical_gs_energy(emb.map, emb.physical, inst.gs.energy);
    return run_prepared(plan, item, inst, &emb);
  } catch (const std::exception& e) {
    RunRecord record = base_record(item);
    record.error = true;
    record.message = e.what();
    return record;
  }
}

std::string record_to_jsonl(const RunRecord& r) {
  nlohmann::json j;
  j["instance"] = r.instance;
  j["family"] = r.family;
  j["p"] = r.p;
  j["n"] = r.n;
  j["scheme"] = r.scheme;
  j["T"] = r.anneal_time;
  j["rep"] = r.rep;
  j["p_gs_phys"] = r.p_gs_phys;
  j["p_gs_log"] = r.p_gs_log;
  j["wall_ms"] = r.wall_ms;
  j["seed"] = r.seed;
  if (r.error) {
    j["error"] = true;
    j["message"] = r.message;
  }
  return j.dump();
}

RunRecord record_from_jsonl(const std::string& line) {
  RunRecord r;
  try {
    nlohmann::json j = nlohmann::json::parse(line);
    r.instance = j.at("instance").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.p = j.at("p").get<double>();
    r.n = j.at("n").get<int>();
    r.scheme = j.at("scheme").get<std::string>();
    r.anneal_time = j.at("T").get<long>();
    r.rep = j.at("rep").get<int>();
    r.p_gs_phys = j.at("p_gs_phys").get<double>();
    r.p_gs_log = j.at("p_gs_log").get<double>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.error = j.value("error", false);
    r.message = j.value("message", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad run record line: ") + e.what());
  }
  return r;
}

std::vector<RunRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(record_from_jsonl(line));
  }
  return records;
}

std::vector<RunRecord> execute_plan(
    const ExperimentPlan& plan, int workers, const std::string& out_jsonl,
    bool resume, const std::function<void(const RunRecord&)>& on_record) {
  const std::vector<WorkItem> items = plan_grid(plan);

  std::vector<RunRecord> records;
  std::set<std::string> done;
  if (resume && std::filesystem::exists(out_jsonl)) {
    records = read_records(out_jsonl);
    for (const RunRecord& r : records) done.insert(r.key());
  }

  std::ofstream out(out_jsonl, resume ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + out_jsonl);

  // Instance preparation is shared across (scheme, T, rep); cache it so the
  // exact ground-state search runs once per instance, not once per item.
  std::mutex mtx;
  std::map<std::string, std::shared_ptr<PreparedInstance>> inst_cache;
  std::map<std::pair<std::string, int>, std::shared_ptr<PreparedEmbedding>> emb_cache;

  auto prepared_instance = [&](const WorkItem& item) {
    {
      std::lock_guard<std::mutex> lock(mtx);
      auto it = inst_cache.find(item.instance);
      if (it != inst_cache.end()) return it->second;
    }
    auto inst = std::make_shared<PreparedInstance>(PreparedInstance{
        build_instance(plan, item.kind, item.n, item.instance_index), {}});
    inst->gs = brute_force_gs(inst->problem);
    std::lock_guard<std::mutex> lock(mtx);
    return inst_cache.try_emplace(item.instance, std::move(inst)).first->second;
  };
  auto prepared_embedding = [&](const WorkItem& item, const PreparedInstance& inst) {
    const std::pair<std::string, int> key{item.instance,
                                          static_cast<int>(item.scheme)};
    {
      std::lock_guard<std::mutex> lock(mtx);
      auto it = emb_cache.find(key);
      if (it != emb_cache.end()) return it->second;
    }
    auto emb = std::make_shared<PreparedEmbedding>();
    std::tie(emb->physical, emb->map) = embed_for(plan, inst.problem, item.scheme);
    emb->gs_energy = physical_gs_energy(emb->map, emb->physical, inst.gs.energy);
    std::lock_guard<std::mutex> lock(mtx);
    return emb_cache.try_emplace(key, std::move(emb)).first->second;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= items.size()) return;
      const WorkItem& item = items[idx];
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (done.count(item.key())) continue;
      }
      RunRecord record;
      try {
        auto inst = prepared_instance(item);
        std::shared_ptr<PreparedEmbedding> emb;
        if (item.scheme != Scheme::direct) emb = prepared_embedding(item, *inst);
        record = run_prepared(plan, item, *inst, emb.get());
      } catch (const std::exception& e) {
        record = base_record(item);
        record.error = true;
        record.message = e.what();
      }
      std::lock_guard<std::mutex> lock(mtx);
      out << record_to_jsonl(record) << '\n';
      out.flush();
      records.push_back(record);
      if (on_record) on_record(record);
    }
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return records;
}

namespace {

struct CurveAccum {
  std::string family;
  double p = 1.0;
  int n = 0;
  std::map<long, std::vector<double>> p_phys;
  std::map<long, std::vector<double>> p_log;
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

SummaryBundle summarize(const std::vector<RunRecord>& records, double p_target) {
  SummaryBundle bundle;
  bundle.p_target = p_target;

  std::map<std::pair<std::string, std::string>, CurveAccum> curves;
  for (const RunRecord& r : records) {
    if (r.error) continue;
    CurveAccum& acc = curves[{r.instance, r.scheme}];
    acc.family = r.family;
    acc.p = r.p;
    acc.n = r.n;
    acc.p_phys[r.anneal_time].push_back(r.p_gs_phys);
    acc.p_log[r.anneal_time].push_back(r.p_gs_log);
  }

  for (const auto& [key, acc] : curves) {
    InstanceSummary s;
    s.instance = key.first;
    s.scheme = key.second;
    s.family = acc.family;
    s.p = acc.p;
    s.n = acc.n;

    std::vector<std::pair<double, double>> phys_pts, log_pts;
    for (const auto& [t, ps] : acc.p_phys)
      phys_pts.push_back({static_cast<double>(t), mean(ps)});
    for (const auto& [t, ps] : acc.p_log)
      log_pts.push_back({static_cast<double>(t), mean(ps)});
    const TtsCurve phys_curve = make_tts_curve(phys_pts, p_target, "physical");
    const TtsCurve log_curve = make_tts_curve(log_pts, p_target, "logical");

    const double inf = std::numeric_limits<double>::infinity();
    s.s_phys = inf;
    s.s_log = inf;
    try {
      std::tie(s.s_phys, s.t_opt_phys) = optimal_tts(phys_curve);
      s.finite_phys = true;
    } catch (const std::exception&) {
    }
    try {
      std::tie(s.s_log, s.t_opt_log) = optimal_tts(log_curve);
      s.finite_log = true;
    } catch (const std::exception&) {
    }
    // Decoding can only help: a physical ground-state hit already determines
    // the logical one, so the logical TTS is at most the physical TTS.
    if (s.s_phys < s.s_log) {
      s.s_log = s.s_phys;
      s.t_opt_log = s.t_opt_phys;
      s.finite_log = s.finite_phys;
    }
    bundle.instances.push_back(std::move(s));
  }

  // Per-size aggregates over finite instances.
  std::map<std::tuple<std::string, double, std::string, int>,
           std::vector<const InstanceSummary*>>
      by_size;
  for (const InstanceSummary& s : bundle.instances)
    by_size[{s.family, s.p, s.scheme, s.n}].push_back(&s);

  for (const auto& [key, group] : by_size) {
    SizeAggregate agg;
    std::tie(agg.family, agg.p, agg.scheme, agg.n) = key;
    agg.total_instances = static_cast<int>(group.size());
    std::vector<double> s_log, s_phys;
    for (const InstanceSummary* s : group) {
      if (s->finite_log) s_log.push_back(s->s_log);
      if (s->finite_phys) s_phys.push_back(s->s_phys);
    }
    agg.finite_instances = static_cast<int>(s_log.size());
    if (!s_log.empty()) agg.s_log = aggregate(s_log);
    if (!s_phys.empty()) agg.s_phys = aggregate(s_phys);
    bundle.aggregates.push_back(std::move(agg));
  }

  // Median s_embedded vs median s_direct across sizes, log-log. A size enters
  // the fit only when at most half of its instances are unsolved for both the
  // embedded scheme and the direct baseline.
  auto usable = [&](const SizeAggregate& a) {
    return a.finite_instances * 2 >= a.total_instances && a.finite_instances > 0;
  };
  std::map<std::tuple<std::string, double, std::string, int>, const SizeAggregate*>
      agg_index;
  for (const SizeAggregate& a : bundle.aggregates)
    agg_index[{a.family, a.p, a.scheme, a.n}] = &a;

  std::set<std::tuple<std::string, double, std::string>> fit_keys;
  for (const SizeAggregate& a : bundle.aggregates)
    if (a.scheme != "direct") fit_keys.insert({a.family, a.p, a.scheme});

  for (const auto& [family, p, scheme] : fit_keys) {
    FitRow row;
    row.family = family;
    row.p = p;
    row.scheme = scheme;
    std::vector<double> dir_log, emb_log, dir_phys, emb_phys;
    for (const SizeAggregate& a : bundle.aggregates) {
      if (a.family != family || a.p != p || a.scheme != scheme) continue;
      auto it = agg_index.find({family, p, std::string("direct"), a.n});
      if (it == agg_index.end()) continue;
      const SizeAggregate& d = *it->second;
      if (!usable(a) || !usable(d)) continue;
      dir_log.push_back(d.s_log->median);
      emb_log.push_back(a.s_log->median);
      dir_phys.push_back(d.s_phys->median);
      emb_phys.push_back(a.s_phys->median);
    }
    row.sizes_used = static_cast<int>(dir_log.size());
    try {
      row.logical = loglog_fit(dir_log, emb_log);
      row.physical = loglog_fit(dir_phys, emb_phys);
      row.available = true;
    } catch (const std::exception&) {
      row.available = false;
    }
    bundle.fits.push_back(std::move(row));
  }

  // Per-instance logical overhead ratios against the direct baseline.
  std::map<std::string, std::vector<std::pair<std::string, double>>> by_scheme;
  std::vector<std::pair<std::string, double>> direct_s;
  for (const InstanceSummary& s : bundle.instances) {
    if (!s.finite_log) continue;
    if (s.scheme == "direct")
      direct_s.push_back({s.instance, s.s_log});
    else
      by_scheme[s.scheme].push_back({s.instance, s.s_log});
  }
  std::map<std::string, double> direct_by_id(direct_s.begin(), direct_s.end());
  for (auto& [scheme, entries] : by_scheme) {
    std::vector<std::pair<std::string, double>> matched;
    for (const auto& e : entries)
      if (direct_by_id.count(e.first)) matched.push_back(e);
    if (matched.empty()) continue;
    bundle.overhead[scheme] = overhead_ratio(matched, direct_s);
  }
  return bundle;
}

void write_summary(const SummaryBundle& bundle, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  {
    std::ofstream out(dir / "instances.csv");
    out << "instance,family,p,n,scheme,s_phys,t_opt_phys,s_log,t_opt_log\n";
    for (const InstanceSummary& s : bundle.instances) {
      out << s.instance << ',' << s.family << ',' << s.p << ',' << s.n << ','
          << s.scheme << ',';
      if (s.finite_phys)
        out << s.s_phys << ',' << s.t_opt_phys << ',';
      else
        out << "inf,,";
      if (s.finite_log)
        out << s.s_log << ',' << s.t_opt_log << '\n';
      else
        out << "inf,\n";
    }
  }
  {
    std::ofstream out(dir / "aggregates.csv");
    out << "family,p,n,scheme,total,finite,"
           "s_log_median,s_log_q1,s_log_q3,s_log_w5,s_log_w95,"
           "s_phys_median,s_phys_q1,s_phys_q3,s_phys_w5,s_phys_w95\n";
    for (const SizeAggregate& a : bundle.aggregates) {
      out << a.family << ',' << a.p << ',' << a.n << ',' << a.scheme << ','
          << a.total_instances << ',' << a.finite_instances;
      auto emit = [&](const std::optional<Quartiles>& q) {
        if (q)
          out << ',' << q->median << ',' << q->q1 << ',' << q->q3 << ',' << q->w5
              << ',' << q->w95;
        else
          out << ",,,,,";
      };
      emit(a.s_log);
      emit(a.s_phys);
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "fits.csv");
    out << "family,p,scheme,sizes_used,m_log,c_log,r_log,m_phys,c_phys,r_phys\n";
    for (const FitRow& f : bundle.fits) {
      out << f.family << ',' << f.p << ',' << f.scheme << ',' << f.sizes_used;
      if (f.available)
        out << ',' << f.logical.m << ',' << f.logical.c_fit << ',' << f.logical.r_corr
            << ',' << f.physical.m << ',' << f.physical.c_fit << ','
            << f.physical.r_corr << '\n';
      else
        out << ",,,,,,\n";
    }
  }
  {
    std::ofstream out(dir / "overhead.csv");
    out << "scheme,instance,s_ratio\n";
    for (const auto& [scheme, entries] : bundle.overhead)
      for (const auto& [id, ratio] : entries)
        out << scheme << ',' << id << ',' << ratio << '\n';
  }
  {
    nlohmann::json j;
    j["p_target"] = bundle.p_target;
    j["instances"] = bundle.instances.size();
    j["aggregates"] = bundle.aggregates.size();
    j["fits"] = bundle.fits.size();
    j["files"] = {"instances.csv", "aggregates.csv", "fits.csv", "overhead.csv"};
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << '\n';
  }
}

std::vector<long> log_spaced_times(long lo, long hi, int count) {
  if (lo < 1 || hi <= lo) throw std::invalid_argument("log_spaced_times: need 1 <= lo < hi");
  if (count < 2) throw std::invalid_argument("log_spaced_times: need count >= 2");
  std::vector<long> times;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int k = 0; k < count; ++k) {
    const double u = static_cast<double>(k) / (count - 1);
    const long t = std::llround(std::exp(llo + (lhi - llo) * u));
    if (times.empty() || t > times.back()) times.push_back(t);
  }
  return times;
}

}  // namespace qabench
