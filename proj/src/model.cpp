#include "qabench/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qabench/rng.hpp"

namespace qabench {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::direct: return "direct";
    case Scheme::square: return "square";
    case Scheme::chimera: return "chimera";
    case Scheme::paqo: return "paqo";
  }
  throw std::invalid_argument("unknown scheme tag");
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "direct") return Scheme::direct;
  if (s == "square") return Scheme::square;
  if (s == "chimera") return Scheme::chimera;
  if (s == "paqo") return Scheme::paqo;
  throw std::invalid_argument("unknown scheme: " + s);
}

LogicalProblem::LogicalProblem(int n, std::vector<Coupler> couplers,
                               std::string label, std::uint64_t seed)
    : n_(n), couplers_(std::move(couplers)), label_(std::move(label)), seed_(seed) {
  if (n_ < 1) throw std::invalid_argument("LogicalProblem: n must be >= 1");
  std::sort(couplers_.begin(), couplers_.end(), [](const Coupler& a, const Coupler& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  for (std::size_t k = 0; k < couplers_.size(); ++k) {
    const Coupler& c = couplers_[k];
    if (c.i < 0 || c.i >= c.j || c.j >= n_) {
      throw std::invalid_argument("LogicalProblem: coupler (" + std::to_string(c.i) +
                                  ", " + std::to_string(c.j) +
                                  ") violates 0 <= i < j < n");
    }
    if (k > 0 && couplers_[k - 1].i == c.i && couplers_[k - 1].j == c.j) {
      throw std::invalid_argument("LogicalProblem: duplicate coupler (" +
                                  std::to_string(c.i) + ", " + std::to_string(c.j) + ")");
    }
  }
}

double LogicalProblem::coupling(int i, int j) const {
  if (i > j) std::swap(i, j);
  Coupler key{i, j, 0.0};
  auto it = std::lower_bound(couplers_.begin(), couplers_.end(), key,
                             [](const Coupler& a, const Coupler& b) {
                               return std::pair(a.i, a.j) < std::pair(b.i, b.j);
                             });
  if (it != couplers_.end() && it->i == i && it->j == j) return it->value;
  return 0.0;
}

void PhysicalProblem::validate() const {
  const int limit = num_spins + num_fixed;
  for (const Bias& b : one_local) {
    if (b.spin < 0 || b.spin >= num_spins)
      throw std::invalid_argument("PhysicalProblem: bias index out of range");
  }
  for (const PairTerm& t : two_local) {
    if (t.a < 0 || t.a >= t.b || t.b >= num_spins)
      throw std::invalid_argument("PhysicalProblem: pair term indices invalid");
  }
  for (const QuadTerm& t : four_local) {
    for (int k = 0; k < 4; ++k) {
      if (t.spins[k] < 0 || t.spins[k] >= limit)
        throw std::invalid_argument("PhysicalProblem: quad term index out of range");
      if (k > 0 && t.spins[k - 1] >= t.spins[k])
        throw std::invalid_argument("PhysicalProblem: quad term indices not sorted unique");
    }
  }
  if (scheme != Scheme::paqo && !four_local.empty())
    throw std::invalid_argument("PhysicalProblem: 4-local terms only valid for paqo");
  if ((scheme == Scheme::square || scheme == Scheme::chimera) && !one_local.empty())
    throw std::invalid_argument("PhysicalProblem: chain schemes carry no biases");
  if (scheme == Scheme::paqo && !two_local.empty())
    throw std::invalid_argument("PhysicalProblem: paqo carries no 2-local terms");
}

double energy(const LogicalProblem& problem, const SpinConfig& config) {
  if (static_cast<int>(config.size()) != problem.num_variables())
    throw std::invalid_argument("energy: config length does not match problem size");
  double e = 0.0;
  for (const Coupler& c : problem.couplers())
    e += c.value * config[c.i] * config[c.j];
  return e;
}

double energy(const PhysicalProblem& problem, const SpinConfig& config) {
  if (static_cast<int>(config.size()) != problem.num_spins)
    throw std::invalid_argument("energy: config length does not match spin count");
  double e = 0.0;
  for (const Bias& b : problem.one_local) e += b.value * config[b.spin];
  for (const PairTerm& t : problem.two_local)
    e += t.value * config[t.a] * config[t.b];
  for (const QuadTerm& t : problem.four_local) {
    int prod = 1;
    for (int s : t.spins)
      if (s < problem.num_spins) prod *= config[s];  // fixed ancillas are +1
    e += t.value * prod;
  }
  return e;
}

LogicalProblem generate_maxcut(int n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_maxcut: n must be >= 2");
  if (p <= 0.0 || p > 1.0)
    throw std::invalid_argument("generate_maxcut: p must be in (0, 1]");
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  // Round half away from zero.
  const long long num_edges = std::llround(p * static_cast<double>(total));
  if (num_edges == 0)
    throw std::invalid_argument("generate_maxcut: degenerate instance with zero edges");

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(total);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  // Partial Fisher-Yates: first num_edges entries are a uniform sample
  // without replacement.
  Rng rng(seed);
  for (long long k = 0; k < num_edges; ++k) {
    const long long r = k + static_cast<long long>(rng.next_below(total - k));
    std::swap(pairs[k], pairs[r]);
  }

  std::vector<Coupler> couplers;
  couplers.reserve(num_edges);
  for (long long k = 0; k < num_edges; ++k)
    couplers.push_back({pairs[k].first, pairs[k].second, 1.0});

  std::ostringstream label;
  label << "maxcut_p" << p << "_n" << n << "_s" << seed;
  return LogicalProblem(n, std::move(couplers), label.str(), seed);
}

LogicalProblem generate_gaussian_sk(int n, double mu, double sigma,
                                    std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_gaussian_sk: n must be >= 2");
  if (sigma <= 0.0)
    throw std::invalid_argument("generate_gaussian_sk: sigma must be > 0");
  Rng rng(seed);
  std::vector<Coupler> couplers;
  couplers.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      couplers.push_back({i, j, rng.normal(mu, sigma)});
  std::ostringstream label;
  label << "gaussian_n" << n << "_s" << seed;
  return LogicalProblem(n, std::move(couplers), label.str(), seed);
}

std::string problem_to_json_string(const LogicalProblem& problem) {
  nlohmann::json j;
  j["n"] = problem.num_variables();
  j["label"] = problem.label();
  j["seed"] = problem.seed();
  auto& arr = j["couplers"] = nlohmann::json::array();
  for (const Coupler& c : problem.couplers())
    arr.push_back({c.i, c.j, c.value});
  return j.dump(2);
}

LogicalProblem problem_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("problem parse error: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const std::string label = j.value("label", "");
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    std::vector<Coupler> couplers;
    for (const auto& entry : j.at("couplers")) {
      if (!entry.is_array() || entry.size() != 3)
        throw std::runtime_error("problem parse error: coupler entries must be [i, j, J]");
      couplers.push_back({entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>()});
    }
    return LogicalProblem(n, std::move(couplers), label, seed);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("problem parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("problem parse error: ") + e.what());
  }
}

LogicalProblem read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return problem_from_json_string(buf.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_problem(const LogicalProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write problem file: " + path);
  out << problem_to_json_string(problem) << "\n";
}

}  // namespace qabench
