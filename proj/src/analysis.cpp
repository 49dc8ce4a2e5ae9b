#include "qabench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace qabench {

double repetitions(double p_gs, double p_target) {
  if (p_gs < 0.0 || p_gs > 1.0)
    throw std::invalid_argument("repetitions: p_gs outside [0, 1]");
  if (p_target <= 0.0 || p_target >= 1.0)
    throw std::invalid_argument("repetitions: p_target outside (0, 1)");
  if (p_gs == 0.0) return std::numeric_limits<double>::infinity();
  if (p_gs == 1.0) return 1.0;
  // A fractional repetition is meaningless for a benchmark; clamp at 1.
  return std::max(1.0, std::log1p(-p_target) / std::log1p(-p_gs));
}

double tts(double anneal_time, double p_gs, double p_target) {
  return anneal_time * repetitions(p_gs, p_target);
}

TtsCurve make_tts_curve(const std::vector<std::pair<double, double>>& t_and_p,
                        double p_target, std::string kind) {
  TtsCurve curve;
  curve.p_target = p_target;
  curve.kind = std::move(kind);
  for (const auto& [t, p] : t_and_p)
    curve.points.push_back({t, p, tts(t, p, p_target)});
  std::sort(curve.points.begin(), curve.points.end(),
            [](const TtsPoint& a, const TtsPoint& b) {
              return a.anneal_time < b.anneal_time;
            });
  return curve;
}

std::pair<double, double> optimal_tts(const TtsCurve& curve) {
  if (curve.points.empty())
    throw std::invalid_argument("optimal_tts: empty curve");
  const TtsPoint* best = nullptr;
  for (const TtsPoint& p : curve.points) {
    if (!std::isfinite(p.s)) continue;
    if (best == nullptr || p.s < best->s ||
        (p.s == best->s && p.anneal_time < best->anneal_time))
      best = &p;
  }
  if (best == nullptr)
    throw std::runtime_error("optimal_tts: no finite point on the curve");
  return {best->s, best->anneal_time};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - lo;
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

Quartiles aggregate(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate: empty input");
  Quartiles q;
  q.median = quantile(values, 0.5);
  q.q1 = quantile(values, 0.25);
  q.q3 = quantile(values, 0.75);
  q.w5 = quantile(values, 0.05);
  q.w95 = quantile(values, 0.95);
  return q;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("pearson: need two same-length series");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0)
    throw std::invalid_argument("pearson: zero variance input");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  return pearson(average_ranks(xs), average_ranks(ys));
}

FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw std::invalid_argument("loglog_fit: need at least 3 matched points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw std::invalid_argument("loglog_fit: inputs must be positive and finite");
    lx.push_back(std::log10(xs[i]));
    ly.push_back(std::log10(ys[i]));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("loglog_fit: degenerate x values");
  FitResult fit;
  fit.m = sxy / sxx;
  fit.c_fit = my - fit.m * mx;
  fit.r_corr = pearson(lx, ly);
  return fit;
}

std::vector<std::pair<std::string, double>> overhead_ratio(
    const std::vector<std::pair<std::string, double>>& embedded,
    const std::vector<std::pair<std::string, double>>& direct) {
  std::map<std::string, double> direct_by_id(direct.begin(), direct.end());
  if (direct_by_id.size() != direct.size())
    throw std::invalid_argument("overhead_ratio: duplicate direct instance ids");
  std::vector<std::pair<std::string, double>> ratios;
  for (const auto& [id, s_embedded] : embedded) {
    auto it = direct_by_id.find(id);
    if (it == direct_by_id.end())
      throw std::invalid_argument("overhead_ratio: unmatched instance id " + id);
    ratios.emplace_back(id, s_embedded / it->second);
  }
  return ratios;
}

}  // namespace qabench
