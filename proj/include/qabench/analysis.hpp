#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qabench {

struct TtsPoint {
  double anneal_time = 0.0;  // T, in Monte Carlo sweeps
  double p_gs = 0.0;
  double s = 0.0;  // T * repetitions; +inf when p_gs = 0
};

struct TtsCurve {
  std::vector<TtsPoint> points;  // sorted by anneal_time
  double p_target = 0.9;
  std::string kind;  // "physical" or "logical"
};

struct FitResult {
  double m = 0.0;       // slope
  double c_fit = 0.0;   // intercept
  double r_corr = 0.0;  // Pearson coefficient of the logged data
};

// r = log(1 - p_target) / log(1 - p_gs), clamped below at 1; +inf at p_gs = 0.
double repetitions(double p_gs, double p_target);

// s = T * repetitions.
double tts(double anneal_time, double p_gs, double p_target);

TtsCurve make_tts_curve(const std::vector<std::pair<double, double>>& t_and_p,
                        double p_target, std::string kind);

// Grid minimum of s and its argmin T; ties resolve to the smallest T.
// Throws when every point is infinite.
std::pair<double, double> optimal_tts(const TtsCurve& curve);  // (s_opt, T_opt)

struct Quartiles {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double w5 = 0.0;   // 5% whisker
  double w95 = 0.0;  // 95% whisker
};

// Order statistics with linear interpolation between closest ranks.
Quartiles aggregate(std::vector<double> values);
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

// Least squares of log10(y) = m * log10(x) + c over per-size medians.
FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Elementwise s_embedded / s_direct over matched instance identifiers.
std::vector<std::pair<std::string, double>> overhead_ratio(
    const std::vector<std::pair<std::string, double>>& embedded,
    const std::vector<std::pair<std::string, double>>& direct);

double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Rank correlation with average ranks for ties.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace qabench
