#pragma once

#include <span>
#include <vector>

namespace polarisac::stats {

double Mean(std::span<const double> x);

/// Sample standard deviation over sqrt(n); 0 for a single observation.
double StandardError(std::span<const double> x);

struct PairedTest {
  double mean_difference = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  int n = 0;
};

/// One-sided paired t-test of H1: mean(x - y) > 0.
PairedTest PairedTTestGreater(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based), ties share their mean rank.
std::vector<double> Ranks(std::span<const double> x);

/// Spearman rank correlation (Pearson correlation of the ranks).
double Spearman(std::span<const double> x, std::span<const double> y);

}  // namespace polarisac::stats
