#include "polarisac/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "polarisac/errors.hpp"

namespace polarisac::stats {

double Mean(std::span<const double> x) {
  if (x.empty()) {
    throw DomainError("mean of an empty sample");
  }
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double StandardError(std::span<const double> x) {
  const double mean = Mean(x);
  if (x.size() < 2) {
    return 0.0;
  }
  double ss = 0.0;
  for (double v : x) {
    ss += (v - mean) * (v - mean);
  }
  const double n = static_cast<double>(x.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

PairedTest PairedTTestGreater(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("paired test needs two samples of equal size >= 2");
  }
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff[i] = x[i] - y[i];
  }
  PairedTest test;
  test.n = static_cast<int>(diff.size());
  test.mean_difference = Mean(diff);
  const double se = StandardError(diff);
  if (se == 0.0) {
    test.t_statistic = test.mean_difference > 0.0 ? std::numeric_limits<double>::infinity()
                                                  : (test.mean_difference < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
    test.p_value = test.mean_difference > 0.0 ? 0.0 : 1.0;
    return test;
  }
  test.t_statistic = test.mean_difference / se;
  const boost::math::students_t dist(test.n - 1);
  test.p_value = boost::math::cdf(boost::math::complement(dist, test.t_statistic));
  return test;
}

std::vector<double> Ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) {
      ++j;
    }
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      ranks[order[k]] = rank;
    }
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("rank correlation needs two samples of equal size >= 2");
  }
  const std::vector<double> rx = Ranks(x);
  const std::vector<double> ry = Ranks(y);
  const double mx = Mean(rx);
  const double my = Mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    return 0.0;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace polarisac::stats
