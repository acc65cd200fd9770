#include "tweetclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "tweetclust/error.hpp"

namespace tweetclust {

namespace {

std::vector<Eigen::Index> dense_ids(std::span<const int> labels, Eigen::Index& count) {
  std::unordered_map<int, Eigen::Index> ids;
  std::vector<Eigen::Index> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(ids.emplace(l, static_cast<Eigen::Index>(ids.size())).first->second);
  count = static_cast<Eigen::Index>(ids.size());
  return out;
}

double choose2(std::int64_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

double entropy_of(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>& sizes, std::int64_t total) {
  double h = 0;
  for (Eigen::Index i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) continue;
    const double p = static_cast<double>(sizes[i]) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

bool identical_trivial(const Contingency& c) {
  return c.n_classes() == c.n_clusters() && (c.n_classes() == 1 || c.n_classes() == c.total);
}

}  // namespace

Contingency contingency(std::span<const int> true_labels, std::span<const int> pred_labels) {
  if (true_labels.size() != pred_labels.size()) throw Error("label arrays differ in length");
  if (true_labels.empty()) throw Error("cannot score an empty labeling");
  Eigen::Index r = 0, k = 0;
  const auto rows = dense_ids(true_labels, r);
  const auto cols = dense_ids(pred_labels, k);
  Contingency c;
  c.counts.setZero(r, k);
  for (std::size_t i = 0; i < rows.size(); ++i) ++c.counts(rows[i], cols[i]);
  c.class_sizes = c.counts.rowwise().sum();
  c.cluster_sizes = c.counts.colwise().sum().transpose();
  c.total = static_cast<std::int64_t>(true_labels.size());
  return c;
}

double entropy(std::span<const std::int64_t> counts, double log_base) {
  std::int64_t total = 0;
  for (auto v : counts) total += v;
  if (total == 0) return 0.0;
  double h = 0;
  for (auto v : counts) {
    if (v == 0) continue;
    const double p = static_cast<double>(v) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h / std::log(log_base);
}

HomogeneityCompleteness homogeneity_completeness_v(const Contingency& c, double log_base) {
  const double scale = 1.0 / std::log(log_base);
  const double n = static_cast<double>(c.total);
  const double h_c = entropy_of(c.class_sizes, c.total) * scale;
  const double h_k = entropy_of(c.cluster_sizes, c.total) * scale;
  double h_c_given_k = 0, h_k_given_c = 0;
  for (Eigen::Index i = 0; i < c.n_classes(); ++i) {
    for (Eigen::Index j = 0; j < c.n_clusters(); ++j) {
      const auto nij = c.counts(i, j);
      if (nij == 0) continue;
      const double p = static_cast<double>(nij) / n;
      h_c_given_k -= p * std::log(static_cast<double>(nij) / static_cast<double>(c.cluster_sizes[j])) * scale;
      h_k_given_c -= p * std::log(static_cast<double>(nij) / static_cast<double>(c.class_sizes[i])) * scale;
    }
  }
  HomogeneityCompleteness out;
  out.homogeneity = h_c == 0.0 ? 1.0 : 1.0 - h_c_given_k / h_c;
  out.completeness = h_k == 0.0 ? 1.0 : 1.0 - h_k_given_c / h_k;
  const double sum = out.homogeneity + out.completeness;
  out.v_measure = sum == 0.0 ? 0.0 : 2.0 * out.homogeneity * out.completeness / sum;
  return out;
}

double adjusted_rand_index(const Contingency& c) {
  if (c.total < 2) throw Error("adjusted Rand index needs at least 2 items");
  double index = 0, sum_a = 0, sum_b = 0;
  for (Eigen::Index i = 0; i < c.counts.size(); ++i) index += choose2(c.counts.data()[i]);
  for (Eigen::Index i = 0; i < c.class_sizes.size(); ++i) sum_a += choose2(c.class_sizes[i]);
  for (Eigen::Index j = 0; j < c.cluster_sizes.size(); ++j) sum_b += choose2(c.cluster_sizes[j]);
  const double expected = sum_a * sum_b / choose2(c.total);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return index == expected ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

double mutual_information(const Contingency& c) {
  const double n = static_cast<double>(c.total);
  double mi = 0;
  for (Eigen::Index i = 0; i < c.n_classes(); ++i) {
    for (Eigen::Index j = 0; j < c.n_clusters(); ++j) {
      const auto nij = c.counts(i, j);
      if (nij == 0) continue;
      const double a = static_cast<double>(c.class_sizes[i]), b = static_cast<double>(c.cluster_sizes[j]);
      mi += static_cast<double>(nij) / n * std::log(n * static_cast<double>(nij) / (a * b));
    }
  }
  return std::max(mi, 0.0);
}

double expected_mutual_information(const Contingency& c) {
  const std::int64_t total = c.total;
  const double n = static_cast<double>(total);
  std::vector<double> log_fact(static_cast<std::size_t>(total) + 1, 0.0);
  for (std::int64_t k = 2; k <= total; ++k)
    log_fact[static_cast<std::size_t>(k)] = log_fact[static_cast<std::size_t>(k - 1)] + std::log(static_cast<double>(k));
  const auto lf = [&](std::int64_t k) { return log_fact[static_cast<std::size_t>(k)]; };

  double emi = 0;
  for (Eigen::Index i = 0; i < c.n_classes(); ++i) {
    const std::int64_t a = c.class_sizes[i];
    for (Eigen::Index j = 0; j < c.n_clusters(); ++j) {
      const std::int64_t b = c.cluster_sizes[j];
      const double fixed = lf(a) + lf(b) + lf(total - a) + lf(total - b) - lf(total);
      // n_ij = 0 contributes nothing.
      for (std::int64_t nij = std::max<std::int64_t>(1, a + b - total); nij <= std::min(a, b); ++nij) {
        const double log_p = fixed - lf(nij) - lf(a - nij) - lf(b - nij) - lf(total - a - b + nij);
        const double term = static_cast<double>(nij) / n *
                            std::log(n * static_cast<double>(nij) / (static_cast<double>(a) * static_cast<double>(b)));
        emi += term * std::exp(log_p);
      }
    }
  }
  return emi;
}

double adjusted_mutual_info(const Contingency& c, AmiNormalizer normalizer) {
  if (c.total < 2) throw Error("adjusted mutual information needs at least 2 items");
  if (identical_trivial(c)) return 1.0;
  const double mi = mutual_information(c);
  const double emi = expected_mutual_information(c);
  const double hu = entropy_of(c.class_sizes, c.total);
  const double hv = entropy_of(c.cluster_sizes, c.total);
  const double norm = normalizer == AmiNormalizer::max ? std::max(hu, hv) : 0.5 * (hu + hv);
  const double denom = norm - emi;
  if (std::abs(denom) <= 1e-15 * std::max(1.0, norm)) return 0.0;
  return (mi - emi) / denom;
}

double normalized_mutual_info_max(const Contingency& c) {
  const double hu = entropy_of(c.class_sizes, c.total);
  const double hv = entropy_of(c.cluster_sizes, c.total);
  const double norm = std::max(hu, hv);
  if (norm == 0.0) return 1.0;
  return mutual_information(c) / norm;
}

double silhouette(const DistanceMatrix& d, std::span<const int> labels) {
  const std::size_t n = d.size();
  if (labels.size() != n) throw Error("silhouette: label count does not match the distance matrix");
  Eigen::Index k = 0;
  const auto ids = dense_ids(labels, k);
  if (k < 2 || static_cast<std::size_t>(k) > n - 1) throw Error("silhouette undefined");

  std::vector<std::size_t> size(static_cast<std::size_t>(k), 0);
  for (auto id : ids) ++size[static_cast<std::size_t>(id)];

  double total = 0;
  std::vector<double> sums(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(ids[i]);
    if (size[own] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sums[static_cast<std::size_t>(ids[j])] += d(i, j);
    const double a = sums[own] / static_cast<double>(size[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sums.size(); ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(size[c]));
    const double m = std::max(a, b);
    if (m > 0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

ExtrinsicScores score_labeling(std::span<const int> true_labels, std::span<const int> pred_labels,
                               AmiNormalizer normalizer) {
  const auto c = contingency(true_labels, pred_labels);
  const auto hcv = homogeneity_completeness_v(c);
  ExtrinsicScores s;
  s.homogeneity = hcv.homogeneity;
  s.completeness = hcv.completeness;
  s.v_measure = hcv.v_measure;
  if (c.total >= 2) {
    s.ari = adjusted_rand_index(c);
    s.ami = adjusted_mutual_info(c, normalizer);
  } else {
    s.ari = s.ami = 1.0;
  }
  return s;
}

}  // namespace tweetclust
