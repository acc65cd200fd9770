#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tweetclust/hac.hpp"

namespace tweetclust {

/// Class (rows) × cluster (columns) co-occurrence counts. Row/column order is
/// the order of first appearance of each label.
struct Contingency {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> class_sizes;    // a_i
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> cluster_sizes;  // b_j
  std::int64_t total = 0;

  Eigen::Index n_classes() const { return counts.rows(); }
  Eigen::Index n_clusters() const { return counts.cols(); }
};

Contingency contingency(std::span<const int> true_labels, std::span<const int> pred_labels);

struct HomogeneityCompleteness {
  double homogeneity = 0;
  double completeness = 0;
  double v_measure = 0;
};

/// Entropies use logarithms in `log_base`; every returned score is a ratio of
/// entropies, so the base cancels.
HomogeneityCompleteness homogeneity_completeness_v(const Contingency& c,
                                                   double log_base = std::numbers::e);

double adjusted_rand_index(const Contingency& c);

enum class AmiNormalizer { max, arithmetic };

double mutual_information(const Contingency& c);
/// Exact expectation of the mutual information under the hypergeometric
/// model of random labelings with the observed marginals.
double expected_mutual_information(const Contingency& c);
double adjusted_mutual_info(const Contingency& c, AmiNormalizer normalizer = AmiNormalizer::max);
/// MI / max(H(U), H(V)); 1.0 when both entropies vanish.
double normalized_mutual_info_max(const Contingency& c);

double entropy(std::span<const std::int64_t> counts, double log_base = std::numbers::e);

/// Mean silhouette over all points; singleton-cluster points contribute 0.
/// Requires 2 <= #clusters <= n-1.
double silhouette(const DistanceMatrix& d, std::span<const int> labels);

/// All extrinsic scores at once.
struct ExtrinsicScores {
  double homogeneity = 0;
  double completeness = 0;
  double v_measure = 0;
  double ari = 0;
  double ami = 0;
};

ExtrinsicScores score_labeling(std::span<const int> true_labels, std::span<const int> pred_labels,
                               AmiNormalizer normalizer = AmiNormalizer::max);

}  // namespace tweetclust
