#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tweetclust/corpus.hpp"
#include "tweetclust/hac.hpp"
#include "tweetclust/metrics.hpp"

namespace tweetclust {

/// 0.1, 0.2, ..., 1.5.
std::vector<double> default_grid();

struct GridRow {
  double threshold = 0;
  std::size_t n_clusters = 0;  // includes the garbage pseudo-cluster, if any
  std::optional<double> homogeneity, completeness, v_measure, ari, ami;
  std::optional<double> silhouette;  // null where undefined
};

struct GridReport {
  std::vector<GridRow> rows;
  std::optional<std::size_t> chosen_supervised;    // row index, argmax V
  std::optional<std::size_t> chosen_unsupervised;  // row index, argmax silhouette
};

/// Points excluded from clustering (all-zero term rows) form one extra
/// cluster appended after the clustered points.
struct GridInput {
  const Dendrogram* tree = nullptr;           // null when fewer than 2 points are clustered
  const DistanceMatrix* distances = nullptr;
  std::size_t n_clustered = 0;                // used only when tree is null
  std::span<const int> truth;          // per clustered point, -1 = unlabeled; empty = no truth
  std::span<const int> garbage_truth;  // per garbage point
  std::size_t n_garbage = 0;
  AmiNormalizer normalizer = AmiNormalizer::max;
};

/// Cuts at each threshold and scores the labeling. Extrinsic scores use the
/// labeled points only (garbage points included, all in one cluster);
/// silhouette uses the clustered points only. Ties in the argmax go to the
/// lowest threshold.
GridReport grid_search(const GridInput& in, std::span<const double> grid);

/// Cut labels of the clustered points followed by one shared label for the
/// `n_garbage` excluded points.
std::vector<int> with_garbage(std::vector<int> labels, std::size_t n_garbage);

/// The k members with the smallest summed distance to the other members,
/// ties by index.
std::vector<std::size_t> medoids(std::span<const std::size_t> members,
                                 const std::function<double(std::size_t, std::size_t)>& dist,
                                 std::size_t k = 3);
std::vector<std::size_t> medoids(std::span<const std::size_t> members, const DistanceMatrix& d,
                                 std::size_t k = 3);

struct ClusterSummary {
  int cluster = 0;
  std::size_t size = 0;
  std::size_t first = 0;  // earliest timestamp, ties by index
  std::size_t last = 0;   // latest timestamp, ties by index
  std::vector<std::size_t> medoids;
  std::vector<std::size_t> representatives;  // first, last, medoids with duplicate texts removed
  bool single_text = false;                  // every representative has the same text
};

/// The `top` largest clusters (ties by smallest member index). Indices refer
/// to `tweets`; points labeled -1 are skipped. `dist` must accept any pair of
/// clustered indices.
std::vector<ClusterSummary> summarize_clusters(std::span<const int> labels, std::span<const Tweet> tweets,
                                               const std::function<double(std::size_t, std::size_t)>& dist,
                                               std::size_t top = 20);

/// Summaries of one model on one interval, with the texts they point to.
struct SummarySet {
  std::string model;
  std::string interval;
  std::vector<ClusterSummary> summaries;
  std::vector<Tweet> tweets;  // indexed by the summaries
};

/// Pools the multi-text summaries of all sets in a seeded random order, with
/// each (model, interval) replaced by an alias. Writes the pool and the alias
/// key as JSONL; returns the number of pooled rows.
std::size_t export_eval_pool(std::span<const SummarySet> sets, std::uint64_t seed, std::ostream& pool,
                             std::ostream& decode);

void write_grid_report(const GridReport& r, std::ostream& out);
GridReport read_grid_report(std::istream& in);
/// threshold, v_measure, silhouette, clusters_per_tweet, n_clusters.
void write_figure_tsv(const GridReport& r, std::size_t n_points, std::ostream& out);

}  // namespace tweetclust
