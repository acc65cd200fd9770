#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tweetclust/error.hpp"
#include "tweetclust/parallel.hpp"

namespace tweetclust {

enum class Metric { euclidean, manhattan, cosine };
enum class Linkage { single, complete, average, weighted };

std::string_view to_string(Metric m);
std::string_view to_string(Linkage m);
Metric parse_metric(std::string_view s);
Linkage parse_linkage(std::string_view s);

inline constexpr Metric kAllMetrics[] = {Metric::euclidean, Metric::manhattan, Metric::cosine};
inline constexpr Linkage kAllLinkages[] = {Linkage::single, Linkage::complete, Linkage::average,
                                           Linkage::weighted};

/// Condensed (upper triangle, row-major) symmetric distance matrix.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<double> condensed, Metric metric = Metric::euclidean);
  /// All-zero matrix of size n.
  explicit DistanceMatrix(std::size_t n, Metric metric = Metric::euclidean);

  std::size_t size() const { return n_; }
  Metric metric() const { return metric_; }
  std::span<const double> condensed() const { return values_; }

  static std::size_t index(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return n * i - i * (i + 1) / 2 + (j - i - 1);
  }
  double operator()(std::size_t i, std::size_t j) const {
    return i == j ? 0.0 : values_[index(n_, i, j)];
  }
  double& at(std::size_t i, std::size_t j) { return values_[index(n_, i, j)]; }

  /// Restriction to the given points, in the given order.
  DistanceMatrix subset(std::span<const std::size_t> points) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  Metric metric_ = Metric::euclidean;
};

/// Pairwise row distances. Cosine rejects zero-norm rows, naming them.
template <typename Derived>
DistanceMatrix pairwise_distances(const Eigen::MatrixBase<Derived>& rows, Metric metric) {
  const auto n = static_cast<std::size_t>(rows.rows());
  if (n < 2) throw Error("pairwise_distances needs at least 2 rows");
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x = rows.template cast<double>();
  Eigen::VectorXd norms;
  if (metric == Metric::cosine) {
    norms = x.rowwise().norm();
    std::string bad;
    for (std::size_t i = 0; i < n; ++i)
      if (norms[static_cast<Eigen::Index>(i)] == 0.0) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
    if (!bad.empty()) throw Error("cosine distance undefined for zero-norm rows: " + bad);
  }
  std::vector<double> d(n * (n - 1) / 2);
  parallel_for(n, [&](std::size_t i) {
    const auto a = x.row(static_cast<Eigen::Index>(i));
    std::size_t k = DistanceMatrix::index(n, i, i + 1);
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const auto b = x.row(static_cast<Eigen::Index>(j));
      switch (metric) {
        case Metric::euclidean: d[k] = (a - b).norm(); break;
        case Metric::manhattan: d[k] = (a - b).cwiseAbs().sum(); break;
        case Metric::cosine: {
          const double c = a.dot(b) / (norms[static_cast<Eigen::Index>(i)] * norms[static_cast<Eigen::Index>(j)]);
          d[k] = std::max(0.0, 1.0 - c);
          break;
        }
      }
    }
  }, 16);
  return DistanceMatrix(n, std::move(d), metric);
}

struct Merge {
  std::size_t left = 0;   // smaller cluster id
  std::size_t right = 0;  // larger cluster id
  double height = 0.0;
  std::size_t size = 0;
  bool operator==(const Merge&) const = default;
};

/// n-1 merges sorted by height. Leaves are 0..n-1; merge k creates id n+k.
struct Dendrogram {
  std::size_t n = 0;
  std::vector<Merge> merges;
};

/// Agglomerative clustering via the nearest-neighbour chain algorithm with
/// Lance-Williams updates; O(n²) time and memory.
Dendrogram linkage(const DistanceMatrix& d, Linkage method);

/// Height of the lowest merge joining each pair, condensed like DistanceMatrix.
std::vector<double> cophenetic_distances(const Dendrogram& tree);

/// Pearson correlation of original vs cophenetic distances (two-pass).
double cophenetic_corr(const DistanceMatrix& d, const Dendrogram& tree);
/// Same quantity accumulated in one streaming pass over the merges
/// (Welford co-moments), never materializing the cophenetic matrix.
double cophenetic_corr_streaming(const DistanceMatrix& d, const Dendrogram& tree);

/// Flat labels: leaves share a label iff their cophenetic distance is
/// <= threshold. Labels are 0..k-1 in order of first appearance.
std::vector<int> cut(const Dendrogram& tree, double threshold);

/// One merge per line: "left right height size" with 17 significant digits.
void write_dendrogram(const Dendrogram& tree, std::ostream& out);
Dendrogram read_dendrogram(std::istream& in);

}  // namespace tweetclust
