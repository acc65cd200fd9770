// Library-vs-oracle comparisons shared by the unit tests and the acceptance
// gate. Each returns an empty string on agreement, else a description of the
// first mismatch.
#pragma once

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oracles.hpp"
#include "tweetclust/hac.hpp"
#include "tweetclust/metrics.hpp"
#include "tweetclust/rng.hpp"

namespace checks {

inline Eigen::MatrixXd random_points(tweetclust::Rng& rng, std::size_t n, std::size_t dims) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
  return x;
}

inline std::vector<std::vector<double>> square(const tweetclust::DistanceMatrix& d) {
  std::vector<std::vector<double>> m(d.size(), std::vector<double>(d.size(), 0.0));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) m[i][j] = d(i, j);
  return m;
}

inline std::set<std::set<int>> partition(const std::vector<int>& labels) {
  std::map<int, std::set<int>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].insert(static_cast<int>(i));
  std::set<std::set<int>> out;
  for (auto& [_, g] : groups) out.insert(g);
  return out;
}

// NN-chain vs brute-force rescan: sorted heights within `tol` and identical
// flat partitions at every grid threshold.
inline std::string linkage_vs_naive(const tweetclust::DistanceMatrix& d, tweetclust::Linkage method,
                                    const std::vector<double>& grid, double tol = 1e-9) {
  const auto tree = tweetclust::linkage(d, method);
  const auto naive = oracle::naive_linkage(square(d), std::string(tweetclust::to_string(method)));
  std::ostringstream err;
  if (tree.merges.size() != naive.size()) return "merge count differs";
  for (std::size_t k = 0; k < naive.size(); ++k) {
    if (std::abs(tree.merges[k].height - naive[k].height) > tol) {
      err << "merge " << k << ": height " << tree.merges[k].height << " vs " << naive[k].height;
      return err.str();
    }
    if (tree.merges[k].size != naive[k].a.size() + naive[k].b.size()) {
      err << "merge " << k << ": size " << tree.merges[k].size;
      return err.str();
    }
  }
  for (double t : grid) {
    if (partition(tweetclust::cut(tree, t)) != oracle::naive_cut(d.size(), naive, t)) {
      err << "flat cut differs at threshold " << t;
      return err.str();
    }
  }
  return {};
}

// Single-linkage cophenetic distance == minimax edge on the MST path.
inline std::string single_vs_mst(const tweetclust::DistanceMatrix& d) {
  const auto coph = tweetclust::cophenetic_distances(tweetclust::linkage(d, tweetclust::Linkage::single));
  const auto mm = oracle::mst_minimax(square(d));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      if (coph[tweetclust::DistanceMatrix::index(d.size(), i, j)] != mm[i][j]) {
        std::ostringstream err;
        err << "pair (" << i << "," << j << "): " << coph[tweetclust::DistanceMatrix::index(d.size(), i, j)]
            << " vs " << mm[i][j];
        return err.str();
      }
  return {};
}

// All five extrinsic scores against the literal formulas; `worst` collects the
// largest absolute difference seen.
inline std::string scores_vs_literal(const std::vector<int>& t, const std::vector<int>& p, double tol, double& worst) {
  const auto c = tweetclust::contingency(t, p);
  const auto hcv = tweetclust::homogeneity_completeness_v(c);
  const auto o = oracle::scores(t, p);
  // ARI and AMI need at least two items
  const bool pairs = t.size() >= 2;
  const double got[] = {hcv.homogeneity, hcv.completeness, hcv.v_measure,
                        pairs ? tweetclust::adjusted_rand_index(c) : 0.0,
                        pairs ? tweetclust::adjusted_mutual_info(c) : 0.0};
  const double want[] = {o.h, o.c, o.v, pairs ? o.ari : 0.0, pairs ? o.ami : 0.0};
  static const char* names[] = {"homogeneity", "completeness", "v_measure", "ari", "ami"};
  for (int k = 0; k < 5; ++k) {
    const double diff = std::abs(got[k] - want[k]);
    worst = std::max(worst, diff);
    if (!(diff <= tol)) {
      std::ostringstream err;
      err.precision(17);
      err << names[k] << " " << got[k] << " vs " << want[k] << " for n=" << t.size();
      return err.str();
    }
  }
  return {};
}

}  // namespace checks
