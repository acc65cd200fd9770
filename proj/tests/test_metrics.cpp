#include <gtest/gtest.h>

#include <numeric>

#include "checks.hpp"
#include "tweetclust/metrics.hpp"
#include "tweetclust/rng.hpp"

using namespace tweetclust;

namespace {

using Labels = std::vector<int>;

HomogeneityCompleteness hcv(const Labels& t, const Labels& p, double base = std::numbers::e) {
  return homogeneity_completeness_v(contingency(t, p), base);
}

Labels random_labels(Rng& rng, std::size_t n, int k) {
  Labels out(n);
  for (auto& x : out) x = static_cast<int>(rng.index(static_cast<std::size_t>(k)));
  return out;
}

Labels relabel(const Labels& x, Rng& rng) {
  const int k = *std::max_element(x.begin(), x.end()) + 1;
  std::vector<int> names(static_cast<std::size_t>(k));
  std::iota(names.begin(), names.end(), 100);
  rng.shuffle(names.begin(), names.end());
  Labels out;
  for (int v : x) out.push_back(names[static_cast<std::size_t>(v)]);
  return out;
}

}  // namespace

TEST(ContingencyTest, Examples) {
  const auto c = contingency(Labels{0, 0, 1, 1}, Labels{0, 0, 1, 1});
  EXPECT_EQ(c.counts(0, 0), 2);
  EXPECT_EQ(c.counts(0, 1), 0);
  EXPECT_EQ(c.counts(1, 1), 2);
  EXPECT_TRUE((contingency(Labels{0, 0, 1, 1}, Labels{0, 1, 0, 1}).counts.array() == 1).all());
  EXPECT_THROW(contingency(Labels{0}, Labels{0, 1}), Error);
  EXPECT_THROW(contingency(Labels{}, Labels{}), Error);
}

TEST(ContingencyTest, MarginalsMatchRecount) {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_labels(rng, 60, 5), p = random_labels(rng, 60, 7);
    const auto c = contingency(t, p);
    EXPECT_EQ(c.total, 60);
    EXPECT_EQ(c.counts.sum(), 60);
    for (Eigen::Index i = 0; i < c.n_classes(); ++i) EXPECT_EQ(c.counts.row(i).sum(), c.class_sizes[i]);
    for (Eigen::Index j = 0; j < c.n_clusters(); ++j) EXPECT_EQ(c.counts.col(j).sum(), c.cluster_sizes[j]);
  }
}

TEST(HomogeneityCompletenessV, Examples) {
  auto r = hcv({0, 0, 1, 1}, {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(r.homogeneity, 1.0);
  EXPECT_DOUBLE_EQ(r.v_measure, 1.0);
  r = hcv({0, 0, 1, 1}, {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(r.homogeneity, 0.0);
  EXPECT_DOUBLE_EQ(r.completeness, 1.0);
  EXPECT_DOUBLE_EQ(r.v_measure, 0.0);
  r = hcv({0, 0, 1, 1}, {0, 0, 1, 2});
  EXPECT_NEAR(r.homogeneity, 1.0, 1e-15);
  EXPECT_NEAR(r.completeness, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.v_measure, 0.8, 1e-15);
}

TEST(AdjustedRand, Examples) {
  EXPECT_DOUBLE_EQ(adjusted_rand_index(contingency(Labels{0, 0, 1, 1}, Labels{5, 5, 3, 3})), 1.0);
  EXPECT_NEAR(adjusted_rand_index(contingency(Labels{0, 0, 1, 1}, Labels{0, 1, 0, 1})), -0.5, 1e-15);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(contingency(Labels{0, 0, 0}, Labels{1, 1, 1})), 1.0);
}

TEST(AdjustedMutualInfo, Examples) {
  EXPECT_NEAR(adjusted_mutual_info(contingency(Labels{0, 0, 1, 1, 2}, Labels{1, 1, 0, 0, 2})), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(adjusted_mutual_info(contingency(Labels{0, 1, 2}, Labels{0, 1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(adjusted_mutual_info(contingency(Labels{0, 0, 0}, Labels{0, 1, 2})), 0.0);
}

TEST(Silhouette, Examples) {
  Eigen::MatrixXd x(4, 1);
  x << 0, 0.1, 10, 10.1;
  const auto d = pairwise_distances(x, Metric::euclidean);
  EXPECT_NEAR(silhouette(d, Labels{0, 0, 1, 1}), 0.9900, 1e-4);
  // a singleton contributes 0
  Eigen::MatrixXd y(3, 1);
  y << 0, 0.1, 10;
  const double s = silhouette(pairwise_distances(y, Metric::euclidean), Labels{0, 0, 1});
  EXPECT_NEAR(s, ((1 - 0.1 / 10) + (1 - 0.1 / 9.9)) / 3, 1e-12);
  try {
    silhouette(d, Labels{0, 0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "silhouette undefined");
  }
  EXPECT_THROW(silhouette(d, Labels{0, 1, 2, 3}), Error);
}

TEST(Silhouette, ApproachesOneWithSeparation) {
  double prev = -1;
  for (double sep : {1.0, 10.0, 100.0, 1000.0}) {
    Eigen::MatrixXd x(4, 1);
    x << 0, 0.5, sep, sep + 0.5;
    const double s = silhouette(pairwise_distances(x, Metric::euclidean), Labels{0, 0, 1, 1});
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_GT(prev, 0.999);
}

TEST(Silhouette, BoundedOnRandomData) {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = pairwise_distances(checks::random_points(rng, 30, 2), Metric::manhattan);
    Labels l = random_labels(rng, 30, 4);
    l[0] = 0, l[1] = 1;
    const double s = silhouette(d, l);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Scores, ExhaustiveSmallAgainstLiteralFormulas) {
  double worst = 0;
  for (int n = 1; n <= 5; ++n) {
    const auto all = oracle::all_labelings(n);
    for (const auto& t : all)
      for (const auto& p : all) ASSERT_EQ(checks::scores_vs_literal(t, p, 1e-12, worst), "");
  }
  EXPECT_LE(worst, 1e-12);
}

// E[MI] against a brute-force average of MI over every permutation of the
// predicted labels (n <= 5).
TEST(ExpectedMutualInfo, EqualsPermutationAverage) {
  for (int n = 2; n <= 5; ++n)
    for (const auto& t : oracle::all_labelings(n))
      for (const auto& p : oracle::all_labelings(n)) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        double sum = 0;
        int count = 0;
        do {
          Labels q;
          for (int i : perm) q.push_back(p[static_cast<std::size_t>(i)]);
          sum += mutual_information(contingency(t, q));
          ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        ASSERT_NEAR(expected_mutual_information(contingency(t, p)), sum / count, 1e-12);
      }
}

TEST(Scores, IdenticalLabelingsScoreOne) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_labels(rng, 1 + rng.index(40), 1 + static_cast<int>(rng.index(6)));
    const auto s = score_labeling(t, relabel(t, rng));
    EXPECT_NEAR(s.homogeneity, 1.0, 1e-12);
    EXPECT_NEAR(s.completeness, 1.0, 1e-12);
    EXPECT_NEAR(s.v_measure, 1.0, 1e-12);
    if (t.size() >= 2) {
      EXPECT_NEAR(s.ari, 1.0, 1e-12);
      EXPECT_NEAR(s.ami, 1.0, 1e-12);
    }
  }
}

TEST(Scores, InvariantUnderRelabeling) {
  Rng rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_labels(rng, 30, 4), p = random_labels(rng, 30, 6);
    const auto a = score_labeling(t, p), b = score_labeling(relabel(t, rng), relabel(p, rng));
    EXPECT_NEAR(a.homogeneity, b.homogeneity, 1e-12);
    EXPECT_NEAR(a.completeness, b.completeness, 1e-12);
    EXPECT_NEAR(a.v_measure, b.v_measure, 1e-12);
    EXPECT_NEAR(a.ari, b.ari, 1e-12);
    EXPECT_NEAR(a.ami, b.ami, 1e-12);
  }
}

TEST(Scores, SwappingSidesSwapsHomogeneityAndCompleteness) {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_labels(rng, 25, 3), p = random_labels(rng, 25, 5);
    const auto a = hcv(t, p), b = hcv(p, t);
    EXPECT_NEAR(a.homogeneity, b.completeness, 1e-12);
    EXPECT_NEAR(a.completeness, b.homogeneity, 1e-12);
    EXPECT_NEAR(a.v_measure, b.v_measure, 1e-12);
  }
}

TEST(Scores, LogBaseCancels) {
  Rng rng(56);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_labels(rng, 40, 4), p = random_labels(rng, 40, 4);
    const auto e = hcv(t, p), two = hcv(t, p, 2.0), ten = hcv(t, p, 10.0);
    EXPECT_NEAR(e.v_measure, two.v_measure, 1e-12);
    EXPECT_NEAR(e.homogeneity, ten.homogeneity, 1e-12);
    EXPECT_NEAR(e.completeness, ten.completeness, 1e-12);
  }
}

TEST(Scores, BoundsAndAmiBelowNmi) {
  Rng rng(57);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.index(60);
    const auto t = random_labels(rng, n, 1 + static_cast<int>(rng.index(8)));
    const auto p = random_labels(rng, n, 1 + static_cast<int>(rng.index(8)));
    const auto c = contingency(t, p);
    const auto s = score_labeling(t, p);
    for (double v : {s.homogeneity, s.completeness, s.v_measure}) {
      EXPECT_GE(v, -1e-12);
      EXPECT_LE(v, 1 + 1e-12);
    }
    EXPECT_LE(s.ari, 1 + 1e-12);
    EXPECT_LE(s.ami, 1 + 1e-12);
    // AMI <= NMI_max, wherever the adjustment is in play (NMI_max < 1)
    const double nmi = normalized_mutual_info_max(c);
    if (nmi < 1.0 && s.ami > 0) {
      EXPECT_LE(s.ami, nmi + 1e-12);
    }
  }
}

TEST(Scores, ArithmeticNormalizerIsAtLeastMax) {
  Rng rng(58);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_labels(rng, 40, 3), p = random_labels(rng, 40, 6);
    const auto c = contingency(t, p);
    const double mx = adjusted_mutual_info(c, AmiNormalizer::max);
    const double ar = adjusted_mutual_info(c, AmiNormalizer::arithmetic);
    if (mx > 0) {
      EXPECT_GE(ar, mx - 1e-12);
    }
  }
}

TEST(Entropy, Basics) {
  const std::vector<std::int64_t> uniform{1, 1, 1, 1};
  EXPECT_NEAR(entropy(uniform, 2.0), 2.0, 1e-15);
  const std::vector<std::int64_t> single{7};
  EXPECT_EQ(entropy(single), 0.0);
}
