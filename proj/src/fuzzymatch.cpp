#include "tweetclust/fuzzymatch.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "tweetclust/error.hpp"
#include "tweetclust/parallel.hpp"
#include "tweetclust/text.hpp"

namespace tweetclust {

namespace {

// Two-row Wagner-Fischer. Aborts when the row minimum exceeds max_cost: row
// minima never decrease, so the final distance would exceed it too.
std::optional<std::size_t> edit_distance(std::u32string_view a, std::u32string_view b,
                                         std::size_t sub_cost, double max_cost) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : sub_cost);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, diag});
      row_min = std::min(row_min, cur[j]);
    }
    if (static_cast<double>(row_min) > max_cost) return std::nullopt;
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void check_cost(unsigned substitution_cost) {
  if (substitution_cost != 1 && substitution_cost != 2)
    throw Error("substitution cost must be 1 or 2");
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b, unsigned substitution_cost) {
  check_cost(substitution_cost);
  return *edit_distance(a, b, substitution_cost, std::numeric_limits<double>::infinity());
}

std::size_t levenshtein(std::string_view a, std::string_view b, unsigned substitution_cost) {
  return levenshtein(text::decode(a), text::decode(b), substitution_cost);
}

std::optional<std::size_t> levenshtein_bounded(std::u32string_view a, std::u32string_view b,
                                               unsigned substitution_cost, double max_cost) {
  check_cost(substitution_cost);
  return edit_distance(a, b, substitution_cost, max_cost);
}

double similarity_ratio(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  const auto d = levenshtein(a, b, 2);
  return static_cast<double>(total - d) / static_cast<double>(total);
}

double similarity_ratio(std::string_view a, std::string_view b) {
  return similarity_ratio(text::decode(a), text::decode(b));
}

GroundTruth build_ground_truth(std::span<const std::string> topics, const Corpus& corpus,
                               double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error("fuzzy threshold must lie in (0, 1]");
  GroundTruth truth;
  truth.topics.assign(topics.begin(), topics.end());
  if (topics.empty()) return truth;

  std::vector<std::u32string> labels;
  labels.reserve(topics.size());
  for (const auto& t : topics) labels.push_back(text::decode(normalize(t, false)));

  struct Best {
    int topic = -1;
    double ratio = 0.0;
  };
  std::vector<Best> best(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    const auto tweet = text::decode(corpus[i].norm_text);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const double total = static_cast<double>(tweet.size() + labels[k].size());
      double ratio = 1.0;
      if (total > 0) {
        // ratio > threshold  <=>  d < total * (1 - threshold); a row minimum
        // above that bound can never come back under it.
        const auto d = levenshtein_bounded(tweet, labels[k], 2, total * (1.0 - threshold));
        if (!d) continue;
        ratio = (total - static_cast<double>(*d)) / total;
      }
      if (ratio > threshold && ratio > best[i].ratio) best[i] = {static_cast<int>(k), ratio};
    }
  }, 8);

  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (best[i].topic >= 0) truth.entries.push_back({corpus[i].id, best[i].topic, best[i].ratio});
  return truth;
}

}  // namespace tweetclust
