#include "tweetclust/hac.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace tweetclust {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::manhattan: return "manhattan";
    case Metric::cosine: return "cosine";
  }
  return "?";
}

std::string_view to_string(Linkage m) {
  switch (m) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
    case Linkage::weighted: return "weighted";
  }
  return "?";
}

Metric parse_metric(std::string_view s) {
  for (auto m : kAllMetrics)
    if (to_string(m) == s) return m;
  throw ConfigError("unknown metric '" + std::string(s) + "'");
}

Linkage parse_linkage(std::string_view s) {
  for (auto m : kAllLinkages)
    if (to_string(m) == s) return m;
  throw ConfigError("unknown linkage method '" + std::string(s) + "'");
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> condensed, Metric metric)
    : n_(n), values_(std::move(condensed)), metric_(metric) {
  if (values_.size() != n * (n ? n - 1 : 0) / 2) throw Error("condensed distance array has the wrong length");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("distances must be finite and non-negative");
}

DistanceMatrix::DistanceMatrix(std::size_t n, Metric metric)
    : n_(n), values_(n * (n ? n - 1 : 0) / 2, 0.0), metric_(metric) {}

DistanceMatrix DistanceMatrix::subset(std::span<const std::size_t> points) const {
  DistanceMatrix out(points.size(), metric_);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) out.at(i, j) = (*this)(points[i], points[j]);
  return out;
}

namespace {

double lance_williams(Linkage method, double d_ac, double d_bc, std::size_t size_a, std::size_t size_b) {
  switch (method) {
    case Linkage::single: return std::min(d_ac, d_bc);
    case Linkage::complete: return std::max(d_ac, d_bc);
    case Linkage::average:
      return (static_cast<double>(size_a) * d_ac + static_cast<double>(size_b) * d_bc) /
             static_cast<double>(size_a + size_b);
    case Linkage::weighted: return 0.5 * (d_ac + d_bc);
  }
  return 0.0;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[b] = a;
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

Dendrogram linkage(const DistanceMatrix& d, Linkage method) {
  const std::size_t n = d.size();
  if (n < 2) throw Error("linkage needs at least 2 points");

  DistanceMatrix work = d;
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  // Slot i always holds the cluster containing leaf i.
  struct SlotMerge {
    std::size_t a, b;
    double height;
  };
  std::vector<SlotMerge> raw;
  raw.reserve(n - 1);
  std::vector<std::size_t> chain;
  chain.reserve(n);

  while (raw.size() < n - 1) {
    if (chain.empty()) chain.push_back(active.front());
    for (;;) {
      const std::size_t a = chain.back();
      const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : kNone;
      // Ties prefer the chain predecessor (guarantees termination), then the
      // smallest slot.
      std::size_t best = prev;
      double best_d = prev == kNone ? std::numeric_limits<double>::infinity() : work(a, prev);
      for (std::size_t x : active) {
        if (x == a) continue;
        const double dx = work(a, x);
        if (dx < best_d || (dx == best_d && best != prev && x < best)) {
          best = x;
          best_d = dx;
        }
      }
      if (best == prev) break;
      chain.push_back(best);
    }
    const std::size_t b = chain.back();
    chain.pop_back();
    const std::size_t a = chain.back();
    chain.pop_back();
    const std::size_t lo = std::min(a, b), hi = std::max(a, b);
    raw.push_back({lo, hi, work(lo, hi)});

    active.erase(std::find(active.begin(), active.end(), lo));
    for (std::size_t x : active) {
      if (x == hi) continue;
      work.at(hi, x) = lance_williams(method, work(lo, x), work(hi, x), size[lo], size[hi]);
    }
    size[hi] += size[lo];
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const SlotMerge& x, const SlotMerge& y) { return x.height < y.height; });

  Dendrogram tree;
  tree.n = n;
  tree.merges.reserve(n - 1);
  UnionFind sets(n);
  std::vector<std::size_t> id(n), members(n, 1);
  std::iota(id.begin(), id.end(), std::size_t{0});
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const std::size_t ra = sets.find(raw[k].a), rb = sets.find(raw[k].b);
    const std::size_t merged = members[ra] + members[rb];
    tree.merges.push_back({std::min(id[ra], id[rb]), std::max(id[ra], id[rb]), raw[k].height, merged});
    const std::size_t root = sets.unite(ra, rb);
    id[root] = n + k;
    members[root] = merged;
  }
  return tree;
}

namespace {

// Calls visit(i, j, height) for every leaf pair, grouped by the merge that
// first joins them.
template <typename Visit>
void for_each_cophenetic_pair(const Dendrogram& tree, Visit&& visit) {
  std::vector<std::vector<std::size_t>> members(tree.n + tree.merges.size());
  for (std::size_t i = 0; i < tree.n; ++i) members[i] = {i};
  for (std::size_t k = 0; k < tree.merges.size(); ++k) {
    const auto& m = tree.merges[k];
    auto& left = members.at(m.left);
    auto& right = members.at(m.right);
    for (std::size_t x : left)
      for (std::size_t y : right) visit(x, y, m.height);
    auto& merged = members[tree.n + k];
    merged = std::move(left);
    merged.insert(merged.end(), right.begin(), right.end());
    std::vector<std::size_t>().swap(right);
  }
}

void check_pairable(const DistanceMatrix& d, const Dendrogram& tree) {
  if (d.size() != tree.n || tree.merges.size() + 1 != tree.n)
    throw Error("distance matrix and dendrogram sizes differ");
  if (tree.n < 3) throw Error("cophenetic correlation needs at least 3 points");
}

}  // namespace

std::vector<double> cophenetic_distances(const Dendrogram& tree) {
  std::vector<double> out(tree.n * (tree.n - 1) / 2, 0.0);
  for_each_cophenetic_pair(tree, [&](std::size_t i, std::size_t j, double h) {
    out[DistanceMatrix::index(tree.n, i, j)] = h;
  });
  return out;
}

double cophenetic_corr(const DistanceMatrix& d, const Dendrogram& tree) {
  check_pairable(d, tree);
  const auto coph = cophenetic_distances(tree);
  const auto orig = d.condensed();
  const auto m = static_cast<double>(orig.size());
  const double mean_x = std::accumulate(orig.begin(), orig.end(), 0.0) / m;
  const double mean_y = std::accumulate(coph.begin(), coph.end(), 0.0) / m;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < orig.size(); ++k) {
    const double dx = orig[k] - mean_x, dy = coph[k] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw Error("degenerate distances");
  return sxy / std::sqrt(sxx * syy);
}

double cophenetic_corr_streaming(const DistanceMatrix& d, const Dendrogram& tree) {
  check_pairable(d, tree);
  double count = 0, mean_x = 0, mean_y = 0, cxy = 0, m2x = 0, m2y = 0;
  for_each_cophenetic_pair(tree, [&](std::size_t i, std::size_t j, double h) {
    const double x = d(i, j);
    count += 1;
    const double dx = x - mean_x;
    mean_x += dx / count;
    const double dy = h - mean_y;
    mean_y += dy / count;
    cxy += dx * (h - mean_y);
    m2x += dx * (x - mean_x);
    m2y += dy * (h - mean_y);
  });
  if (m2x <= 0.0 || m2y <= 0.0) throw Error("degenerate distances");
  return cxy / std::sqrt(m2x * m2y);
}

std::vector<int> cut(const Dendrogram& tree, double threshold) {
  if (!(threshold >= 0.0)) throw Error("cut threshold must be non-negative");
  UnionFind sets(tree.n);
  std::vector<std::size_t> leaf_of(tree.n + tree.merges.size());
  std::iota(leaf_of.begin(), leaf_of.begin() + static_cast<std::ptrdiff_t>(tree.n), std::size_t{0});
  for (std::size_t k = 0; k < tree.merges.size(); ++k) {
    const auto& m = tree.merges[k];
    leaf_of[tree.n + k] = leaf_of.at(m.left);
    if (m.height <= threshold) sets.unite(leaf_of[m.left], leaf_of[m.right]);
  }
  std::vector<int> labels(tree.n, -1);
  std::vector<int> label_of_root(tree.n, -1);
  int next = 0;
  for (std::size_t i = 0; i < tree.n; ++i) {
    auto& l = label_of_root[sets.find(i)];
    if (l < 0) l = next++;
    labels[i] = l;
  }
  return labels;
}

void write_dendrogram(const Dendrogram& tree, std::ostream& out) {
  const auto old = out.precision(17);
  for (const auto& m : tree.merges) out << m.left << ' ' << m.right << ' ' << m.height << ' ' << m.size << '\n';
  out.precision(old);
}

Dendrogram read_dendrogram(std::istream& in) {
  Dendrogram tree;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    Merge m;
    if (!(fields >> m.left >> m.right >> m.height >> m.size)) throw Error("dendrogram: malformed line '" + line + "'");
    tree.merges.push_back(m);
  }
  tree.n = tree.merges.size() + 1;
  for (std::size_t k = 0; k < tree.merges.size(); ++k) {
    const auto& m = tree.merges[k];
    if (m.left >= tree.n + k || m.right >= tree.n + k || m.left == m.right)
      throw Error("dendrogram: merge " + std::to_string(k) + " references an unknown cluster");
  }
  return tree;
}

}  // namespace tweetclust
