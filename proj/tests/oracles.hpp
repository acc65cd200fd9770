// Slow, literal re-implementations used only to cross-check the library.
// None of these share code with src/.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oracle {

// Plain recursion over the three edit operations; exponential, |a|,|b| <= 8.
inline std::size_t levenshtein(const std::u32string& a, const std::u32string& b, std::size_t i, std::size_t j,
                               unsigned sub) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  if (a[i] == b[j]) return levenshtein(a, b, i + 1, j + 1, sub);
  return std::min({levenshtein(a, b, i + 1, j, sub) + 1, levenshtein(a, b, i, j + 1, sub) + 1,
                   levenshtein(a, b, i + 1, j + 1, sub) + sub});
}
inline std::size_t levenshtein(const std::u32string& a, const std::u32string& b, unsigned sub = 1) {
  return levenshtein(a, b, 0, 0, sub);
}

// Distances from `a` to every string over `alphabet` of length <= max_len,
// by depth-first extension of b: the table row for b+c follows from the row
// for b through the defining recurrence. Calls visit(b, distance).
template <typename Visit>
void levenshtein_all(const std::u32string& a, std::u32string_view alphabet, std::size_t max_len, Visit&& visit) {
  std::u32string b;
  std::vector<std::size_t> row0(a.size() + 1);
  for (std::size_t i = 0; i <= a.size(); ++i) row0[i] = i;  // D(a[:i], "")
  auto rec = [&](auto&& self, const std::vector<std::size_t>& prev) -> void {
    visit(b, prev[a.size()]);
    if (b.size() == max_len) return;
    for (char32_t c : alphabet) {
      std::vector<std::size_t> row(a.size() + 1);
      row[0] = b.size() + 1;
      for (std::size_t i = 1; i <= a.size(); ++i)
        row[i] = std::min({prev[i] + 1, row[i - 1] + 1, prev[i - 1] + (a[i - 1] == c ? 0 : 1)});
      b.push_back(c);
      self(self, row);
      b.pop_back();
    }
  };
  rec(rec, row0);
}

// ---- clustering scores straight from the label lists ----------------------

inline double entropy_of(const std::vector<int>& x) {
  std::map<int, double> n;
  for (int v : x) n[v] += 1;
  double h = 0, N = static_cast<double>(x.size());
  for (auto& [_, c] : n) h -= c / N * std::log(c / N);
  return h;
}

// H(X|Y) = sum_y p(y) H(X | Y = y)
inline double conditional_entropy(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < x.size(); ++i) groups[y[i]].push_back(x[i]);
  double h = 0;
  for (auto& [_, g] : groups) h += static_cast<double>(g.size()) / static_cast<double>(x.size()) * entropy_of(g);
  return h;
}

inline double mutual_info(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> px, py;
  const double N = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) joint[{x[i], y[i]}] += 1, px[x[i]] += 1, py[y[i]] += 1;
  double mi = 0;
  for (auto& [k, c] : joint) mi += c / N * std::log(N * c / (px[k.first] * py[k.second]));
  return mi;
}

struct Scores {
  double h, c, v, ari, ami;
};

inline double choose2(double n) { return n * (n - 1) / 2; }

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// E[MI] as a sum of hypergeometric probabilities written with binomials.
inline double expected_mi(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<int, int> a, b;
  for (int v : x) ++a[v];
  for (int v : y) ++b[v];
  const int N = static_cast<int>(x.size());
  double e = 0;
  for (auto& [_, ai] : a)
    for (auto& [__, bj] : b)
      for (int nij = std::max(1, ai + bj - N); nij <= std::min(ai, bj); ++nij) {
        const double p = binom(ai, nij) * binom(N - ai, bj - nij) / binom(N, bj);
        e += p * nij / N * std::log(static_cast<double>(N) * nij / (static_cast<double>(ai) * bj));
      }
  return e;
}

inline Scores scores(const std::vector<int>& truth, const std::vector<int>& pred) {
  Scores s{};
  const double hc = entropy_of(truth), hk = entropy_of(pred);
  s.h = hc == 0 ? 1.0 : 1.0 - conditional_entropy(truth, pred) / hc;
  s.c = hk == 0 ? 1.0 : 1.0 - conditional_entropy(pred, truth) / hk;
  s.v = s.h + s.c == 0 ? 0.0 : 2 * s.h * s.c / (s.h + s.c);

  // Pair counting over all unordered pairs.
  double same_both = 0, same_t = 0, same_p = 0;
  const std::size_t n = truth.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool t = truth[i] == truth[j], p = pred[i] == pred[j];
      same_both += t && p, same_t += t, same_p += p;
    }
  const double expected = same_t * same_p / choose2(static_cast<double>(n));
  const double mx = (same_t + same_p) / 2;
  s.ari = mx == expected ? (same_both == expected ? 1.0 : 0.0) : (same_both - expected) / (mx - expected);

  const std::size_t r = std::set<int>(truth.begin(), truth.end()).size();
  const std::size_t c = std::set<int>(pred.begin(), pred.end()).size();
  if (r == c && (r == 1 || r == n)) {
    s.ami = 1.0;
  } else {
    const double emi = expected_mi(truth, pred);
    const double denom = std::max(hc, hk) - emi;
    s.ami = std::abs(denom) < 1e-15 ? 0.0 : (mutual_info(truth, pred) - emi) / denom;
  }
  return s;
}

// Every labeling of n items in canonical form (restricted growth strings).
inline std::vector<std::vector<int>> all_labelings(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int i, int max_label) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      cur[i] = l;
      self(self, i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return {{}};
  rec(rec, 0, -1);
  return out;
}

// ---- agglomerative clustering by brute force --------------------------------

struct NaiveMerge {
  std::vector<int> a, b;  // members
  double height;
};

// Rescans every active pair at every step. Cluster distances come from the
// member lists (single/complete/average) or, for weighted, from the recursive
// definition kept in a full matrix.
inline std::vector<NaiveMerge> naive_linkage(const std::vector<std::vector<double>>& d, const std::string& method) {
  const std::size_t n = d.size();
  std::vector<std::vector<int>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({static_cast<int>(i)});
  std::vector<std::vector<double>> w = d;  // weighted-linkage distances between current clusters
  std::vector<NaiveMerge> merges;
  auto dist = [&](std::size_t p, std::size_t q) {
    if (method == "weighted") return w[p][q];
    double best = method == "single" ? std::numeric_limits<double>::infinity() : method == "complete" ? -1.0 : 0.0;
    for (int i : clusters[p])
      for (int j : clusters[q]) {
        if (method == "single") best = std::min(best, d[i][j]);
        else if (method == "complete") best = std::max(best, d[i][j]);
        else best += d[i][j];
      }
    if (method == "average") best /= static_cast<double>(clusters[p].size() * clusters[q].size());
    return best;
  };
  while (clusters.size() > 1) {
    std::size_t bp = 0, bq = 1;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < clusters.size(); ++p)
      for (std::size_t q = p + 1; q < clusters.size(); ++q)
        if (double x = dist(p, q); x < bd) bd = x, bp = p, bq = q;
    merges.push_back({clusters[bp], clusters[bq], bd});
    std::vector<int> joined = clusters[bp];
    joined.insert(joined.end(), clusters[bq].begin(), clusters[bq].end());
    // weighted: new row = mean of the two old rows
    std::vector<double> row(clusters.size());
    for (std::size_t k = 0; k < clusters.size(); ++k) row[k] = (w[bp][k] + w[bq][k]) / 2;
    clusters[bp] = joined;
    for (std::size_t k = 0; k < clusters.size(); ++k)
      if (k != bp) w[bp][k] = w[k][bp] = row[k];
    clusters.erase(clusters.begin() + static_cast<long>(bq));
    w.erase(w.begin() + static_cast<long>(bq));
    for (auto& r : w) r.erase(r.begin() + static_cast<long>(bq));
  }
  return merges;
}

// Partition after applying every merge with height <= t, as a set of member sets.
inline std::set<std::set<int>> naive_cut(std::size_t n, const std::vector<NaiveMerge>& merges, double t) {
  std::vector<std::set<int>> parts;
  for (std::size_t i = 0; i < n; ++i) parts.push_back({static_cast<int>(i)});
  for (const auto& m : merges) {
    if (m.height > t) break;
    std::set<int> joined;
    std::vector<std::set<int>> rest;
    for (auto& p : parts) {
      if (p.count(m.a.front()) || p.count(m.b.front())) joined.insert(p.begin(), p.end());
      else rest.push_back(p);
    }
    rest.push_back(joined);
    parts = rest;
  }
  return {parts.begin(), parts.end()};
}

// Max edge on the minimum-spanning-tree path between every pair (Prim + DFS).
inline std::vector<std::vector<double>> mst_minimax(const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::vector<bool> in(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, 0);
  best[0] = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v] && (u == n || best[v] < best[u])) u = v;
    in[u] = true;
    if (step > 0) adj[u].push_back({parent[u], d[u][parent[u]]}), adj[parent[u]].push_back({u, d[u][parent[u]]});
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v] && d[u][v] < best[v]) best[v] = d[u][v], parent[v] = u;
  }
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::pair<std::size_t, double>> stack{{s, 0.0}};
    std::vector<bool> seen(n, false);
    seen[s] = true;
    while (!stack.empty()) {
      auto [u, mx] = stack.back();
      stack.pop_back();
      out[s][u] = mx;
      for (auto [v, wt] : adj[u])
        if (!seen[v]) seen[v] = true, stack.push_back({v, std::max(mx, wt)});
    }
  }
  return out;
}

// ---- GRU step, one scalar at a time -------------------------------------------

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline double sigm(double x) { return 1 / (1 + std::exp(-x)); }

inline Vec gru_step(const Mat& Wz, const Mat& Wr, const Mat& Wh, const Mat& Uz, const Mat& Ur, const Mat& Uh,
                    const Vec& bz, const Vec& br, const Vec& bh, const Vec& x, const Vec& h) {
  const std::size_t H = h.size(), E = x.size();
  Vec z(H), r(H), out(H);
  for (std::size_t i = 0; i < H; ++i) {
    double az = bz[i], ar = br[i];
    for (std::size_t k = 0; k < E; ++k) az += Wz[i][k] * x[k], ar += Wr[i][k] * x[k];
    for (std::size_t k = 0; k < H; ++k) az += Uz[i][k] * h[k], ar += Ur[i][k] * h[k];
    z[i] = sigm(az), r[i] = sigm(ar);
  }
  for (std::size_t i = 0; i < H; ++i) {
    double a = bh[i];
    for (std::size_t k = 0; k < E; ++k) a += Wh[i][k] * x[k];
    for (std::size_t k = 0; k < H; ++k) a += Uh[i][k] * r[k] * h[k];
    out[i] = (1 - z[i]) * h[i] + z[i] * std::tanh(a);
  }
  return out;
}

}  // namespace oracle
