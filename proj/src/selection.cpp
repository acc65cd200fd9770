#include "tweetclust/selection.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tweetclust/parallel.hpp"
#include "tweetclust/rng.hpp"

namespace tweetclust {

using nlohmann::json;

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 15; ++k) g.push_back(k / 10.0);
  return g;
}

std::vector<int> with_garbage(std::vector<int> labels, std::size_t n_garbage) {
  if (n_garbage == 0) return labels;
  const int g = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  labels.insert(labels.end(), n_garbage, g);
  return labels;
}

namespace {

std::size_t count_distinct(std::span<const int> labels) {
  return std::set<int>(labels.begin(), labels.end()).size();
}

std::optional<std::size_t> argmax(const std::vector<GridRow>& rows, std::optional<double> GridRow::*field) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& v = rows[i].*field;
    if (v && (!best || *v > *(rows[*best].*field))) best = i;
  }
  return best;
}

}  // namespace

GridReport grid_search(const GridInput& in, std::span<const double> grid) {
  if (grid.empty()) throw Error("grid_search: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("grid thresholds must be strictly increasing");
  const std::size_t n = in.tree ? in.tree->n : in.n_clustered;
  if (!in.tree && n > 1) throw Error("grid_search: a dendrogram is required for more than one point");
  if (in.distances && in.distances->size() != n) throw Error("grid_search: distances do not match the dendrogram");
  const bool has_truth = !in.truth.empty() || !in.garbage_truth.empty();
  if (has_truth && (in.truth.size() != n || in.garbage_truth.size() != in.n_garbage))
    throw Error("grid_search: truth labels do not cover every point");

  std::vector<int> truth(in.truth.begin(), in.truth.end());
  truth.insert(truth.end(), in.garbage_truth.begin(), in.garbage_truth.end());

  GridReport report;
  report.rows.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t g) {
    GridRow& row = report.rows[g];
    row.threshold = grid[g];
    std::vector<int> clustered = in.tree ? cut(*in.tree, grid[g]) : std::vector<int>(n, 0);
    if (in.distances) {
      const std::size_t k = count_distinct(clustered);
      if (k >= 2 && k <= n - 1) row.silhouette = silhouette(*in.distances, clustered);
    }
    const auto labels = with_garbage(std::move(clustered), in.n_garbage);
    row.n_clusters = count_distinct(labels);
    if (!has_truth) return;
    std::vector<int> t, p;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (truth[i] >= 0) t.push_back(truth[i]), p.push_back(labels[i]);
    if (t.size() < 2) return;
    const auto s = score_labeling(t, p, in.normalizer);
    row.homogeneity = s.homogeneity;
    row.completeness = s.completeness;
    row.v_measure = s.v_measure;
    row.ari = s.ari;
    row.ami = s.ami;
  }, 1);
  report.chosen_supervised = argmax(report.rows, &GridRow::v_measure);
  report.chosen_unsupervised = argmax(report.rows, &GridRow::silhouette);
  return report;
}

std::vector<std::size_t> medoids(std::span<const std::size_t> members,
                                 const std::function<double(std::size_t, std::size_t)>& dist, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> sums;
  sums.reserve(members.size());
  for (auto i : members) {
    double s = 0.0;
    for (auto j : members)
      if (j != i) s += dist(i, j);
    sums.emplace_back(s, i);
  }
  std::sort(sums.begin(), sums.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, sums.size()); ++i) out.push_back(sums[i].second);
  return out;
}

std::vector<std::size_t> medoids(std::span<const std::size_t> members, const DistanceMatrix& d, std::size_t k) {
  return medoids(members, [&](std::size_t i, std::size_t j) { return d(i, j); }, k);
}

std::vector<ClusterSummary> summarize_clusters(std::span<const int> labels, std::span<const Tweet> tweets,
                                               const std::function<double(std::size_t, std::size_t)>& dist,
                                               std::size_t top) {
  if (labels.size() != tweets.size()) throw Error("summarize_clusters: labels and tweets differ in length");
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) members[labels[i]].push_back(i);

  std::vector<std::pair<int, const std::vector<std::size_t>*>> order;
  for (const auto& [label, m] : members) order.emplace_back(label, &m);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second->size() != b.second->size()) return a.second->size() > b.second->size();
    return a.second->front() < b.second->front();
  });
  if (order.size() > top) order.resize(top);

  std::vector<ClusterSummary> out;
  for (const auto& [label, m] : order) {
    ClusterSummary s;
    s.cluster = label;
    s.size = m->size();
    const auto by_time = [&](std::size_t a, std::size_t b) {
      return std::pair(tweets[a].timestamp, a) < std::pair(tweets[b].timestamp, b);
    };
    s.first = *std::min_element(m->begin(), m->end(), by_time);
    s.last = *std::max_element(m->begin(), m->end(), by_time);
    s.medoids = medoids(*m, dist, 3);
    std::vector<std::size_t> candidates{s.first, s.last};
    candidates.insert(candidates.end(), s.medoids.begin(), s.medoids.end());
    std::set<std::string_view> seen;
    for (auto i : candidates)
      if (seen.insert(tweets[i].norm_text).second) s.representatives.push_back(i);
    s.single_text = s.representatives.size() == 1;
    out.push_back(std::move(s));
  }
  return out;
}

std::size_t export_eval_pool(std::span<const SummarySet> sets, std::uint64_t seed, std::ostream& pool,
                             std::ostream& decode) {
  if (sets.empty()) throw Error("export_eval_pool: no summaries");
  Rng rng(seed);
  std::vector<std::size_t> alias_of(sets.size());
  std::iota(alias_of.begin(), alias_of.end(), 0);
  rng.shuffle(alias_of.begin(), alias_of.end());
  const auto alias_name = [](std::size_t a) {
    std::ostringstream s;
    s << "run-" << std::setw(3) << std::setfill('0') << a + 1;
    return s.str();
  };

  std::vector<json> rows;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    for (const auto& s : sets[k].summaries) {
      if (s.single_text) continue;
      std::vector<std::string> texts;
      for (auto i : s.representatives) texts.push_back(sets[k].tweets.at(i).raw_text);
      rows.push_back({{"alias", alias_name(alias_of[k])}, {"cluster", s.cluster}, {"tweets", texts}, {"size", s.size}});
    }
  }
  rng.shuffle(rows.begin(), rows.end());
  for (const auto& r : rows) pool << r.dump() << '\n';

  std::vector<std::size_t> by_alias(sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) by_alias[alias_of[k]] = k;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    const auto& s = sets[by_alias[a]];
    decode << json{{"alias", alias_name(a)}, {"model", s.model}, {"interval", s.interval}}.dump() << '\n';
  }
  if (!pool || !decode) throw Error("export_eval_pool: write failed");
  return rows.size();
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_get(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

void write_grid_report(const GridReport& r, std::ostream& out) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    rows.push_back({{"threshold", row.threshold},
                    {"n_clusters", row.n_clusters},
                    {"homogeneity", opt(row.homogeneity)},
                    {"completeness", opt(row.completeness)},
                    {"v_measure", opt(row.v_measure)},
                    {"ari", opt(row.ari)},
                    {"ami", opt(row.ami)},
                    {"silhouette", opt(row.silhouette)},
                    {"chosen_supervised", r.chosen_supervised == i},
                    {"chosen_unsupervised", r.chosen_unsupervised == i}});
  }
  out << rows.dump(2) << '\n';
}

GridReport read_grid_report(std::istream& in) {
  GridReport r;
  try {
    const json rows = json::parse(in);
    for (const auto& j : rows) {
      GridRow row;
      row.threshold = j.at("threshold").get<double>();
      row.n_clusters = j.at("n_clusters").get<std::size_t>();
      row.homogeneity = opt_get(j, "homogeneity");
      row.completeness = opt_get(j, "completeness");
      row.v_measure = opt_get(j, "v_measure");
      row.ari = opt_get(j, "ari");
      row.ami = opt_get(j, "ami");
      row.silhouette = opt_get(j, "silhouette");
      if (j.value("chosen_supervised", false)) r.chosen_supervised = r.rows.size();
      if (j.value("chosen_unsupervised", false)) r.chosen_unsupervised = r.rows.size();
      r.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed grid report: ") + e.what());
  }
  return r;
}

void write_figure_tsv(const GridReport& r, std::size_t n_points, std::ostream& out) {
  out << "threshold\tv_measure\tsilhouette\tclusters_per_tweet\tn_clusters\n";
  const auto cell = [](const std::optional<double>& v) { return v ? json(*v).dump() : std::string("NA"); };
  for (const auto& row : r.rows)
    out << json(row.threshold).dump() << '\t' << cell(row.v_measure) << '\t' << cell(row.silhouette) << '\t'
        << json(n_points ? static_cast<double>(row.n_clusters) / static_cast<double>(n_points) : 0.0).dump() << '\t'
        << row.n_clusters << '\n';
}

}  // namespace tweetclust
