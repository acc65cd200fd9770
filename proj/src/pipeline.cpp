#include "tweetclust/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tweetclust/fuzzymatch.hpp"
#include "tweetclust/metrics.hpp"
#include "tweetclust/parallel.hpp"
#include "tweetclust/tweet2vec.hpp"
#include "tweetclust/tweetterm.hpp"

namespace tweetclust {

using nlohmann::json;

namespace {

constexpr const char* kRunFormat = "tweetclust-run";
constexpr int kRunVersion = 1;

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct IntervalPlan {
  std::string name;
  std::vector<std::size_t> members;
};

std::vector<IntervalPlan> plan_intervals(const PipelineConfig& cfg, const Corpus& corpus) {
  std::vector<IntervalPlan> plans;
  if (cfg.intervals.empty()) {
    IntervalPlan all{"all", {}};
    for (std::size_t i = 0; i < corpus.size(); ++i) all.members.push_back(i);
    plans.push_back(std::move(all));
    return plans;
  }
  for (const auto& iv : corpus.intervals()) plans.push_back({iv.name, corpus.members(iv.name)});
  return plans;
}

}  // namespace

std::string corpus_fingerprint(const Corpus& corpus) {
  std::ostringstream s;
  write_corpus(corpus, s);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Dataset load_dataset(const PipelineConfig& cfg) {
  Dataset ds;
  std::vector<std::string> synth_topics;
  if (cfg.input) {
    ds.corpus = load_corpus(*cfg.input, cfg.intervals);
  } else {
    auto sc = synth_corpus(cfg.synth);
    ds.corpus = Corpus(sc.corpus.tweets(), cfg.intervals);
    synth_topics = sc.truth.topics;
    if (cfg.truth == TruthSource::generating) ds.truth = std::move(sc.truth);
  }
  switch (cfg.truth) {
    case TruthSource::none: break;
    case TruthSource::generating: break;
    case TruthSource::file: ds.truth = load_ground_truth(*cfg.truth_path); break;
    case TruthSource::fuzzy: {
      const auto topics = cfg.topics_path ? load_topic_labels(*cfg.topics_path) : synth_topics;
      ds.truth = build_ground_truth(topics, ds.corpus, cfg.fuzzy_threshold);
      break;
    }
  }
  ds.has_truth = cfg.truth != TruthSource::none;
  if (ds.has_truth) ds.truth.labels_for(ds.corpus, {});  // validates the tweet ids
  return ds;
}

EncoderState prepare_encoder(const PipelineConfig& cfg, const Corpus& corpus) {
  if (cfg.model_path) return {load_model(*cfg.model_path), {}};
  auto r = train(corpus, cfg.train);
  return {std::move(r.model), std::move(r.epoch_loss)};
}

Features build_features(const PipelineConfig& cfg, const Corpus& corpus, std::span<const std::size_t> members,
                        const EncoderState* encoder) {
  Features f;
  std::vector<Tweet> tweets;
  tweets.reserve(members.size());
  for (auto i : members) tweets.push_back(corpus[i]);

  if (cfg.representation == Representation::tweetterm) {
    const auto m = build_matrix(tweets, cfg.min_df);
    const auto garbage = garbage_rows(m);
    std::vector<bool> is_garbage(tweets.size(), false);
    for (auto g : garbage) is_garbage[g] = true;
    std::vector<Eigen::Index> keep;
    for (std::size_t r = 0; r < tweets.size(); ++r) {
      if (is_garbage[r]) {
        f.garbage.push_back(members[r]);
      } else {
        f.clustered.push_back(members[r]);
        keep.push_back(static_cast<Eigen::Index>(r));
      }
    }
    f.rows.setZero(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(m.n_terms()));
    for (std::size_t k = 0; k < keep.size(); ++k)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m.rows, keep[k]); it; ++it)
        f.rows(static_cast<Eigen::Index>(k), it.col()) = it.value();
    return f;
  }

  if (!encoder) throw Error("tweet2vec representation needs an encoder");
  std::vector<Tweet> usable;
  for (std::size_t r = 0; r < tweets.size(); ++r) {
    const std::string input = cfg.keep_hashtags ? tweets[r].norm_text : strip_hashtags(tweets[r].norm_text);
    if (input.empty()) {
      f.garbage.push_back(members[r]);
    } else {
      f.clustered.push_back(members[r]);
      usable.push_back(tweets[r]);
    }
  }
  f.rows = encode_corpus(encoder->model, std::span<const Tweet>(usable), cfg.keep_hashtags);
  return f;
}

namespace {

void write_interval(const PipelineConfig& cfg, const Corpus& corpus, const IntervalResult& r,
                    const DistanceMatrix* d, const Dendrogram* tree) {
  const auto dir = cfg.output / r.interval;
  std::filesystem::create_directories(dir);

  json dist = {{"metric", to_string(cfg.metric)}, {"n", d ? d->size() : r.n_tweets - r.n_garbage},
               {"n_garbage", r.n_garbage}};
  if (d) {
    const auto v = d->condensed();
    double lo = v[0], hi = v[0], sum = 0.0;
    for (double x : v) lo = std::min(lo, x), hi = std::max(hi, x), sum += x;
    dist["pairs"] = v.size();
    dist["min"] = lo;
    dist["max"] = hi;
    dist["mean"] = sum / static_cast<double>(v.size());
  }
  open_out(dir / "distances.json") << dist.dump(2) << '\n';

  {
    auto out = open_out(dir / "dendrogram.txt");
    if (tree) write_dendrogram(*tree, out);
  }
  {
    auto out = open_out(dir / "grid.json");
    write_grid_report(r.grid, out);
  }
  {
    auto out = open_out(dir / "figure.tsv");
    write_figure_tsv(r.grid, r.n_tweets, out);
  }
  {
    auto out = open_out(dir / "labels.jsonl");
    const std::size_t n_clustered = r.members.size() - r.n_garbage;
    for (std::size_t k = 0; k < r.members.size(); ++k)
      out << json{{"id", corpus[r.members[k]].id}, {"label", r.labels[k]}, {"garbage", k >= n_clustered}}.dump()
          << '\n';
  }
  {
    auto out = open_out(dir / "clusters.jsonl");
    const auto id = [&](std::size_t k) { return corpus[r.members[k]].id; };
    for (const auto& s : r.summaries) {
      std::vector<std::string> med, reps;
      for (auto k : s.medoids) med.push_back(id(k));
      for (auto k : s.representatives) reps.push_back(id(k));
      out << json{{"cluster", s.cluster},   {"size", s.size},        {"first", id(s.first)},
                  {"last", id(s.last)},     {"medoids", med},        {"representatives", reps},
                  {"clusters1", s.single_text}}
                 .dump()
          << '\n';
    }
  }
  json m = {{"interval", r.interval},
            {"representation", to_string(cfg.representation)},
            {"metric", to_string(cfg.metric)},
            {"linkage", to_string(cfg.linkage)},
            {"n_tweets", r.n_tweets},
            {"n_garbage", r.n_garbage},
            {"n_labeled", r.n_labeled},
            {"cpcc", opt(r.cpcc)},
            {"selection", r.selection}};
  if (r.chosen) {
    const auto& row = r.grid.rows[*r.chosen];
    m["threshold"] = row.threshold;
    m["n_clusters"] = row.n_clusters;
    m["homogeneity"] = opt(row.homogeneity);
    m["completeness"] = opt(row.completeness);
    m["v_measure"] = opt(row.v_measure);
    m["ari"] = opt(row.ari);
    m["ami"] = opt(row.ami);
    m["silhouette"] = opt(row.silhouette);
  }
  open_out(dir / "metrics.json") << m.dump(2) << '\n';
}

IntervalResult run_interval(const PipelineConfig& cfg, const Dataset& ds, const std::string& name,
                            std::span<const std::size_t> members, const EncoderState* encoder, bool write) {
  IntervalResult r;
  r.interval = name;
  r.n_tweets = members.size();
  const Features f = build_features(cfg, ds.corpus, members, encoder);
  r.n_garbage = f.garbage.size();
  r.members = f.clustered;
  r.members.insert(r.members.end(), f.garbage.begin(), f.garbage.end());

  std::optional<DistanceMatrix> d;
  std::optional<Dendrogram> tree;
  if (f.clustered.size() >= 2) {
    d = pairwise_distances(f.rows, cfg.metric);
    tree = linkage(*d, cfg.linkage);
    if (f.clustered.size() >= 3) {
      try {
        r.cpcc = cophenetic_corr(*d, *tree);
      } catch (const Error&) {
      }
    }
  }

  std::vector<int> truth, garbage_truth;
  if (ds.has_truth) {
    truth = ds.truth.labels_for(ds.corpus, f.clustered);
    garbage_truth = ds.truth.labels_for(ds.corpus, f.garbage);
    for (int t : truth) r.n_labeled += t >= 0;
    for (int t : garbage_truth) r.n_labeled += t >= 0;
  }
  GridInput in;
  in.tree = tree ? &*tree : nullptr;
  in.distances = d ? &*d : nullptr;
  in.n_clustered = f.clustered.size();
  in.truth = truth;
  in.garbage_truth = garbage_truth;
  in.n_garbage = f.garbage.size();
  in.normalizer = cfg.ami;
  r.grid = grid_search(in, cfg.grid);

  if (r.grid.chosen_supervised) {
    r.chosen = r.grid.chosen_supervised;
    r.selection = "v_measure";
  } else if (r.grid.chosen_unsupervised) {
    r.chosen = r.grid.chosen_unsupervised;
    r.selection = "silhouette";
  } else {
    r.chosen = 0;
    r.selection = "first";
  }
  const double threshold = r.grid.rows[*r.chosen].threshold;
  std::vector<int> clustered = tree ? cut(*tree, threshold) : std::vector<int>(f.clustered.size(), 0);

  // Summaries cover clustered tweets only; the garbage pseudo-cluster is not a topic.
  std::vector<int> summary_labels = clustered;
  summary_labels.resize(r.members.size(), -1);
  std::vector<Tweet> tweets;
  for (auto i : r.members) tweets.push_back(ds.corpus[i]);
  r.summaries = summarize_clusters(
      summary_labels, tweets, [&](std::size_t a, std::size_t b) { return d ? (*d)(a, b) : 0.0; }, cfg.top);
  r.labels = with_garbage(std::move(clustered), f.garbage.size());

  if (write) write_interval(cfg, ds.corpus, r, d ? &*d : nullptr, tree ? &*tree : nullptr);
  return r;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, bool write) {
  const Dataset ds = load_dataset(cfg);
  if (ds.corpus.empty()) throw Error("corpus is empty");
  PipelineResult result;
  result.fingerprint = corpus_fingerprint(ds.corpus);

  std::optional<EncoderState> encoder;
  if (cfg.representation == Representation::tweet2vec) encoder = prepare_encoder(cfg, ds.corpus);

  const auto plans = plan_intervals(cfg, ds.corpus);
  if (write) std::filesystem::create_directories(cfg.output);
  result.intervals.resize(plans.size());
  parallel_for(plans.size(), [&](std::size_t k) {
    result.intervals[k] =
        run_interval(cfg, ds, plans[k].name, plans[k].members, encoder ? &*encoder : nullptr, write);
  }, 1);
  if (!write) return result;

  json intervals = json::array();
  for (const auto& p : plans) intervals.push_back(p.name);
  json manifest = {{"format", kRunFormat},
                   {"version", kRunVersion},
                   {"corpus_fingerprint", result.fingerprint},
                   {"n_tweets", ds.corpus.size()},
                   {"has_truth", ds.has_truth},
                   {"representation", to_string(cfg.representation)},
                   {"intervals", intervals},
                   {"config", to_map(cfg)}};
  open_out(cfg.output / "manifest.json") << manifest.dump(2) << '\n';
  if (ds.has_truth) {
    auto out = open_out(cfg.output / "ground_truth.jsonl");
    write_ground_truth(ds.truth, out);
  }
  if (encoder && !encoder->epoch_loss.empty()) {
    save_model(encoder->model, cfg.output / "model.json");
    auto out = open_out(cfg.output / "train_loss.tsv");
    out << "epoch\tmean_loss\n";
    for (std::size_t e = 0; e < encoder->epoch_loss.size(); ++e)
      out << e + 1 << '\t' << json(encoder->epoch_loss[e]).dump() << '\n';
  }

  std::vector<SummarySet> sets;
  for (const auto& r : result.intervals) {
    SummarySet s{std::string(to_string(cfg.representation)), r.interval, r.summaries, {}};
    for (auto i : r.members) s.tweets.push_back(ds.corpus[i]);
    sets.push_back(std::move(s));
  }
  auto pool = open_out(cfg.output / "eval_pool.jsonl");
  auto key = open_out(cfg.output / "eval_pool_key.jsonl");
  export_eval_pool(sets, cfg.seed, pool, key);
  return result;
}

std::vector<CpccRow> cpcc_scan(const PipelineConfig& cfg) {
  const Dataset ds = load_dataset(cfg);
  std::optional<EncoderState> encoder;
  if (cfg.representation == Representation::tweet2vec) encoder = prepare_encoder(cfg, ds.corpus);
  std::vector<CpccRow> rows;
  for (const auto& plan : plan_intervals(cfg, ds.corpus)) {
    const auto f = build_features(cfg, ds.corpus, plan.members, encoder ? &*encoder : nullptr);
    for (auto metric : kAllMetrics) {
      std::optional<DistanceMatrix> d;
      if (f.clustered.size() >= 3) d = pairwise_distances(f.rows, metric);
      for (auto method : kAllLinkages) {
        CpccRow row{plan.name, metric, method, std::nullopt};
        if (d) {
          try {
            row.cpcc = cophenetic_corr(*d, linkage(*d, method));
          } catch (const Error&) {
          }
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_cpcc_table(std::span<const CpccRow> rows, std::ostream& out) {
  out << "interval\tmetric\tlinkage\tcpcc\n";
  for (const auto& r : rows)
    out << r.interval << '\t' << to_string(r.metric) << '\t' << to_string(r.linkage) << '\t'
        << (r.cpcc ? json(*r.cpcc).dump() : "NA") << '\n';
}

void compare_runs(const std::filesystem::path& a, const std::filesystem::path& b, std::ostream& out,
                  std::ostream& warn) {
  const json ma = read_json(a / "manifest.json");
  const json mb = read_json(b / "manifest.json");
  for (const auto* m : {&ma, &mb})
    if (m->value("format", "") != kRunFormat) throw Error("not a pipeline output directory");
  if (ma.at("corpus_fingerprint") != mb.at("corpus_fingerprint"))
    throw Error("runs used different corpora (fingerprints " + ma.at("corpus_fingerprint").get<std::string>() +
                " and " + mb.at("corpus_fingerprint").get<std::string>() + ")");
  for (const auto& [m, dir] : {std::pair(&ma, &a), std::pair(&mb, &b)})
    if (!m->value("has_truth", false)) warn << "warning: " << dir->string() << " has no ground truth\n";

  static constexpr const char* kMetrics[] = {"homogeneity", "completeness", "v_measure", "ari", "ami"};
  out << "# A = " << a.string() << " (" << ma.value("representation", "?") << ")\n";
  out << "# B = " << b.string() << " (" << mb.value("representation", "?") << ")\n";
  out << "interval\tmetric\tA\tB\twinner\n";
  for (const auto& iv : ma.at("intervals")) {
    const auto name = iv.get<std::string>();
    json ra, rb;
    if (std::filesystem::exists(a / name / "metrics.json")) ra = read_json(a / name / "metrics.json");
    if (std::filesystem::exists(b / name / "metrics.json")) rb = read_json(b / name / "metrics.json");
    else warn << "warning: interval " << name << " missing from " << b.string() << '\n';
    for (const char* key : kMetrics) {
      const json va = ra.is_object() ? ra.value(key, json(nullptr)) : json(nullptr);
      const json vb = rb.is_object() ? rb.value(key, json(nullptr)) : json(nullptr);
      std::string winner;
      if (va.is_number() && vb.is_number()) {
        if (va.get<double>() > vb.get<double>()) winner = "A";
        else if (vb.get<double>() > va.get<double>()) winner = "B";
      }
      out << name << '\t' << key << '\t' << (va.is_null() ? "NA" : va.dump()) << '\t'
          << (vb.is_null() ? "NA" : vb.dump()) << '\t' << winner << '\n';
    }
  }
}

}  // namespace tweetclust
