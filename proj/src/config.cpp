#include "tweetclust/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <json.hpp>

#include "tweetclust/selection.hpp"

namespace tweetclust {

std::string_view to_string(Representation r) {
  return r == Representation::tweetterm ? "tweetterm" : "tweet2vec";
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"input", "JSONL corpus path; a synthetic corpus is generated when absent"},
      {"intervals", "comma-separated name=start..end windows (ISO-8601 UTC or epoch seconds)"},
      {"truth", "none | file | fuzzy | generating (default: generating for synthetic input, else none)"},
      {"truth_file", "ground-truth JSONL for truth=file"},
      {"topics_file", "topic labels, one per line, for truth=fuzzy"},
      {"fuzzy_threshold", "similarity ratio a match must exceed (0.9)"},
      {"synth.topics", "planted topics (10)"},
      {"synth.per_topic", "tweets per topic (20)"},
      {"synth.noise", "per-character mutation probability (0.05)"},
      {"synth.hashtag_rate", "probability of appending the topic hashtag (0.5)"},
      {"synth.words", "words per topic template (6)"},
      {"synth.word_min", "shortest template word (2)"},
      {"synth.word_max", "longest template word (5)"},
      {"synth.seed", "generator seed (defaults to seed)"},
      {"representation", "tweetterm | tweet2vec (tweetterm)"},
      {"min_df", "n-gram document frequency cutoff (10)"},
      {"model", "pretrained encoder checkpoint; trained on the corpus when absent"},
      {"keep_hashtags", "keep hashtag tokens in the encoder input (true)"},
      {"train.hidden", "GRU hidden size (500)"},
      {"train.embed", "character embedding size (64)"},
      {"train.batch", "minibatch size (64)"},
      {"train.lr", "SGD learning rate (0.1)"},
      {"train.epochs", "training epochs (10)"},
      {"train.clip", "global gradient-norm clip (5.0)"},
      {"train.min_char_freq", "characters rarer than this map to UNK (2)"},
      {"train.min_tag_freq", "hashtags in fewer tweets are not labels (5)"},
      {"train.seed", "training seed (defaults to seed)"},
      {"metric", "euclidean | manhattan | cosine (euclidean)"},
      {"linkage", "single | complete | average | weighted (average)"},
      {"grid", "comma-separated increasing thresholds (0.1,0.2,...,1.5)"},
      {"ami", "AMI normalizer: max | arithmetic (max)"},
      {"top", "clusters summarized per interval (20)"},
      {"output", "output directory (out)"},
      {"seed", "master seed (1)"},
  };
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    auto part = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!part.empty()) out.push_back(std::move(part));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("invalid value for " + key + ": " + v);
  return out;
}

double parse_fraction(const std::string& key, const std::string& v) {
  const double x = parse_number<double>(key, v);
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(key + " must lie in [0, 1]: " + v);
  return x;
}

std::size_t parse_count(const std::string& key, const std::string& v, std::size_t min = 1) {
  const auto x = parse_number<std::size_t>(key, v);
  if (x < min) throw ConfigError(key + " must be >= " + std::to_string(min));
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid value for " + key + ": " + v);
}

std::string fmt(double x) { return nlohmann::json(x).dump(); }

}  // namespace

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  ConfigMap out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path.string() + ":" + std::to_string(no) + ": expected key = value");
    out[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

std::pair<std::string, std::string> parse_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: " + kv);
  return {trim(std::string_view(kv).substr(0, eq)), trim(std::string_view(kv).substr(eq + 1))};
}

PipelineConfig make_config(const ConfigMap& raw) {
  std::set<std::string> known;
  for (const auto& [k, _] : config_keys()) known.insert(k);
  for (const auto& [k, _] : raw)
    if (!known.count(k)) throw ConfigError("unknown config key: " + k);

  PipelineConfig cfg;
  const auto get = [&](const std::string& key) -> const std::string* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };
  if (auto v = get("seed")) cfg.seed = parse_number<std::uint64_t>("seed", *v);
  cfg.synth.seed = cfg.seed;
  cfg.train.seed = cfg.seed;

  if (auto v = get("input"); v && !v->empty()) cfg.input = *v;
  if (auto v = get("intervals")) {
    for (const auto& part : split(*v, ',')) {
      try {
        cfg.intervals.push_back(parse_interval(part));
      } catch (const Error& e) {
        throw ConfigError(std::string("invalid value for intervals: ") + e.what());
      }
    }
  }

  cfg.truth = cfg.input ? TruthSource::none : TruthSource::generating;
  if (auto v = get("truth")) {
    if (*v == "none") cfg.truth = TruthSource::none;
    else if (*v == "file") cfg.truth = TruthSource::file;
    else if (*v == "fuzzy") cfg.truth = TruthSource::fuzzy;
    else if (*v == "generating") cfg.truth = TruthSource::generating;
    else throw ConfigError("invalid value for truth: " + *v);
  }
  if (auto v = get("truth_file")) cfg.truth_path = *v;
  if (auto v = get("topics_file")) cfg.topics_path = *v;
  if (auto v = get("fuzzy_threshold")) {
    cfg.fuzzy_threshold = parse_number<double>("fuzzy_threshold", *v);
    if (!(cfg.fuzzy_threshold > 0.0 && cfg.fuzzy_threshold <= 1.0))
      throw ConfigError("fuzzy_threshold must lie in (0, 1]");
  }
  if (cfg.truth == TruthSource::file && !cfg.truth_path) throw ConfigError("truth=file requires truth_file");
  if (cfg.truth == TruthSource::fuzzy && cfg.input && !cfg.topics_path)
    throw ConfigError("truth=fuzzy on an input corpus requires topics_file");
  if (cfg.truth == TruthSource::generating && cfg.input)
    throw ConfigError("truth=generating is only available for synthetic input");

  if (auto v = get("synth.topics")) cfg.synth.n_topics = parse_count("synth.topics", *v);
  if (auto v = get("synth.per_topic")) cfg.synth.per_topic = parse_count("synth.per_topic", *v);
  if (auto v = get("synth.noise")) cfg.synth.noise_rate = parse_fraction("synth.noise", *v);
  if (auto v = get("synth.hashtag_rate")) cfg.synth.hashtag_rate = parse_fraction("synth.hashtag_rate", *v);
  if (auto v = get("synth.words")) cfg.synth.words_per_template = parse_count("synth.words", *v);
  if (auto v = get("synth.word_min")) cfg.synth.min_word_length = parse_count("synth.word_min", *v);
  if (auto v = get("synth.word_max")) cfg.synth.max_word_length = parse_count("synth.word_max", *v);
  if (cfg.synth.max_word_length < cfg.synth.min_word_length)
    throw ConfigError("synth.word_max must be >= synth.word_min");
  if (auto v = get("synth.seed")) cfg.synth.seed = parse_number<std::uint64_t>("synth.seed", *v);

  if (auto v = get("representation")) {
    if (*v == "tweetterm") cfg.representation = Representation::tweetterm;
    else if (*v == "tweet2vec") cfg.representation = Representation::tweet2vec;
    else throw ConfigError("invalid value for representation: " + *v);
  }
  if (auto v = get("min_df")) cfg.min_df = parse_count("min_df", *v);
  if (auto v = get("model"); v && !v->empty()) cfg.model_path = *v;
  if (auto v = get("keep_hashtags")) cfg.keep_hashtags = parse_bool("keep_hashtags", *v);

  if (auto v = get("train.hidden")) cfg.train.hidden = parse_count("train.hidden", *v);
  if (auto v = get("train.embed")) cfg.train.embed = parse_count("train.embed", *v);
  if (auto v = get("train.batch")) cfg.train.batch = parse_count("train.batch", *v);
  if (auto v = get("train.lr")) {
    cfg.train.learning_rate = parse_number<double>("train.lr", *v);
    if (!(cfg.train.learning_rate > 0.0)) throw ConfigError("train.lr must be positive");
  }
  if (auto v = get("train.epochs")) cfg.train.epochs = parse_count("train.epochs", *v);
  if (auto v = get("train.clip")) {
    cfg.train.clip_norm = parse_number<double>("train.clip", *v);
    if (!(cfg.train.clip_norm > 0.0)) throw ConfigError("train.clip must be positive");
  }
  if (auto v = get("train.min_char_freq")) cfg.train.min_char_freq = parse_count("train.min_char_freq", *v);
  if (auto v = get("train.min_tag_freq")) cfg.train.min_tag_freq = parse_count("train.min_tag_freq", *v);
  if (auto v = get("train.seed")) cfg.train.seed = parse_number<std::uint64_t>("train.seed", *v);

  if (auto v = get("metric")) cfg.metric = parse_metric(*v);
  if (auto v = get("linkage")) cfg.linkage = parse_linkage(*v);
  cfg.grid = default_grid();
  if (auto v = get("grid")) {
    cfg.grid.clear();
    for (const auto& part : split(*v, ',')) {
      const double t = parse_number<double>("grid", part);
      if (!(t >= 0.0)) throw ConfigError("grid thresholds must be non-negative");
      cfg.grid.push_back(t);
    }
    if (cfg.grid.empty()) throw ConfigError("grid must not be empty");
    for (std::size_t i = 1; i < cfg.grid.size(); ++i)
      if (!(cfg.grid[i] > cfg.grid[i - 1])) throw ConfigError("grid thresholds must be strictly increasing");
  }
  if (auto v = get("ami")) {
    if (*v == "max") cfg.ami = AmiNormalizer::max;
    else if (*v == "arithmetic") cfg.ami = AmiNormalizer::arithmetic;
    else throw ConfigError("invalid value for ami: " + *v);
  }
  if (auto v = get("top")) cfg.top = parse_count("top", *v);
  if (auto v = get("output")) cfg.output = *v;
  return cfg;
}

ConfigMap to_map(const PipelineConfig& cfg) {
  ConfigMap m;
  static constexpr const char* kTruth[] = {"none", "file", "fuzzy", "generating"};
  m["seed"] = std::to_string(cfg.seed);
  if (cfg.input) {
    m["input"] = cfg.input->string();
  } else {
    m["synth.topics"] = std::to_string(cfg.synth.n_topics);
    m["synth.per_topic"] = std::to_string(cfg.synth.per_topic);
    m["synth.noise"] = fmt(cfg.synth.noise_rate);
    m["synth.hashtag_rate"] = fmt(cfg.synth.hashtag_rate);
    m["synth.words"] = std::to_string(cfg.synth.words_per_template);
    m["synth.word_min"] = std::to_string(cfg.synth.min_word_length);
    m["synth.word_max"] = std::to_string(cfg.synth.max_word_length);
    m["synth.seed"] = std::to_string(cfg.synth.seed);
  }
  std::string intervals;
  for (const auto& iv : cfg.intervals)
    intervals += (intervals.empty() ? "" : ",") + iv.name + "=" + std::to_string(iv.start) + ".." + std::to_string(iv.end);
  if (!intervals.empty()) m["intervals"] = intervals;
  m["truth"] = kTruth[static_cast<int>(cfg.truth)];
  if (cfg.truth_path) m["truth_file"] = cfg.truth_path->string();
  if (cfg.topics_path) m["topics_file"] = cfg.topics_path->string();
  m["fuzzy_threshold"] = fmt(cfg.fuzzy_threshold);
  m["representation"] = std::string(to_string(cfg.representation));
  if (cfg.representation == Representation::tweetterm) {
    m["min_df"] = std::to_string(cfg.min_df);
  } else {
    if (cfg.model_path) m["model"] = cfg.model_path->string();
    m["keep_hashtags"] = cfg.keep_hashtags ? "true" : "false";
    m["train.hidden"] = std::to_string(cfg.train.hidden);
    m["train.embed"] = std::to_string(cfg.train.embed);
    m["train.batch"] = std::to_string(cfg.train.batch);
    m["train.lr"] = fmt(cfg.train.learning_rate);
    m["train.epochs"] = std::to_string(cfg.train.epochs);
    m["train.clip"] = fmt(cfg.train.clip_norm);
    m["train.min_char_freq"] = std::to_string(cfg.train.min_char_freq);
    m["train.min_tag_freq"] = std::to_string(cfg.train.min_tag_freq);
    m["train.seed"] = std::to_string(cfg.train.seed);
  }
  m["metric"] = std::string(to_string(cfg.metric));
  m["linkage"] = std::string(to_string(cfg.linkage));
  std::string grid;
  for (double t : cfg.grid) grid += (grid.empty() ? "" : ",") + fmt(t);
  m["grid"] = grid;
  m["ami"] = cfg.ami == AmiNormalizer::max ? "max" : "arithmetic";
  m["top"] = std::to_string(cfg.top);
  return m;
}

}  // namespace tweetclust
