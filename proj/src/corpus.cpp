#include "tweetclust/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tweetclust/error.hpp"
#include "tweetclust/fuzzymatch.hpp"
#include "tweetclust/rng.hpp"
#include "tweetclust/text.hpp"

namespace tweetclust {

using nlohmann::json;

namespace {

// Cuts each "http://" / "https://" occurrence up to the end of the token.
std::u32string strip_urls(std::u32string token) {
  static constexpr std::u32string_view kSchemes[] = {U"http://", U"https://"};
  std::size_t cut = std::u32string::npos;
  for (auto scheme : kSchemes) cut = std::min(cut, token.find(scheme));
  if (cut != std::u32string::npos) token.resize(cut);
  return token;
}

std::string join(const std::vector<std::u32string>& tokens) {
  std::u32string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(U' ');
    out += t;
  }
  return text::encode(out);
}

}  // namespace

std::string normalize(std::string_view raw, bool word_level) {
  auto tokens = text::split_ws(text::decode(raw));
  if (!tokens.empty() && tokens.front() == U"RT") tokens.erase(tokens.begin());

  std::vector<std::u32string> kept;
  for (auto& tok : tokens) {
    auto lower = text::to_lower(tok);
    if (lower.front() == U'@') continue;
    lower = strip_urls(std::move(lower));
    if (!lower.empty()) kept.push_back(std::move(lower));
  }
  if (!word_level) return join(kept);

  std::vector<std::u32string> split;
  for (const auto& tok : kept) {
    std::u32string run;
    for (char32_t c : tok) {
      if (text::is_punct_or_symbol(c)) {
        if (!run.empty()) split.push_back(std::exchange(run, {}));
        // A lone "@" would read as a mention token on re-normalization.
        if (c != U'@') split.emplace_back(1, c);
      } else {
        run.push_back(c);
      }
    }
    if (!run.empty()) split.push_back(std::move(run));
  }
  return join(split);
}

std::vector<std::string> extract_hashtags(std::string_view raw) {
  std::vector<std::string> tags;
  for (const auto& tok : text::split_ws(text::decode(raw))) {
    if (tok.size() > 1 && tok.front() == U'#') tags.push_back(text::encode(text::to_lower(tok.substr(1))));
  }
  return tags;
}

std::string strip_hashtags(std::string_view s) {
  std::vector<std::u32string> kept;
  for (auto& tok : text::split_ws(text::decode(s)))
    if (tok.front() != U'#') kept.push_back(std::move(tok));
  return join(kept);
}

Tweet make_tweet(std::string id, std::string raw_text, std::int64_t timestamp,
                 std::optional<std::string> lang) {
  Tweet t;
  t.id = std::move(id);
  t.norm_text = normalize(raw_text, false);
  t.norm_text_word = normalize(raw_text, true);
  t.hashtags = extract_hashtags(raw_text);
  t.raw_text = std::move(raw_text);
  t.timestamp = timestamp;
  t.lang = std::move(lang);
  return t;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<Tweet> tweets, std::vector<Interval> intervals)
    : tweets_(std::move(tweets)), intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& a = intervals_[i];
    if (a.end <= a.start) throw Error("interval " + a.name + ": end must be after start");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& b = intervals_[j];
      if (a.name == b.name) throw Error("duplicate interval name " + a.name);
      if (a.start < b.end && b.start < a.end)
        throw Error("intervals " + b.name + " and " + a.name + " overlap");
    }
  }
  by_id_.reserve(tweets_.size());
  for (std::size_t i = 0; i < tweets_.size(); ++i) {
    auto& t = tweets_[i];
    if (!by_id_.emplace(t.id, i).second) throw Error("duplicate tweet id " + t.id);
    t.interval.reset();
    for (const auto& iv : intervals_)
      if (iv.contains(t.timestamp)) t.interval = iv.name;
  }
}

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Corpus::members(std::string_view interval) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tweets_.size(); ++i)
    if (tweets_[i].interval && *tweets_[i].interval == interval) out.push_back(i);
  return out;
}

std::optional<int> GroundTruth::topic_of(std::string_view tweet_id) const {
  for (const auto& e : entries)
    if (e.tweet_id == tweet_id) return e.topic;
  return std::nullopt;
}

std::vector<int> GroundTruth::labels_for(const Corpus& corpus,
                                         std::span<const std::size_t> indices) const {
  std::vector<int> by_index(corpus.size(), -1);
  for (const auto& e : entries) {
    auto i = corpus.find(e.tweet_id);
    if (!i) throw Error("ground truth references unknown tweet " + e.tweet_id);
    by_index[*i] = e.topic;
  }
  std::vector<int> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(by_index.at(i));
  return out;
}

// ---------------------------------------------------------------------------
// I/O

namespace {

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

Corpus read_corpus(std::istream& in, std::vector<Interval> intervals) {
  std::vector<Tweet> tweets;
  std::unordered_map<std::string, std::size_t> first_seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      throw Error(line_error(lineno, "malformed JSON"));
    }
    if (!obj.is_object()) throw Error(line_error(lineno, "expected a JSON object"));
    for (const char* field : {"id", "text", "timestamp"})
      if (!obj.contains(field)) throw Error(line_error(lineno, std::string("missing field ") + field));
    if (!obj["id"].is_string()) throw Error(line_error(lineno, "field id must be a string"));
    if (!obj["text"].is_string()) throw Error(line_error(lineno, "field text must be a string"));
    if (!obj["timestamp"].is_number_integer())
      throw Error(line_error(lineno, "field timestamp must be an integer"));
    std::optional<std::string> lang;
    if (obj.contains("lang") && !obj["lang"].is_null()) {
      if (!obj["lang"].is_string()) throw Error(line_error(lineno, "field lang must be a string"));
      lang = obj["lang"].get<std::string>();
    }
    auto id = obj["id"].get<std::string>();
    if (auto [it, fresh] = first_seen.emplace(id, lineno); !fresh)
      throw Error(line_error(lineno, "duplicate id " + id + " (first seen on line " +
                                         std::to_string(it->second) + ")"));
    tweets.push_back(make_tweet(std::move(id), obj["text"].get<std::string>(),
                                obj["timestamp"].get<std::int64_t>(), std::move(lang)));
  }
  return Corpus(std::move(tweets), std::move(intervals));
}

Corpus load_corpus(const std::filesystem::path& path, std::vector<Interval> intervals) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return read_corpus(in, std::move(intervals));
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& t : corpus.tweets()) {
    json obj = {{"id", t.id}, {"text", t.raw_text}, {"timestamp", t.timestamp}};
    if (t.lang) obj["lang"] = *t.lang;
    out << obj.dump() << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_corpus(corpus, out);
}

std::int64_t parse_timestamp(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc() && ptr == s.data() + s.size()) return value;

  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  char sep = 0;
  int consumed = 0;
  const std::string buf(s);
  const int fields = std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed);
  if (fields < 6 || (sep != 'T' && sep != ' ')) throw ConfigError("invalid timestamp '" + buf + "'");
  std::string_view rest = std::string_view(buf).substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.front() == ':') {
    int n = 0;
    if (std::sscanf(rest.data(), ":%2d%n", &sec, &n) != 1) throw ConfigError("invalid timestamp '" + buf + "'");
    rest.remove_prefix(static_cast<std::size_t>(n));
  }
  if (rest == "Z") rest = {};
  if (!rest.empty()) throw ConfigError("invalid timestamp '" + buf + "' (only UTC is supported)");

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) throw ConfigError("invalid timestamp '" + buf + "'");
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + sec;
}

Interval parse_interval(std::string_view spec) {
  const auto eq = spec.find('=');
  const auto dots = spec.find("..", eq == std::string_view::npos ? 0 : eq);
  if (eq == std::string_view::npos || eq == 0 || dots == std::string_view::npos)
    throw ConfigError("invalid interval '" + std::string(spec) + "', expected name=start..end");
  Interval iv;
  iv.name = std::string(spec.substr(0, eq));
  iv.start = parse_timestamp(spec.substr(eq + 1, dots - eq - 1));
  iv.end = parse_timestamp(spec.substr(dots + 2));
  if (iv.end <= iv.start) throw ConfigError("interval " + iv.name + ": end must be after start");
  return iv;
}

void write_ground_truth(const GroundTruth& truth, std::ostream& out) {
  for (const auto& e : truth.entries)
    out << json{{"id", e.tweet_id}, {"topic", e.topic}, {"ratio", e.ratio}}.dump() << '\n';
}

GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth truth;
  std::string line;
  std::size_t lineno = 0;
  int max_topic = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      throw Error(line_error(lineno, "malformed JSON"));
    }
    if (!obj.contains("id") || !obj["id"].is_string()) throw Error(line_error(lineno, "missing field id"));
    if (!obj.contains("topic") || !obj["topic"].is_number_integer() || obj["topic"].get<int>() < 0)
      throw Error(line_error(lineno, "missing or invalid field topic"));
    GroundTruth::Entry e{obj["id"].get<std::string>(), obj["topic"].get<int>(),
                         obj.value("ratio", 1.0)};
    max_topic = std::max(max_topic, e.topic);
    truth.entries.push_back(std::move(e));
  }
  for (int k = 0; k <= max_topic; ++k) truth.topics.push_back("topic " + std::to_string(k));
  return truth;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ground truth file " + path.string());
  return read_ground_truth(in);
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_ground_truth(truth, out);
}

std::vector<std::string> load_topic_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topic label file " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) labels.push_back(line);
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Synthetic corpora

namespace {

constexpr std::string_view kConsonants = "bcdfghklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";

std::string pseudo_word(Rng& rng, std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + rng.index(max_len - min_len + 1);
  std::string w;
  bool vowel = rng.bernoulli(0.5);
  while (w.size() < len) {
    const auto& pool = vowel ? kVowels : kConsonants;
    w.push_back(pool[rng.index(pool.size())]);
    vowel = !vowel;
  }
  return w;
}

char random_letter_except(Rng& rng, char current) {
  const auto pos = kLetters.find(current);
  if (pos == std::string_view::npos) return kLetters[rng.index(kLetters.size())];
  const auto k = rng.index(kLetters.size() - 1);
  return kLetters[k < pos ? k : k + 1];
}

std::string mutate(const std::string& source, double rate, Rng& rng) {
  std::string out;
  out.reserve(source.size() + 4);
  for (char c : source) {
    if (!rng.bernoulli(rate)) {
      out.push_back(c);
      continue;
    }
    switch (rng.index(3)) {
      case 0:  // substitute
        out.push_back(random_letter_except(rng, c));
        break;
      case 1:  // insert after
        out.push_back(c);
        out.push_back(kLetters[rng.index(kLetters.size())]);
        break;
      default:  // delete
        break;
    }
  }
  return out;
}

}  // namespace

SynthCorpus synth_corpus(const SynthConfig& cfg) {
  if (cfg.n_topics == 0 || cfg.per_topic == 0) throw Error("synth_corpus needs n_topics >= 1 and per_topic >= 1");
  if (cfg.noise_rate < 0 || cfg.noise_rate > 1 || cfg.hashtag_rate < 0 || cfg.hashtag_rate > 1)
    throw Error("synth_corpus rates must lie in [0, 1]");
  if (cfg.words_per_template == 0 || cfg.min_word_length == 0 || cfg.max_word_length < cfg.min_word_length)
    throw Error("synth_corpus word settings are inconsistent");

  Rng rng(cfg.seed);
  SynthCorpus out;

  std::vector<std::string> templates;
  while (templates.size() < cfg.n_topics) {
    std::string sentence;
    for (std::size_t w = 0; w < cfg.words_per_template; ++w) {
      if (w) sentence.push_back(' ');
      sentence += pseudo_word(rng, cfg.min_word_length, cfg.max_word_length);
    }
    if (std::find(templates.begin(), templates.end(), sentence) == templates.end())
      templates.push_back(std::move(sentence));
  }
  while (out.hashtags.size() < cfg.n_topics) {
    auto tag = pseudo_word(rng, 5, 8);
    if (std::find(out.hashtags.begin(), out.hashtags.end(), tag) == out.hashtags.end())
      out.hashtags.push_back(std::move(tag));
  }

  struct Draft {
    std::size_t topic;
    std::string text;
  };
  std::vector<Draft> drafts;
  drafts.reserve(cfg.n_topics * cfg.per_topic);
  for (std::size_t k = 0; k < cfg.n_topics; ++k) {
    for (std::size_t j = 0; j < cfg.per_topic; ++j) {
      auto text = mutate(templates[k], cfg.noise_rate, rng);
      if (rng.bernoulli(cfg.hashtag_rate)) text += " #" + out.hashtags[k];
      drafts.push_back({k, std::move(text)});
    }
  }
  rng.shuffle(drafts.begin(), drafts.end());

  std::vector<Tweet> tweets;
  tweets.reserve(drafts.size());
  std::int64_t clock = cfg.start_time;
  const int width = static_cast<int>(std::to_string(drafts.size()).size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    clock += 1 + static_cast<std::int64_t>(rng.index(30));
    char id[32];
    std::snprintf(id, sizeof id, "synth-%0*zu", width, i);
    tweets.push_back(make_tweet(id, drafts[i].text, clock, std::string("en")));
  }

  out.truth.topics = templates;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const auto k = drafts[i].topic;
    out.truth.entries.push_back({tweets[i].id, static_cast<int>(k),
                                 similarity_ratio(tweets[i].norm_text, templates[k])});
  }
  out.corpus = Corpus(std::move(tweets));
  return out;
}

}  // namespace tweetclust
