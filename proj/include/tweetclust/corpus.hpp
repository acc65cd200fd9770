#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetclust/error.hpp"

namespace tweetclust {

/// One short document.
///
/// `norm_text` is the character-level normalization (URLs, mentions and the
/// RT prefix removed, lowercased); `norm_text_word` additionally splits every
/// punctuation or symbol character into its own token and feeds the n-gram
/// baseline. `hashtags` are taken from `raw_text` before any stripping.
struct Tweet {
  std::string id;
  std::string raw_text;
  std::string norm_text;
  std::string norm_text_word;
  std::int64_t timestamp = 0;
  std::vector<std::string> hashtags;
  std::optional<std::string> lang;
  std::optional<std::string> interval;

  bool operator==(const Tweet&) const = default;
};

/// Half-open time window [start, end) in UTC seconds.
struct Interval {
  std::string name;
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool contains(std::int64_t t) const { return t >= start && t < end; }
  bool operator==(const Interval&) const = default;
};

/// Immutable ordered tweet collection with unique ids.
class Corpus {
 public:
  Corpus() = default;
  /// Tags each tweet with the interval containing its timestamp (or none).
  /// Throws Error on duplicate ids or overlapping intervals.
  Corpus(std::vector<Tweet> tweets, std::vector<Interval> intervals = {});

  const std::vector<Tweet>& tweets() const { return tweets_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }
  const Tweet& operator[](std::size_t i) const { return tweets_[i]; }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Indices of the tweets tagged with the named interval, in corpus order.
  std::vector<std::size_t> members(std::string_view interval) const;

  bool operator==(const Corpus& o) const {
    return tweets_ == o.tweets_ && intervals_ == o.intervals_;
  }

 private:
  std::vector<Tweet> tweets_;
  std::vector<Interval> intervals_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Partial tweet → topic assignment. Topic ids index `topics`.
struct GroundTruth {
  struct Entry {
    std::string tweet_id;
    int topic = 0;
    double ratio = 1.0;
    bool operator==(const Entry&) const = default;
  };

  std::vector<std::string> topics;
  std::vector<Entry> entries;

  bool empty() const { return entries.empty(); }
  /// Topic of the tweet, if labeled.
  std::optional<int> topic_of(std::string_view tweet_id) const;
  /// Per-index topic for the given corpus indices, -1 when unlabeled.
  std::vector<int> labels_for(const Corpus& corpus, std::span<const std::size_t> indices) const;
};

/// Applies the tweet preprocessing rules: drops a leading "RT" token, URL
/// tokens ("http://…", "https://…" up to the next white space) and @-mention
/// tokens, lowercases, optionally splits punctuation into separate tokens, and
/// collapses white space.
std::string normalize(std::string_view raw, bool word_level);

/// Lowercased '#'-prefixed tokens of the raw text, '#' removed.
std::vector<std::string> extract_hashtags(std::string_view raw);

/// Removes every token starting with '#'.
std::string strip_hashtags(std::string_view text);

Tweet make_tweet(std::string id, std::string raw_text, std::int64_t timestamp,
                 std::optional<std::string> lang = std::nullopt);

/// Reads line-delimited JSON {"id": str, "text": str, "timestamp": int, "lang": str?}.
/// Blank lines are skipped. Errors name the 1-based line number.
Corpus read_corpus(std::istream& in, std::vector<Interval> intervals = {});
Corpus load_corpus(const std::filesystem::path& path, std::vector<Interval> intervals = {});
void write_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Parses "name=start..end"; start/end are ISO-8601 UTC timestamps
/// (YYYY-MM-DDTHH:MM[:SS][Z]) or integer epoch seconds.
Interval parse_interval(std::string_view spec);
std::int64_t parse_timestamp(std::string_view s);

void write_ground_truth(const GroundTruth& truth, std::ostream& out);
/// Reads the JSONL export; topic labels come from a separate file, so
/// `topics` is filled with placeholders sized to the largest topic id.
GroundTruth read_ground_truth(std::istream& in);
GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

/// One label per line, blank lines skipped.
std::vector<std::string> load_topic_labels(const std::filesystem::path& path);

/// Planted-topic corpus generator.
struct SynthConfig {
  std::size_t n_topics = 10;
  std::size_t per_topic = 20;
  double noise_rate = 0.05;
  double hashtag_rate = 0.5;
  std::uint64_t seed = 1;
  std::size_t words_per_template = 6;
  std::size_t min_word_length = 2;
  std::size_t max_word_length = 5;
  std::int64_t start_time = 1393351200;  // 2014-02-25T18:00:00Z
};

struct SynthCorpus {
  Corpus corpus;
  GroundTruth truth;
  std::vector<std::string> hashtags;  // per topic, without '#'
};

/// Every topic is a template sentence of pseudo-words. Each tweet copies its
/// template and mutates every character independently with probability
/// `noise_rate` (substitute, insert or delete, chosen uniformly), then appends
/// " #<topic tag>" with probability `hashtag_rate`. Tweets of all topics are
/// interleaved in time. Deterministic given the seed.
SynthCorpus synth_corpus(const SynthConfig& cfg);

}  // namespace tweetclust
