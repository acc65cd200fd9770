#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tweetclust/corpus.hpp"
#include "tweetclust/hac.hpp"
#include "tweetclust/metrics.hpp"
#include "tweetclust/tweet2vec.hpp"

namespace tweetclust {

enum class Representation { tweetterm, tweet2vec };

std::string_view to_string(Representation r);

/// Where ground truth comes from: none, a JSONL export, fuzzy matching
/// against topic labels, or (synthetic input only) the generating topics.
enum class TruthSource { none, file, fuzzy, generating };

/// Everything a pipeline run needs. Every field has a documented default;
/// see `config_keys()` for the key names.
struct PipelineConfig {
  std::optional<std::filesystem::path> input;  // JSONL corpus; synthetic when absent
  SynthConfig synth;
  std::vector<Interval> intervals;  // empty: one interval "all"

  TruthSource truth = TruthSource::none;
  std::optional<std::filesystem::path> truth_path;   // for TruthSource::file
  std::optional<std::filesystem::path> topics_path;  // for TruthSource::fuzzy on a file corpus
  double fuzzy_threshold = 0.9;

  Representation representation = Representation::tweetterm;
  std::size_t min_df = 10;
  TrainConfig train;
  std::optional<std::filesystem::path> model_path;  // pretrained encoder; trained when absent
  bool keep_hashtags = true;

  Metric metric = Metric::euclidean;
  Linkage linkage = Linkage::average;
  std::vector<double> grid;  // default 0.1..1.5
  AmiNormalizer ami = AmiNormalizer::max;
  std::size_t top = 20;

  std::filesystem::path output = "out";
  std::uint64_t seed = 1;
};

using ConfigMap = std::map<std::string, std::string>;

/// Known keys with a one-line description each.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Parses "key = value" lines; '#' starts a comment. Errors name the line.
ConfigMap read_config_file(const std::filesystem::path& path);
/// "key=value" override.
std::pair<std::string, std::string> parse_override(const std::string& kv);

/// Builds a config from raw keys. Unknown keys and bad values throw
/// ConfigError naming the key. The seed also seeds synthesis and training
/// unless those are set explicitly.
PipelineConfig make_config(const ConfigMap& raw);

/// Canonical key=value listing (sorted), for run manifests.
ConfigMap to_map(const PipelineConfig& cfg);

}  // namespace tweetclust
