#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tweetclust/config.hpp"
#include "tweetclust/corpus.hpp"
#include "tweetclust/hac.hpp"
#include "tweetclust/selection.hpp"

namespace tweetclust {

/// Corpus plus ground truth as a run sees them.
struct Dataset {
  Corpus corpus;
  GroundTruth truth;
  bool has_truth = false;
};

Dataset load_dataset(const PipelineConfig& cfg);

/// Vectors of the clusterable tweets of one interval. Tweets that cannot be
/// represented (no frequent n-gram, or empty encoder input) are `garbage`.
struct Features {
  std::vector<std::size_t> clustered;  // corpus indices
  std::vector<std::size_t> garbage;    // corpus indices
  Eigen::MatrixXd rows;                // one per clustered tweet
};

/// Encoder used by the tweet2vec representation: loaded from cfg.model_path
/// or trained on the whole corpus.
struct EncoderState {
  EncoderModel<double> model;
  std::vector<double> epoch_loss;  // empty when loaded
};

EncoderState prepare_encoder(const PipelineConfig& cfg, const Corpus& corpus);

Features build_features(const PipelineConfig& cfg, const Corpus& corpus, std::span<const std::size_t> members,
                        const EncoderState* encoder);

struct IntervalResult {
  std::string interval;
  std::size_t n_tweets = 0;
  std::size_t n_garbage = 0;
  std::size_t n_labeled = 0;
  std::optional<double> cpcc;
  GridReport grid;
  std::optional<std::size_t> chosen;  // row of the reported flat clustering
  std::string selection;              // "v_measure", "silhouette" or "first"
  std::vector<std::size_t> members;   // corpus indices, clustered then garbage
  std::vector<int> labels;            // aligned with members
  std::vector<ClusterSummary> summaries;
};

struct PipelineResult {
  std::string fingerprint;
  std::vector<IntervalResult> intervals;
};

/// Runs representation → distances → linkage → grid search → summaries for
/// every interval and, when `write` is set, writes all artifacts below
/// cfg.output.
PipelineResult run_pipeline(const PipelineConfig& cfg, bool write = true);

/// FNV-1a 64 over the serialized corpus, as 16 hex digits.
std::string corpus_fingerprint(const Corpus& corpus);

struct CpccRow {
  std::string interval;
  Metric metric;
  Linkage linkage;
  std::optional<double> cpcc;  // null when undefined (degenerate distances)
};

/// CPCC of every metric × linkage combination, per interval.
std::vector<CpccRow> cpcc_scan(const PipelineConfig& cfg);
void write_cpcc_table(std::span<const CpccRow> rows, std::ostream& out);

/// Side-by-side extrinsic scores of two pipeline output directories.
/// Throws when the runs used different corpora. Warnings go to `warn`.
void compare_runs(const std::filesystem::path& a, const std::filesystem::path& b, std::ostream& out,
                  std::ostream& warn);

}  // namespace tweetclust
