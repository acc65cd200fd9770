// Command-line driver: pipeline, cpcc-scan, compare, synth, train, ground-truth.
// Exit codes: 0 ok, 1 runtime error, 2 configuration error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tweetclust/config.hpp"
#include "tweetclust/corpus.hpp"
#include "tweetclust/error.hpp"
#include "tweetclust/fuzzymatch.hpp"
#include "tweetclust/pipeline.hpp"
#include "tweetclust/tweet2vec.hpp"

namespace tc = tweetclust;

namespace {

struct ConfigArgs {
  std::string file;
  std::vector<std::string> overrides;
};

void add_config_args(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.file, "key = value config file");
  cmd->add_option("-s,--set", args.overrides, "override a config key (key=value), repeatable");
}

tc::PipelineConfig load_config(const ConfigArgs& args) {
  tc::ConfigMap raw;
  if (!args.file.empty()) raw = tc::read_config_file(args.file);
  for (const auto& kv : args.overrides) {
    auto [k, v] = tc::parse_override(kv);
    raw[k] = v;
  }
  return tc::make_config(raw);
}

std::string key_help() {
  std::string s = "Config keys:\n";
  for (const auto& [k, d] : tc::config_keys()) s += "  " + k + std::string(k.size() < 22 ? 22 - k.size() : 1, ' ') + d + "\n";
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw tc::Error("cannot write " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster short noisy texts with n-gram or character-GRU representations."};
  app.require_subcommand(1);
  app.footer(key_help());

  ConfigArgs pipeline_args;
  auto* pipeline = app.add_subcommand("pipeline", "cluster every interval and write all reports");
  add_config_args(pipeline, pipeline_args);

  ConfigArgs scan_args;
  std::string scan_out;
  auto* scan = app.add_subcommand("cpcc-scan", "cophenetic correlation of all metric x linkage pairs");
  add_config_args(scan, scan_args);
  scan->add_option("-o,--output", scan_out, "TSV path (stdout when omitted)");

  std::string run_a, run_b;
  auto* compare = app.add_subcommand("compare", "side-by-side extrinsic scores of two pipeline runs");
  compare->add_option("run_a", run_a, "first output directory")->required();
  compare->add_option("run_b", run_b, "second output directory")->required();

  tc::SynthConfig synth_cfg;
  std::string synth_out, synth_truth, synth_topics;
  auto* synth = app.add_subcommand("synth", "generate a planted-topic corpus");
  synth->add_option("--topics", synth_cfg.n_topics, "number of topics")->check(CLI::PositiveNumber);
  synth->add_option("--per-topic", synth_cfg.per_topic, "tweets per topic")->check(CLI::PositiveNumber);
  synth->add_option("--noise", synth_cfg.noise_rate, "per-character mutation probability")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--hashtag-rate", synth_cfg.hashtag_rate, "hashtag probability")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--words", synth_cfg.words_per_template, "words per template")->check(CLI::PositiveNumber);
  synth->add_option("--word-min", synth_cfg.min_word_length, "shortest word")->check(CLI::PositiveNumber);
  synth->add_option("--word-max", synth_cfg.max_word_length, "longest word")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_cfg.seed, "seed");
  synth->add_option("-o,--output", synth_out, "corpus JSONL")->required();
  synth->add_option("--truth", synth_truth, "write the generating topics as ground-truth JSONL");
  synth->add_option("--topic-labels", synth_topics, "write the topic templates, one per line");

  ConfigArgs train_args;
  std::string model_out;
  auto* train_cmd = app.add_subcommand("train", "train the character GRU encoder on the configured corpus");
  add_config_args(train_cmd, train_args);
  train_cmd->add_option("-o,--output", model_out, "checkpoint path")->required();

  std::string gt_input, gt_topics, gt_out;
  double gt_threshold = 0.9;
  auto* gt = app.add_subcommand("ground-truth", "fuzzy-match tweets to topic labels");
  gt->add_option("-i,--input", gt_input, "corpus JSONL")->required();
  gt->add_option("-t,--topics", gt_topics, "topic labels, one per line")->required();
  gt->add_option("--threshold", gt_threshold, "ratio a match must exceed");
  gt->add_option("-o,--output", gt_out, "ground-truth JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*pipeline) {
      const auto cfg = load_config(pipeline_args);
      const auto result = tc::run_pipeline(cfg);
      for (const auto& r : result.intervals) {
        std::cout << r.interval << ": " << r.n_tweets << " tweets, " << r.n_garbage << " garbage";
        if (r.chosen) {
          const auto& row = r.grid.rows[*r.chosen];
          std::cout << ", threshold " << row.threshold << " (" << r.selection << "), " << row.n_clusters
                    << " clusters";
          if (row.v_measure) std::cout << ", V " << *row.v_measure << ", ARI " << *row.ari;
        }
        std::cout << '\n';
      }
      std::cout << "reports in " << cfg.output.string() << '\n';
    } else if (*scan) {
      const auto rows = tc::cpcc_scan(load_config(scan_args));
      if (scan_out.empty()) {
        tc::write_cpcc_table(rows, std::cout);
      } else {
        auto out = open_out(scan_out);
        tc::write_cpcc_table(rows, out);
      }
    } else if (*compare) {
      tc::compare_runs(run_a, run_b, std::cout, std::cerr);
    } else if (*synth) {
      if (synth_cfg.max_word_length < synth_cfg.min_word_length)
        throw tc::ConfigError("--word-max must be >= --word-min");
      const auto sc = tc::synth_corpus(synth_cfg);
      tc::save_corpus(sc.corpus, synth_out);
      if (!synth_truth.empty()) tc::save_ground_truth(sc.truth, synth_truth);
      if (!synth_topics.empty()) {
        auto out = open_out(synth_topics);
        for (const auto& t : sc.truth.topics) out << t << '\n';
      }
      std::cout << sc.corpus.size() << " tweets written to " << synth_out << '\n';
    } else if (*train_cmd) {
      auto cfg = load_config(train_args);
      cfg.truth = tc::TruthSource::none;
      const auto ds = tc::load_dataset(cfg);
      const auto r = tc::train(ds.corpus, cfg.train);
      tc::save_model(r.model, model_out);
      for (std::size_t e = 0; e < r.epoch_loss.size(); ++e)
        std::cout << "epoch " << e + 1 << " loss " << r.epoch_loss[e] << '\n';
    } else if (*gt) {
      if (!(gt_threshold > 0.0 && gt_threshold <= 1.0)) throw tc::ConfigError("--threshold must lie in (0, 1]");
      const auto corpus = tc::load_corpus(gt_input);
      const auto topics = tc::load_topic_labels(gt_topics);
      const auto truth = tc::build_ground_truth(topics, corpus, gt_threshold);
      tc::save_ground_truth(truth, gt_out);
      std::cout << truth.entries.size() << " of " << corpus.size() << " tweets matched to " << topics.size()
                << " topics\n";
    }
  } catch (const tc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
