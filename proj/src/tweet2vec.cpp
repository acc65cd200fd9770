#include "tweetclust/tweet2vec.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "tweetclust/text.hpp"

namespace tweetclust {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "tweetclust-encoder";
constexpr int kVersion = 1;

}  // namespace

CharVocab::CharVocab(std::vector<char32_t> chars) : chars_(std::move(chars)) {
  std::sort(chars_.begin(), chars_.end());
  chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
  for (std::size_t i = 0; i < chars_.size(); ++i) index_.emplace(chars_[i], static_cast<int>(i + 1));
}

CharVocab CharVocab::build(std::span<const std::string> texts, std::size_t min_freq) {
  std::map<char32_t, std::size_t> freq;
  for (const auto& t : texts)
    for (char32_t c : text::decode(t)) ++freq[c];
  std::vector<char32_t> keep;
  for (const auto& [c, n] : freq)
    if (n >= min_freq) keep.push_back(c);
  return CharVocab(std::move(keep));
}

int CharVocab::lookup(char32_t c) const {
  const auto it = index_.find(c);
  return it == index_.end() ? kUnknown : it->second;
}

std::vector<int> CharVocab::encode(std::string_view utf8) const {
  std::vector<int> ids;
  for (char32_t c : text::decode(utf8)) ids.push_back(lookup(c));
  return ids;
}

TrainingSet make_training_set(std::span<const Tweet> tweets, std::size_t min_tag_freq) {
  std::map<std::string, std::size_t> freq;
  for (const auto& t : tweets)
    for (const auto& tag : std::set<std::string>(t.hashtags.begin(), t.hashtags.end())) ++freq[tag];

  TrainingSet set;
  std::map<std::string, int> label_id;
  for (const auto& [tag, n] : freq)
    if (n >= min_tag_freq) {
      label_id.emplace(tag, static_cast<int>(set.labels.size()));
      set.labels.push_back(tag);
    }
  for (const auto& t : tweets) {
    std::string input = strip_hashtags(t.norm_text);
    if (input.empty()) continue;
    for (const auto& tag : std::set<std::string>(t.hashtags.begin(), t.hashtags.end())) {
      const auto it = label_id.find(tag);
      if (it == label_id.end()) continue;
      set.texts.push_back(input);
      set.targets.push_back(it->second);
    }
  }
  return set;
}

namespace {

template <typename F>
void for_each_pair(EncoderModel<double>& a, EncoderModel<double>& b, F&& f) {
  std::vector<Eigen::Map<Eigen::VectorXd>> views;
  b.visit([&](const std::string&, auto& t) { views.emplace_back(t.data(), t.size()); });
  std::size_t k = 0;
  a.visit([&](const std::string&, auto& t) {
    Eigen::Map<Eigen::VectorXd> va(t.data(), t.size());
    f(va, views[k++]);
  });
}

double squared_norm(const EncoderModel<double>& m) {
  double s = 0.0;
  m.visit([&](const std::string&, const auto& t) { s += t.squaredNorm(); });
  return s;
}

}  // namespace

TrainResult train(const TrainingSet& data, const TrainConfig& cfg) {
  if (data.texts.empty()) throw Error("no hashtagged tweets to train on");
  if (data.texts.size() != data.targets.size()) throw Error("training set texts and targets differ in length");
  if (cfg.hidden < 1 || cfg.embed < 1 || cfg.batch < 1 || cfg.epochs < 1)
    throw ConfigError("train: hidden, embed, batch and epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0) || !(cfg.clip_norm > 0.0))
    throw ConfigError("train: learning rate and clip norm must be positive");

  Rng rng(cfg.seed);
  auto model = EncoderModel<double>::zeros(CharVocab::build(data.texts, cfg.min_char_freq), data.labels,
                                           static_cast<Eigen::Index>(cfg.hidden),
                                           static_cast<Eigen::Index>(cfg.embed));
  model.init_uniform(rng);

  std::vector<std::vector<int>> inputs;
  inputs.reserve(data.texts.size());
  for (const auto& t : data.texts) inputs.push_back(model.vocab.encode(t));

  TrainResult result;
  auto grad = EncoderModel<double>::zeros(model.vocab, model.labels, model.hidden(), model.embed());
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch);
      grad.visit([](const std::string&, auto& t) { t.setZero(); });
      for (std::size_t i = begin; i < end; ++i)
        total += loss_and_gradient(model, inputs[order[i]], data.targets[order[i]], &grad);
      double scale = 1.0 / static_cast<double>(end - begin);
      const double norm = std::sqrt(squared_norm(grad)) * scale;
      if (norm > cfg.clip_norm) scale *= cfg.clip_norm / norm;
      const double step = cfg.learning_rate * scale;
      for_each_pair(model, grad, [&](auto& p, const auto& g) { p -= step * g; });
    }
    result.epoch_loss.push_back(total / static_cast<double>(order.size()));
  }
  result.model = std::move(model);
  return result;
}

TrainResult train(const Corpus& corpus, const TrainConfig& cfg) {
  return train(make_training_set(corpus.tweets(), cfg.min_tag_freq), cfg);
}

double max_relative_error(std::span<const double> analytic, std::span<const double> numeric) {
  if (analytic.size() != numeric.size()) throw Error("max_relative_error: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i], n = numeric[i];
    worst = std::max(worst, std::abs(a - n) / std::max(std::abs(a) + std::abs(n), 1e-8));
  }
  return worst;
}

double gradient_check(const GradientCheckDims& dims, std::uint64_t seed, double step) {
  if (dims.vocab < 2 || dims.labels < 1 || dims.length < 1) throw Error("gradient_check: degenerate dims");
  Rng rng(seed);
  std::vector<char32_t> chars;
  for (std::size_t i = 1; i < dims.vocab; ++i) chars.push_back(U'a' + static_cast<char32_t>(i - 1));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dims.labels; ++i) labels.push_back("l" + std::to_string(i));
  auto model = EncoderModel<double>::zeros(CharVocab(chars), labels, static_cast<Eigen::Index>(dims.hidden),
                                           static_cast<Eigen::Index>(dims.embed));
  // Larger than the training init so every gate is away from its linear regime
  // and biases are non-zero.
  model.visit([&](const std::string&, auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-1.0, 1.0);
  });
  std::vector<int> ids(dims.length);
  for (auto& id : ids) id = static_cast<int>(rng.index(dims.vocab));
  const int label = static_cast<int>(rng.index(dims.labels));

  auto grad = EncoderModel<double>::zeros(model.vocab, model.labels, model.hidden(), model.embed());
  loss_and_gradient(model, ids, label, &grad);

  std::vector<double> analytic, numeric;
  for_each_pair(model, grad, [&](auto& p, const auto& g) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + step;
      const double up = loss_and_gradient<double>(model, ids, label, nullptr);
      p[i] = saved - step;
      const double down = loss_and_gradient<double>(model, ids, label, nullptr);
      p[i] = saved;
      analytic.push_back(g[i]);
      numeric.push_back((up - down) / (2.0 * step));
    }
  });
  return max_relative_error(analytic, numeric);
}

void save_model(const EncoderModel<double>& m, const std::filesystem::path& path) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["hidden"] = m.hidden();
  j["embed"] = m.embed();
  std::vector<std::uint32_t> chars(m.vocab.chars().begin(), m.vocab.chars().end());
  j["vocab"] = chars;
  j["labels"] = m.labels;
  json tensors = json::object();
  m.visit([&](const std::string& name, const auto& t) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = t;
    tensors[name] = {{"rows", rm.rows()},
                     {"cols", rm.cols()},
                     {"data", std::vector<double>(rm.data(), rm.data() + rm.size())}};
  });
  j["tensors"] = std::move(tensors);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

EncoderModel<double> load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j;
  try {
    in >> j;
    if (j.at("format") != kFormat) throw Error(path.string() + ": not an encoder checkpoint");
    if (j.at("version") != kVersion)
      throw Error(path.string() + ": unsupported checkpoint version " + j.at("version").dump());
    std::vector<char32_t> chars;
    for (const auto& c : j.at("vocab")) chars.push_back(static_cast<char32_t>(c.get<std::uint32_t>()));
    auto m = EncoderModel<double>::zeros(CharVocab(std::move(chars)), j.at("labels").get<std::vector<std::string>>(),
                                         j.at("hidden").get<Eigen::Index>(), j.at("embed").get<Eigen::Index>());
    const auto& tensors = j.at("tensors");
    m.visit([&](const std::string& name, auto& t) {
      const auto& e = tensors.at(name);
      const auto data = e.at("data").get<std::vector<double>>();
      if (e.at("rows").get<Eigen::Index>() != t.rows() || e.at("cols").get<Eigen::Index>() != t.cols() ||
          static_cast<Eigen::Index>(data.size()) != t.size())
        throw Error(path.string() + ": tensor " + name + " has the wrong shape");
      t = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          data.data(), t.rows(), t.cols());
    });
    return m;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": malformed checkpoint: " + e.what());
  }
}

}  // namespace tweetclust
