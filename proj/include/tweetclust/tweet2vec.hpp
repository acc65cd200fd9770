#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tweetclust/corpus.hpp"
#include "tweetclust/error.hpp"
#include "tweetclust/parallel.hpp"
#include "tweetclust/rng.hpp"

namespace tweetclust {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Code point → dense index. Index 0 is the unknown-character bucket.
class CharVocab {
 public:
  static constexpr int kUnknown = 0;

  CharVocab() = default;
  /// Known characters get indices 1..V-1 in code point order.
  explicit CharVocab(std::vector<char32_t> chars);
  /// Characters occurring at least `min_freq` times across the texts.
  static CharVocab build(std::span<const std::string> texts, std::size_t min_freq);

  int lookup(char32_t c) const;
  std::vector<int> encode(std::string_view utf8) const;
  std::size_t size() const { return chars_.size() + 1; }
  const std::vector<char32_t>& chars() const { return chars_; }

 private:
  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, int> index_;
};

/// Weights of one GRU direction: input maps (hidden × embed), recurrent maps
/// (hidden × hidden) and biases for the update (z), reset (r) and candidate (h)
/// paths.
template <typename Scalar>
struct GruParams {
  MatrixX<Scalar> w_z, w_r, w_h;
  MatrixX<Scalar> u_z, u_r, u_h;
  VectorX<Scalar> b_z, b_r, b_h;

  static GruParams zeros(Eigen::Index hidden, Eigen::Index embed) {
    GruParams p;
    for (auto* w : {&p.w_z, &p.w_r, &p.w_h}) w->setZero(hidden, embed);
    for (auto* u : {&p.u_z, &p.u_r, &p.u_h}) u->setZero(hidden, hidden);
    for (auto* b : {&p.b_z, &p.b_r, &p.b_h}) b->setZero(hidden);
    return p;
  }

  Eigen::Index hidden() const { return u_z.rows(); }
  Eigen::Index embed() const { return w_z.cols(); }

  template <typename Visit>
  void visit(const std::string& prefix, Visit&& f) {
    f(prefix + "w_z", w_z), f(prefix + "w_r", w_r), f(prefix + "w_h", w_h);
    f(prefix + "u_z", u_z), f(prefix + "u_r", u_r), f(prefix + "u_h", u_h);
    f(prefix + "b_z", b_z), f(prefix + "b_r", b_r), f(prefix + "b_h", b_h);
  }

  template <typename NewScalar>
  GruParams<NewScalar> cast() const {
    return {w_z.template cast<NewScalar>(), w_r.template cast<NewScalar>(), w_h.template cast<NewScalar>(),
            u_z.template cast<NewScalar>(), u_r.template cast<NewScalar>(), u_h.template cast<NewScalar>(),
            b_z.template cast<NewScalar>(), b_r.template cast<NewScalar>(), b_h.template cast<NewScalar>()};
  }
};

template <typename Scalar>
VectorX<Scalar> sigmoid(const VectorX<Scalar>& a) {
  return (Scalar(1) + (-a.array()).exp()).inverse().matrix();
}

/// Intermediate values of one GRU step, kept for backpropagation.
template <typename Scalar>
struct GruStepCache {
  VectorX<Scalar> z, r, candidate, h;
};

template <typename Scalar, typename DerivedX, typename DerivedH>
GruStepCache<Scalar> gru_step_cached(const GruParams<Scalar>& p, const Eigen::MatrixBase<DerivedX>& x,
                                     const Eigen::MatrixBase<DerivedH>& h_prev) {
  if (x.size() != p.embed() || h_prev.size() != p.hidden() || p.w_r.cols() != p.embed() ||
      p.w_h.cols() != p.embed() || p.u_r.rows() != p.hidden() || p.u_h.rows() != p.hidden() ||
      p.b_z.size() != p.hidden())
    throw Error("gru_step: shape mismatch");
  GruStepCache<Scalar> c;
  c.z = sigmoid<Scalar>(p.w_z * x + p.u_z * h_prev + p.b_z);
  c.r = sigmoid<Scalar>(p.w_r * x + p.u_r * h_prev + p.b_r);
  c.candidate = (p.w_h * x + p.u_h * c.r.cwiseProduct(h_prev) + p.b_h).array().tanh().matrix();
  c.h = (VectorX<Scalar>::Ones(p.hidden()) - c.z).cwiseProduct(h_prev) + c.z.cwiseProduct(c.candidate);
  return c;
}

/// z = σ(W_z x + U_z h + b_z), r = σ(W_r x + U_r h + b_r),
/// h̃ = tanh(W_h x + U_h (r ⊙ h) + b_h); returns (1 - z) ⊙ h + z ⊙ h̃.
template <typename Scalar, typename DerivedX, typename DerivedH>
VectorX<Scalar> gru_step(const GruParams<Scalar>& p, const Eigen::MatrixBase<DerivedX>& x,
                         const Eigen::MatrixBase<DerivedH>& h_prev) {
  return gru_step_cached(p, x, h_prev).h;
}

/// Bidirectional character GRU with a linear combination layer and a softmax
/// hashtag classifier on top.
template <typename Scalar>
struct EncoderModel {
  CharVocab vocab;
  std::vector<std::string> labels;
  MatrixX<Scalar> embedding;  // vocab × embed
  GruParams<Scalar> forward, backward;
  MatrixX<Scalar> w_f, w_b;   // hidden × hidden
  VectorX<Scalar> b_c;        // hidden
  MatrixX<Scalar> w_o;        // labels × hidden
  VectorX<Scalar> b_o;        // labels

  static EncoderModel zeros(CharVocab vocab, std::vector<std::string> labels, Eigen::Index hidden,
                            Eigen::Index embed) {
    if (hidden < 1 || embed < 1 || labels.empty()) throw Error("encoder needs hidden >= 1, embed >= 1 and a label");
    EncoderModel m;
    m.embedding.setZero(static_cast<Eigen::Index>(vocab.size()), embed);
    m.forward = GruParams<Scalar>::zeros(hidden, embed);
    m.backward = GruParams<Scalar>::zeros(hidden, embed);
    m.w_f.setZero(hidden, hidden);
    m.w_b.setZero(hidden, hidden);
    m.b_c.setZero(hidden);
    m.w_o.setZero(static_cast<Eigen::Index>(labels.size()), hidden);
    m.b_o.setZero(static_cast<Eigen::Index>(labels.size()));
    m.vocab = std::move(vocab);
    m.labels = std::move(labels);
    return m;
  }

  Eigen::Index hidden() const { return w_f.rows(); }
  Eigen::Index embed() const { return embedding.cols(); }
  Eigen::Index n_labels() const { return w_o.rows(); }

  /// Calls f(name, tensor) for every trainable tensor in a fixed order.
  template <typename Visit>
  void visit(Visit&& f) {
    f(std::string("embedding"), embedding);
    forward.visit("forward.", f);
    backward.visit("backward.", f);
    f(std::string("w_f"), w_f), f(std::string("w_b"), w_b), f(std::string("b_c"), b_c);
    f(std::string("w_o"), w_o), f(std::string("b_o"), b_o);
  }
  template <typename Visit>
  void visit(Visit&& f) const {
    const_cast<EncoderModel*>(this)->visit([&](const std::string& name, auto& t) { f(name, std::as_const(t)); });
  }

  /// Weights uniform in ±sqrt(6 / (fan_in + fan_out)), biases zero.
  void init_uniform(Rng& rng) {
    visit([&](const std::string& name, auto& t) {
      if (t.cols() == 1 && name != "embedding") {
        t.setZero();
        return;
      }
      const double s = std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = static_cast<Scalar>(rng.uniform(-s, s));
    });
  }

  template <typename NewScalar>
  EncoderModel<NewScalar> cast() const {
    EncoderModel<NewScalar> m;
    m.vocab = vocab;
    m.labels = labels;
    m.embedding = embedding.template cast<NewScalar>();
    m.forward = forward.template cast<NewScalar>();
    m.backward = backward.template cast<NewScalar>();
    m.w_f = w_f.template cast<NewScalar>();
    m.w_b = w_b.template cast<NewScalar>();
    m.b_c = b_c.template cast<NewScalar>();
    m.w_o = w_o.template cast<NewScalar>();
    m.b_o = b_o.template cast<NewScalar>();
    return m;
  }
};

/// Hidden states of both directions over one character sequence.
template <typename Scalar>
struct EncoderTrace {
  std::vector<int> ids;
  std::vector<GruStepCache<Scalar>> forward, backward;  // backward[t] consumed ids[T-1-t]
  VectorX<Scalar> embedding;
};

template <typename Scalar>
EncoderTrace<Scalar> encode_ids(const EncoderModel<Scalar>& m, std::vector<int> ids) {
  if (ids.empty()) throw Error("empty input to encoder");
  EncoderTrace<Scalar> tr;
  tr.ids = std::move(ids);
  const auto run = [&](const GruParams<Scalar>& p, auto&& id_at, auto& steps) {
    VectorX<Scalar> h = VectorX<Scalar>::Zero(m.hidden());
    steps.reserve(tr.ids.size());
    for (std::size_t t = 0; t < tr.ids.size(); ++t) {
      steps.push_back(gru_step_cached(p, m.embedding.row(id_at(t)).transpose(), h));
      h = steps.back().h;
    }
    return h;
  };
  const std::size_t len = tr.ids.size();
  const VectorX<Scalar> h_f = run(m.forward, [&](std::size_t t) { return tr.ids[t]; }, tr.forward);
  const VectorX<Scalar> h_b = run(m.backward, [&](std::size_t t) { return tr.ids[len - 1 - t]; }, tr.backward);
  tr.embedding = m.w_f * h_f + m.w_b * h_b + m.b_c;
  return tr;
}

/// Tweet embedding: W_f h_T(forward) + W_b h_T(backward) + b_c, both
/// directions started from zero states. Unknown characters map to the UNK row.
template <typename Scalar>
VectorX<Scalar> encode(const EncoderModel<Scalar>& m, std::string_view text) {
  return encode_ids(m, m.vocab.encode(text)).embedding;
}

template <typename Scalar>
VectorX<Scalar> softmax(const VectorX<Scalar>& logits) {
  const VectorX<Scalar> e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

/// Softmax over the hashtag labels.
template <typename Scalar>
VectorX<Scalar> predict_hashtags(const EncoderModel<Scalar>& m, std::string_view text) {
  return softmax<Scalar>(m.w_o * encode(m, text) + m.b_o);
}

template <typename Scalar>
void grad_comb_outer(MatrixX<Scalar>& g, const VectorX<Scalar>& d_emb, const VectorX<Scalar>& h_last) {
  g.noalias() += d_emb * h_last.transpose();
}

/// Cross-entropy of `label` given the character ids. When `grad` is non-null
/// the gradient of that loss (backpropagation through time) is added to it.
template <typename Scalar>
Scalar loss_and_gradient(const EncoderModel<Scalar>& m, const std::vector<int>& ids, int label,
                         EncoderModel<Scalar>* grad) {
  const auto tr = encode_ids(m, ids);
  const VectorX<Scalar> p = softmax<Scalar>(m.w_o * tr.embedding + m.b_o);
  const Scalar loss = -std::log(std::max(p[label], std::numeric_limits<Scalar>::min()));
  if (!grad) return loss;

  VectorX<Scalar> d_logits = p;
  d_logits[label] -= Scalar(1);
  grad->w_o.noalias() += d_logits * tr.embedding.transpose();
  grad->b_o += d_logits;
  const VectorX<Scalar> d_emb = m.w_o.transpose() * d_logits;
  grad->b_c += d_emb;

  const std::size_t len = tr.ids.size();
  const auto backprop = [&](const GruParams<Scalar>& p_dir, GruParams<Scalar>& g_dir,
                            const std::vector<GruStepCache<Scalar>>& steps, const MatrixX<Scalar>& w_comb,
                            MatrixX<Scalar>& g_comb, auto&& id_at) {
    grad_comb_outer(g_comb, d_emb, steps.back().h);
    VectorX<Scalar> dh = w_comb.transpose() * d_emb;
    const VectorX<Scalar> zero = VectorX<Scalar>::Zero(m.hidden());
    for (std::size_t t = len; t-- > 0;) {
      const auto& s = steps[t];
      const VectorX<Scalar>& h_prev = t == 0 ? zero : steps[t - 1].h;
      const int id = id_at(t);
      const auto x = m.embedding.row(id).transpose();

      const VectorX<Scalar> dz = dh.cwiseProduct(s.candidate - h_prev);
      const VectorX<Scalar> d_cand = dh.cwiseProduct(s.z);
      VectorX<Scalar> dh_prev = dh.cwiseProduct(VectorX<Scalar>::Ones(m.hidden()) - s.z);

      const VectorX<Scalar> da_h = d_cand.cwiseProduct((Scalar(1) - s.candidate.array().square()).matrix());
      const VectorX<Scalar> rh = s.r.cwiseProduct(h_prev);
      g_dir.w_h.noalias() += da_h * x.transpose();
      g_dir.u_h.noalias() += da_h * rh.transpose();
      g_dir.b_h += da_h;
      const VectorX<Scalar> d_rh = p_dir.u_h.transpose() * da_h;
      const VectorX<Scalar> dr = d_rh.cwiseProduct(h_prev);
      dh_prev += d_rh.cwiseProduct(s.r);

      const VectorX<Scalar> da_z = dz.cwiseProduct(s.z.cwiseProduct((Scalar(1) - s.z.array()).matrix()));
      const VectorX<Scalar> da_r = dr.cwiseProduct(s.r.cwiseProduct((Scalar(1) - s.r.array()).matrix()));
      g_dir.w_z.noalias() += da_z * x.transpose();
      g_dir.u_z.noalias() += da_z * h_prev.transpose();
      g_dir.b_z += da_z;
      g_dir.w_r.noalias() += da_r * x.transpose();
      g_dir.u_r.noalias() += da_r * h_prev.transpose();
      g_dir.b_r += da_r;

      grad->embedding.row(id) +=
          (p_dir.w_z.transpose() * da_z + p_dir.w_r.transpose() * da_r + p_dir.w_h.transpose() * da_h).transpose();
      dh_prev.noalias() += p_dir.u_z.transpose() * da_z + p_dir.u_r.transpose() * da_r;
      dh = std::move(dh_prev);
    }
  };
  backprop(m.forward, grad->forward, tr.forward, m.w_f, grad->w_f, [&](std::size_t t) { return tr.ids[t]; });
  backprop(m.backward, grad->backward, tr.backward, m.w_b, grad->w_b,
           [&](std::size_t t) { return tr.ids[len - 1 - t]; });
  return loss;
}

/// Row i = encode(tweet i). Hashtag tokens are kept unless `keep_hashtags` is
/// false. Errors carry the tweet id.
template <typename Scalar>
MatrixX<Scalar> encode_corpus(const EncoderModel<Scalar>& m, std::span<const Tweet> tweets,
                              bool keep_hashtags = true) {
  MatrixX<Scalar> out(static_cast<Eigen::Index>(tweets.size()), m.hidden());
  parallel_for(tweets.size(), [&](std::size_t i) {
    const auto& t = tweets[i];
    try {
      out.row(static_cast<Eigen::Index>(i)) =
          encode(m, keep_hashtags ? std::string_view(t.norm_text) : std::string_view(strip_hashtags(t.norm_text)))
              .transpose();
    } catch (const Error& e) {
      throw Error("tweet " + t.id + ": " + e.what());
    }
  }, 16);
  return out;
}

/// Training hyperparameters. Defaults follow the reference configuration
/// (hidden 500, char embedding 64, batch 64, lr 0.1, clip 5).
struct TrainConfig {
  std::size_t hidden = 500;
  std::size_t embed = 64;
  std::size_t batch = 64;
  double learning_rate = 0.1;
  std::size_t epochs = 10;
  double clip_norm = 5.0;
  std::uint64_t seed = 1;
  std::size_t min_char_freq = 2;
  std::size_t min_tag_freq = 5;
};

/// One (text, hashtag) pair per hashtag of each tweet; the text has all
/// hashtag tokens removed.
struct TrainingSet {
  std::vector<std::string> texts;
  std::vector<int> targets;
  std::vector<std::string> labels;  // sorted
};

TrainingSet make_training_set(std::span<const Tweet> tweets, std::size_t min_tag_freq);

struct TrainResult {
  EncoderModel<double> model;
  std::vector<double> epoch_loss;  // mean cross-entropy per epoch
};

/// Minibatch SGD on mean cross-entropy with global-norm gradient clipping.
/// Deterministic given cfg.seed.
TrainResult train(const TrainingSet& data, const TrainConfig& cfg);
TrainResult train(const Corpus& corpus, const TrainConfig& cfg);

struct GradientCheckDims {
  std::size_t hidden = 4;
  std::size_t embed = 3;
  std::size_t vocab = 6;  // including UNK
  std::size_t labels = 3;
  std::size_t length = 5;
};

/// Worst |a - n| / max(|a| + |n|, 1e-8) over the paired entries; 0 for none.
double max_relative_error(std::span<const double> analytic, std::span<const double> numeric);

/// Compares backpropagated gradients of a random model and sequence against
/// central finite differences for every parameter entry.
double gradient_check(const GradientCheckDims& dims, std::uint64_t seed, double step = 1e-5);

void save_model(const EncoderModel<double>& m, const std::filesystem::path& path);
EncoderModel<double> load_model(const std::filesystem::path& path);

}  // namespace tweetclust
