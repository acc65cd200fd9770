#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tweetclust/corpus.hpp"
#include "tweetclust/rng.hpp"
#include "tweetclust/tweetterm.hpp"

using namespace tweetclust;

namespace {

std::vector<Tweet> tweets_from(const std::vector<std::string>& texts) {
  std::vector<Tweet> out;
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(make_tweet(std::to_string(i), texts[i], 0));
  return out;
}

std::vector<Tweet> random_tweets(Rng& rng, std::size_t n) {
  static const std::vector<std::string> words = {"a", "b", "c", "d", "news", "!", "kiev"};
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) {
    std::string t;
    for (std::size_t k = rng.index(7); k > 0; --k) t += words[rng.index(words.size())] + " ";
    texts.push_back(t);
  }
  return tweets_from(texts);
}

// Document frequency recounted from scratch: for each tweet, the set of its
// distinct 2/3-grams built by hand.
std::map<Ngram, std::size_t> recount_df(const std::vector<Tweet>& tweets) {
  std::map<Ngram, std::size_t> df;
  for (const auto& t : tweets) {
    std::vector<std::string> tok;
    std::istringstream s(t.norm_text_word);
    for (std::string w; s >> w;) tok.push_back(w);
    std::set<Ngram> seen;
    for (std::size_t len = 2; len <= 3; ++len)
      for (std::size_t i = 0; i + len <= tok.size(); ++i) seen.insert(Ngram(tok.begin() + i, tok.begin() + i + len));
    for (const auto& g : seen) ++df[g];
  }
  return df;
}

}  // namespace

TEST(ExtractNgrams, Examples) {
  using V = std::vector<Ngram>;
  EXPECT_EQ(extract_ngrams("a b c"), (V{{"a", "b"}, {"b", "c"}, {"a", "b", "c"}}));
  EXPECT_EQ(extract_ngrams("a"), V{});
  EXPECT_EQ(extract_ngrams(""), V{});
  EXPECT_EQ(extract_ngrams("a b a b"), (V{{"a", "b"}, {"b", "a"}, {"a", "b"}, {"a", "b", "a"}, {"b", "a", "b"}}));
}

TEST(BuildMatrix, DfBoundary) {
  const auto ten = tweets_from(std::vector<std::string>(10, "a b"));
  const auto m = build_matrix(ten, 10);
  ASSERT_EQ(m.vocab, std::vector<Ngram>{Ngram({"a", "b"})});
  for (std::size_t r = 0; r < 10; ++r) EXPECT_EQ(m.rows.coeff(static_cast<Eigen::Index>(r), 0), 1.0);

  const auto nine = tweets_from(std::vector<std::string>(9, "a b"));
  const auto m9 = build_matrix(nine, 10);
  EXPECT_TRUE(m9.vocab.empty());
  EXPECT_EQ(garbage_rows(m9).size(), 9u);

  EXPECT_EQ(build_matrix({}, 10).n_rows(), 0u);
  EXPECT_THROW(build_matrix(ten, 0), Error);
}

TEST(BuildMatrix, DfCountsTweetsNotOccurrences) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto tweets = random_tweets(rng, 40);
    const std::size_t min_df = 1 + rng.index(6);
    const auto df = recount_df(tweets);
    const auto m = build_matrix(tweets, min_df);
    std::vector<Ngram> expected;
    for (const auto& [g, n] : df)
      if (n >= min_df) expected.push_back(g);
    ASSERT_EQ(m.vocab, expected);
    for (std::size_t j = 0; j < m.vocab.size(); ++j) EXPECT_EQ(m.df[j], df.at(m.vocab[j]));
    // binary rows: 1 exactly where the tweet contains the term
    for (std::size_t r = 0; r < tweets.size(); ++r) {
      const auto grams = extract_ngrams(tweets[r].norm_text_word);
      const std::set<Ngram> has(grams.begin(), grams.end());
      for (std::size_t j = 0; j < m.vocab.size(); ++j)
        EXPECT_EQ(m.rows.coeff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)),
                  has.count(m.vocab[j]) ? 1.0 : 0.0);
    }
  }
}

TEST(BuildMatrix, CountWeights) {
  const auto tweets = tweets_from({"a b a b", "a b"});
  const auto m = build_matrix(tweets, 2, TermMatrix::Weight::count);
  ASSERT_EQ(m.vocab, std::vector<Ngram>{Ngram({"a", "b"})});
  EXPECT_EQ(m.rows.coeff(0, 0), 2.0);
  EXPECT_EQ(m.rows.coeff(1, 0), 1.0);
}

TEST(BuildMatrix, VocabShrinksWithMinDf) {
  Rng rng(22);
  const auto tweets = random_tweets(rng, 80);
  std::size_t prev = build_matrix(tweets, 1).n_terms();
  for (std::size_t md = 2; md <= 20; ++md) {
    const std::size_t now = build_matrix(tweets, md).n_terms();
    EXPECT_LE(now, prev);
    prev = now;
  }
}

TEST(BuildMatrix, PermutingTweetsPermutesRows) {
  Rng rng(23);
  const auto tweets = random_tweets(rng, 50);
  std::vector<std::size_t> perm(tweets.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.shuffle(perm.begin(), perm.end());
  std::vector<Tweet> shuffled;
  for (auto p : perm) shuffled.push_back(tweets[p]);
  const auto a = build_matrix(tweets, 3), b = build_matrix(shuffled, 3);
  ASSERT_EQ(a.vocab, b.vocab);
  for (std::size_t r = 0; r < perm.size(); ++r) {
    EXPECT_EQ(b.ids[r], a.ids[perm[r]]);
    for (std::size_t j = 0; j < a.n_terms(); ++j)
      EXPECT_EQ(b.rows.coeff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)),
                a.rows.coeff(static_cast<Eigen::Index>(perm[r]), static_cast<Eigen::Index>(j)));
  }
}

TEST(GarbageRows, Examples) {
  const auto m = build_matrix(tweets_from({"a b", "a b", "c"}), 2);
  EXPECT_EQ(garbage_rows(m), std::vector<std::size_t>{2});
  const auto dense = build_matrix(tweets_from({"a b", "a b"}), 1);
  EXPECT_TRUE(garbage_rows(dense).empty());
}

TEST(GarbageRows, BruteForce) {
  Rng rng(24);
  const auto tweets = random_tweets(rng, 60);
  const auto df = recount_df(tweets);
  const auto m = build_matrix(tweets, 4);
  const auto g = garbage_rows(m);
  for (std::size_t r = 0; r < tweets.size(); ++r) {
    bool any = false;
    for (const auto& gram : extract_ngrams(tweets[r].norm_text_word)) any |= df.at(gram) >= 4;
    EXPECT_EQ(std::count(g.begin(), g.end(), r) == 1, !any) << tweets[r].norm_text_word;
  }
}

TEST(TermMatrixIo, RoundTrip) {
  const auto m = build_matrix(tweets_from({"a b c", "a b c", "x , y", "x , y"}), 2);
  std::stringstream buf;
  write_term_matrix(m, buf);
  const auto back = read_term_matrix(buf);
  EXPECT_EQ(back.ids, m.ids);
  EXPECT_EQ(back.vocab, m.vocab);
  EXPECT_EQ(Eigen::MatrixXd(back.rows), Eigen::MatrixXd(m.rows));
}
