#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "tweetclust/corpus.hpp"

namespace tweetclust {

/// A word bigram or trigram.
using Ngram = std::vector<std::string>;

/// Tweet × frequent-n-gram matrix. Row r belongs to the r-th input tweet.
struct TermMatrix {
  enum class Weight { binary, count };

  std::vector<std::string> ids;
  std::vector<Ngram> vocab;        // lexicographically sorted
  std::vector<std::size_t> df;     // tweets containing each vocab term
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows;

  std::size_t n_rows() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t n_terms() const { return vocab.size(); }
};

/// All contiguous 2-grams followed by all 3-grams of the white-space tokens.
std::vector<Ngram> extract_ngrams(std::string_view norm_text_word_level);

/// Keeps the n-grams that occur in at least `min_df` tweets (document
/// frequency counts a tweet once). Rows hold presence (binary) or occurrence
/// counts.
TermMatrix build_matrix(std::span<const Tweet> tweets, std::size_t min_df = 10,
                        TermMatrix::Weight weight = TermMatrix::Weight::binary);

/// Rows without any vocabulary term.
std::vector<std::size_t> garbage_rows(const TermMatrix& m);

/// Header line of tab-separated terms (tokens joined by spaces), then one line
/// per row: "<id> <col>:<value> ...".
void write_term_matrix(const TermMatrix& m, std::ostream& out);
TermMatrix read_term_matrix(std::istream& in);

}  // namespace tweetclust
