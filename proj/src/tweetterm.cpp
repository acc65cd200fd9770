#include "tweetclust/tweetterm.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tweetclust/error.hpp"
#include "tweetclust/text.hpp"

namespace tweetclust {

std::vector<Ngram> extract_ngrams(std::string_view norm_text_word_level) {
  const auto tokens = text::split_ws(norm_text_word_level);
  std::vector<Ngram> grams;
  for (std::size_t n : {2u, 3u}) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
      grams.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                         tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
  }
  return grams;
}

TermMatrix build_matrix(std::span<const Tweet> tweets, std::size_t min_df, TermMatrix::Weight weight) {
  if (min_df == 0) throw Error("min_df must be at least 1");
  TermMatrix m;
  m.ids.reserve(tweets.size());
  for (const auto& t : tweets) m.ids.push_back(t.id);

  std::vector<std::map<Ngram, int>> per_tweet(tweets.size());
  std::map<Ngram, std::size_t> df;
  for (std::size_t r = 0; r < tweets.size(); ++r) {
    for (auto& g : extract_ngrams(tweets[r].norm_text_word)) ++per_tweet[r][std::move(g)];
    for (const auto& [g, count] : per_tweet[r]) ++df[g];
  }

  std::map<Ngram, int> column;
  for (const auto& [g, f] : df) {
    if (f < min_df) continue;
    column.emplace(g, static_cast<int>(m.vocab.size()));
    m.vocab.push_back(g);
    m.df.push_back(f);
  }

  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t r = 0; r < tweets.size(); ++r) {
    for (const auto& [g, count] : per_tweet[r]) {
      auto it = column.find(g);
      if (it == column.end()) continue;
      entries.emplace_back(static_cast<int>(r), it->second,
                           weight == TermMatrix::Weight::binary ? 1.0 : static_cast<double>(count));
    }
  }
  m.rows.resize(static_cast<Eigen::Index>(tweets.size()), static_cast<Eigen::Index>(m.vocab.size()));
  m.rows.setFromTriplets(entries.begin(), entries.end());
  m.rows.makeCompressed();
  return m;
}

std::vector<std::size_t> garbage_rows(const TermMatrix& m) {
  std::vector<std::size_t> out;
  for (Eigen::Index r = 0; r < m.rows.outerSize(); ++r) {
    bool empty = true;
    for (decltype(m.rows)::InnerIterator it(m.rows, r); it; ++it)
      if (it.value() != 0.0) empty = false;
    if (empty) out.push_back(static_cast<std::size_t>(r));
  }
  return out;
}

void write_term_matrix(const TermMatrix& m, std::ostream& out) {
  for (std::size_t k = 0; k < m.vocab.size(); ++k) {
    if (k) out << '\t';
    for (std::size_t t = 0; t < m.vocab[k].size(); ++t) out << (t ? " " : "") << m.vocab[k][t];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows.outerSize(); ++r) {
    out << m.ids.at(static_cast<std::size_t>(r));
    for (decltype(m.rows)::InnerIterator it(m.rows, r); it; ++it) out << ' ' << it.col() << ':' << it.value();
    out << '\n';
  }
}

TermMatrix read_term_matrix(std::istream& in) {
  TermMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw Error("term matrix: missing header");
  if (!line.empty()) {
    std::stringstream header(line);
    std::string term;
    while (std::getline(header, term, '\t')) m.vocab.push_back(text::split_ws(term));
  }
  std::vector<Eigen::Triplet<double>> entries;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string id, cell;
    fields >> id;
    m.ids.push_back(id);
    while (fields >> cell) {
      const auto colon = cell.find(':');
      if (colon == std::string::npos) throw Error("term matrix: bad cell '" + cell + "'");
      const int col = std::stoi(cell.substr(0, colon));
      if (col < 0 || static_cast<std::size_t>(col) >= m.vocab.size()) throw Error("term matrix: column out of range");
      entries.emplace_back(static_cast<int>(row), col, std::stod(cell.substr(colon + 1)));
    }
    ++row;
  }
  m.rows.resize(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(m.vocab.size()));
  m.rows.setFromTriplets(entries.begin(), entries.end());
  m.rows.makeCompressed();
  m.df.assign(m.vocab.size(), 0);
  for (Eigen::Index r = 0; r < m.rows.outerSize(); ++r)
    for (decltype(m.rows)::InnerIterator it(m.rows, r); it; ++it) ++m.df[static_cast<std::size_t>(it.col())];
  return m;
}

}  // namespace tweetclust
