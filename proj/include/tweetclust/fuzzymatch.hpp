#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tweetclust/corpus.hpp"

namespace tweetclust {

/// A tweet assigned to a topic label by fuzzy matching.
using MatchResult = GroundTruth::Entry;

/// Minimal edit cost between two code-point sequences: insertions and
/// deletions cost 1, substitutions cost `substitution_cost` (1 or 2).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b, unsigned substitution_cost = 1);
/// UTF-8 convenience overload; distances are counted in code points.
std::size_t levenshtein(std::string_view a, std::string_view b, unsigned substitution_cost = 1);

/// Same as levenshtein, but gives up (returns nullopt) as soon as every cell
/// of a DP row exceeds `max_cost`, i.e. the true distance is known to be
/// larger than `max_cost`. Otherwise returns the exact distance.
std::optional<std::size_t> levenshtein_bounded(std::u32string_view a, std::u32string_view b,
                                               unsigned substitution_cost, double max_cost);

/// (|a| + |b| - d) / (|a| + |b|) with d the indel-style distance
/// (substitution cost 2). Two empty strings are identical (1.0).
double similarity_ratio(std::u32string_view a, std::u32string_view b);
double similarity_ratio(std::string_view a, std::string_view b);

/// Assigns every tweet whose best ratio against the topic labels strictly
/// exceeds `threshold` to the best topic (lowest topic index on ties).
/// Ratios are computed on the character-level normalized text against the
/// normalized label.
GroundTruth build_ground_truth(std::span<const std::string> topics, const Corpus& corpus,
                               double threshold = 0.9);

}  // namespace tweetclust
