#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the corpus, fuzzy matching and the character encoder.
// Text is handled as Unicode code points; invalid UTF-8 decodes to U+FFFD.
namespace tweetclust::text {

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
std::string encode(char32_t cp);

bool is_space(char32_t cp);
// Unicode general category P* or S*.
bool is_punct_or_symbol(char32_t cp);
// Simple (1:1) lowercase mapping.
char32_t to_lower(char32_t cp);
std::u32string to_lower(std::u32string_view s);

// Splits on runs of Unicode white space; no empty tokens.
std::vector<std::u32string> split_ws(std::u32string_view s);
std::vector<std::string> split_ws(std::string_view utf8);

std::size_t length(std::string_view utf8);

}  // namespace tweetclust::text
