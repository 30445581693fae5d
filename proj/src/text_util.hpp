#ifndef SHAPEEVAL_SRC_TEXT_UTIL_HPP_
#define SHAPEEVAL_SRC_TEXT_UTIL_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shapeeval::internal {

// Reads a whole file; throws InputError if it cannot be opened.
std::string ReadFile(const std::string& path);

// Splits on LF, dropping a trailing CR from each line.
std::vector<std::string_view> SplitLines(std::string_view text);

// Whitespace tokenization (space, tab, CR, VT, FF).
std::vector<std::string_view> Tokenize(std::string_view line);

// Strips a '#' comment and surrounding whitespace.
std::string_view StripComment(std::string_view line);

std::string_view Trim(std::string_view s);

// Full-token numeric parses; nullopt on any trailing garbage.
std::optional<double> ParseDouble(std::string_view token);
std::optional<long long> ParseInt(std::string_view token);

// Shortest decimal representation that parses back to the same double.
std::string FormatShortest(double value);

// Writes bytes exactly (binary mode); throws InputError on failure.
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace shapeeval::internal

#endif  // SHAPEEVAL_SRC_TEXT_UTIL_HPP_
