#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace embaudit::detail {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
// Splits on runs of ' ', '\t', '\r'.
std::vector<std::string_view> split_whitespace(std::string_view s);

// Decodes one code point at `pos` and advances it. Malformed bytes decode to
// U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos);
void append_utf8(std::string& out, char32_t cp);

bool is_unicode_upper(char32_t cp);
std::string to_lower_utf8(std::string_view s);

}  // namespace embaudit::detail
