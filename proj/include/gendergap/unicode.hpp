#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gendergap::unicode {

/// Strict UTF-8 decode: rejects overlong forms, surrogates and values
/// above U+10FFFF.
std::optional<std::u32string> decode_utf8(std::string_view bytes);
bool is_valid_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
/// Unicode White_Space property.
bool is_blank(char32_t cp);
/// ASCII hyphen-minus plus the Unicode hyphen and non-breaking hyphen.
bool is_hyphen(char32_t cp);
bool is_apostrophe(char32_t cp);

char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);

/// Simple (one-to-one) case mappings applied per code point. Input that
/// is not valid UTF-8 falls back to ASCII-only case mapping.
std::string to_lower(std::string_view utf8);
/// First code point upper-cased, the rest lower-cased.
std::string to_title(std::string_view utf8);

std::u32string_view trim_blanks(std::u32string_view text);

}  // namespace gendergap::unicode
