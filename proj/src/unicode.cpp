#include "gendergap/unicode.hpp"

#include <algorithm>
#include <iterator>

namespace gendergap::unicode {

namespace {

struct CodepointRange {
    char32_t first;
    char32_t last;
};

struct CodepointPair {
    char32_t from;
    char32_t to;
};

#include "unicode_tables.inc"

template <std::size_t N>
bool in_ranges(const CodepointRange (&table)[N], char32_t cp) {
    auto it = std::upper_bound(std::begin(table), std::end(table), cp,
                               [](char32_t v, const CodepointRange& r) { return v < r.first; });
    if (it == std::begin(table)) return false;
    --it;
    return cp <= it->last;
}

template <std::size_t N>
char32_t map_pair(const CodepointPair (&table)[N], char32_t cp) {
    auto it = std::lower_bound(std::begin(table), std::end(table), cp,
                               [](const CodepointPair& p, char32_t v) { return p.from < v; });
    if (it != std::end(table) && it->from == cp) return it->to;
    return cp;
}

template <typename Fn>
std::string map_codepoints(std::string_view utf8, Fn fn, bool title) {
    auto decoded = decode_utf8(utf8);
    if (!decoded) {
        std::string out(utf8);
        for (std::size_t i = 0; i < out.size(); ++i) {
            auto c = static_cast<unsigned char>(out[i]);
            if (c >= 0x80) continue;
            out[i] = static_cast<char>(static_cast<unsigned char>(
                (title && i == 0) ? to_upper(static_cast<char32_t>(c)) : fn(static_cast<char32_t>(c))));
        }
        return out;
    }
    std::string out;
    out.reserve(utf8.size());
    bool first = true;
    for (char32_t cp : *decoded) {
        append_utf8(out, (title && first) ? to_upper(cp) : fn(cp));
        first = false;
    }
    return out;
}

}  // namespace

std::optional<std::u32string> decode_utf8(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        auto b0 = static_cast<unsigned char>(bytes[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len;
        char32_t cp;
        char32_t min;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2, cp = b0 & 0x1F, min = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3, cp = b0 & 0x0F, min = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4, cp = b0 & 0x07, min = 0x10000;
        } else {
            return std::nullopt;
        }
        if (i + len > n) return std::nullopt;
        for (int k = 1; k < len; ++k) {
            auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) return std::nullopt;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
        out.push_back(cp);
        i += len;
    }
    return out;
}

bool is_valid_utf8(std::string_view bytes) {
    return decode_utf8(bytes).has_value();
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) append_utf8(out, cp);
    return out;
}

bool is_letter(char32_t cp) { return in_ranges(kLetterRanges, cp); }
bool is_upper(char32_t cp) { return in_ranges(kUpperRanges, cp); }
bool is_lower(char32_t cp) { return in_ranges(kLowerRanges, cp); }

bool is_blank(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_hyphen(char32_t cp) { return cp == U'-' || cp == 0x2010 || cp == 0x2011; }

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019 || cp == 0x02BC; }

char32_t to_lower(char32_t cp) { return map_pair(kToLower, cp); }
char32_t to_upper(char32_t cp) { return map_pair(kToUpper, cp); }

std::string to_lower(std::string_view utf8) {
    return map_codepoints(utf8, [](char32_t c) { return to_lower(c); }, false);
}

std::string to_title(std::string_view utf8) {
    return map_codepoints(utf8, [](char32_t c) { return to_lower(c); }, true);
}

std::u32string_view trim_blanks(std::u32string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && is_blank(text[b])) ++b;
    while (e > b && is_blank(text[e - 1])) --e;
    return text.substr(b, e - b);
}

}  // namespace gendergap::unicode
