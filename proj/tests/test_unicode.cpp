#include <doctest.h>

#include "gendergap/unicode.hpp"

using namespace gendergap::unicode;

TEST_CASE("strict utf-8 decoding") {
    CHECK(decode_utf8("Zoë") == std::u32string{U'Z', U'o', U'ë'});
    CHECK(decode_utf8("") == std::u32string{});
    CHECK_FALSE(decode_utf8("\xC3").has_value());              // truncated
    CHECK_FALSE(decode_utf8("\xC0\xAF").has_value());          // overlong '/'
    CHECK_FALSE(decode_utf8("\xE0\x80\xAF").has_value());      // overlong 3-byte
    CHECK_FALSE(decode_utf8("\xED\xA0\x80").has_value());      // surrogate
    CHECK_FALSE(decode_utf8("\xF4\x90\x80\x80").has_value());  // > U+10FFFF
    CHECK_FALSE(decode_utf8("\xFF").has_value());
    CHECK_FALSE(decode_utf8("a\x80").has_value());
    CHECK(decode_utf8("\xF0\x9F\x98\x80") == std::u32string{U'\U0001F600'});
}

TEST_CASE("encode round-trips every scalar value class") {
    for (char32_t cp : {U'\0', U'A', U'é', U'߿', U'ࠀ', U'�', U'\U00010000', U'\U0010FFFF'}) {
        const std::u32string s(1, cp);
        CHECK(decode_utf8(encode_utf8(s)) == s);
    }
}

TEST_CASE("character classes") {
    CHECK(is_letter(U'a'));
    CHECK(is_letter(U'Ж'));
    CHECK(is_letter(U'李'));
    CHECK(is_letter(U'ß'));
    CHECK_FALSE(is_letter(U'1'));
    CHECK_FALSE(is_letter(U'-'));
    CHECK_FALSE(is_letter(U'#'));
    CHECK_FALSE(is_letter(U'\U0001F600'));
    CHECK(is_upper(U'Ä'));
    CHECK(is_upper(U'ǅ'));  // titlecase counts as upper for case-change splitting
    CHECK(is_lower(U'ä'));
    CHECK_FALSE(is_upper(U'李'));
    CHECK(is_blank(U' '));
    CHECK(is_blank(U' '));
    CHECK(is_blank(U'　'));
    CHECK_FALSE(is_blank(U'_'));
    CHECK(is_hyphen(U'-'));
    CHECK(is_hyphen(U'‐'));
    CHECK(is_apostrophe(U'\''));
    CHECK(is_apostrophe(U'’'));
}

TEST_CASE("case mapping") {
    CHECK(to_lower("ÉLODIE") == "élodie");
    CHECK(to_title("mARIA") == "Maria");
    CHECK(to_title("élodie") == "Élodie");
    CHECK(to_title("") == "");
    CHECK(to_lower("ABC\xFF") == "abc\xFF");  // invalid input: ASCII only
}

TEST_CASE("trim_blanks") {
    CHECK(trim_blanks(U"  a b  ") == U"a b");
    CHECK(trim_blanks(U"   ").empty());
}
