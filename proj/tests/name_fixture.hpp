#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gendergap/ingest.hpp"

namespace testing {

struct NameCase {
    std::string raw;
    std::optional<gendergap::NameRule> expected;  // nullopt = accepted
};

/// Thirty hand-labelled author names. Labels are the first rule each name
/// breaks, worked out by hand.
inline std::vector<NameCase> name_fixture() {
    using R = gendergap::NameRule;
    const std::string a101(101, 'a');
    const std::string long_mixed = std::string(60, 'x') + " " + std::string(45, 'y');  // 106 scalars
    std::string long_accented;
    for (int i = 0; i < 101; ++i) long_accented += "é";  // 202 bytes, 101 scalars
    return {
        // accepted
        {"Ada Lovelace", std::nullopt},
        {"  Grace Hopper\t", std::nullopt},
        {"Jean-Luc Picard", std::nullopt},
        {"Seán O'Brien", std::nullopt},
        {"Zoë Müller", std::nullopt},
        {"李小龙", std::nullopt},
        {"Ivan Petrov Jr.", std::nullopt},  // 1 non-letter in 13 non-blanks
        {std::string(100, 'b'), std::nullopt},
        // (a) invalid UTF-8
        {"Ren\xE9 Dupont", R::InvalidUtf8},
        {"\xC0\xAF", R::InvalidUtf8},
        {"bob@example.com\xFF", R::InvalidUtf8},
        {"\xED\xA0\x80 Surrogate", R::InvalidUtf8},
        // (b) email address
        {"jdoe@example.com", R::EmailAddress},
        {"John Doe <john@doe.org>", R::EmailAddress},
        {" ci-bot@builds.example.net ", R::EmailAddress},
        {"a@b.c", R::EmailAddress},
        {std::string(100, 'z') + "@example.org", R::EmailAddress},
        // (c) blank
        {"", R::Blank},
        {"   ", R::Blank},
        {"\t\v ", R::Blank},
        {"\xE3\x80\x80", R::Blank},  // ideographic space only
        // (d) more than 10% non-letters
        {"####!!", R::TooManyNonLetters},
        {"R2D2", R::TooManyNonLetters},
        {"user@localhost:22", R::TooManyNonLetters},  // no dot-bearing domain
        {"John Smith 42", R::TooManyNonLetters},  // 2 of 11 non-blanks
        {"root (admin)", R::TooManyNonLetters},
        {"\xF0\x9F\x98\x80 Smiley", R::TooManyNonLetters},
        // (e) too long
        {a101, R::TooLong},
        {long_mixed, R::TooLong},
        {long_accented, R::TooLong},
    };
}

}  // namespace testing
