#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "gendergap/gender.hpp"
#include "gendergap/unicode.hpp"
#include "name_fixture.hpp"
#include "support.hpp"

using namespace gendergap;

TEST_CASE("tokenization") {
    using V = std::vector<std::string>;
    CHECK(tokenize_name("Ada Lovelace") == V{"Ada", "Lovelace"});
    CHECK(tokenize_name("Jean-Luc  Picard") == V{"Jean", "Luc", "Picard"});
    CHECK(tokenize_name("McDonald") == V{"Mc", "Donald"});
    CHECK(tokenize_name("MARIA") == V{"MARIA"});
    CHECK(tokenize_name("JohnSmith") == V{"John", "Smith"});
    CHECK(tokenize_name("Seán O'Brien") == V{"Seán", "O'Brien"});
    CHECK(tokenize_name("Zoë‐Ämma") == V{"Zoë", "Ämma"});  // U+2010
    CHECK(tokenize_name("  ").empty());
    CHECK(tokenize_name("").empty());
}

TEST_CASE("token invariants") {
    std::vector<std::string> names;
    for (const auto& c : testing::name_fixture())
        if (auto n = sanitize_author_name(c.raw)) names.push_back(*n);
    std::mt19937 rng(7);
    const std::u32string alphabet = U"aZé É-‐ 'xQ.ßŁł";
    for (int i = 0; i < 500; ++i) {
        std::u32string s;
        for (int k = 0, n = int(rng() % 12); k < n; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
        names.push_back(unicode::encode_utf8(s));
    }
    for (const auto& name : names) {
        CAPTURE(name);
        const auto tokens = tokenize_name(name);
        std::u32string letters_in, letters_out;
        const auto decoded = unicode::decode_utf8(name);
        for (char32_t c : *decoded)
            if (unicode::is_letter(c)) letters_in.push_back(c);
        for (const auto& t : tokens) {
            const auto d = *unicode::decode_utf8(t);
            CHECK_FALSE(d.empty());
            for (std::size_t i = 0; i < d.size(); ++i) {
                CHECK_FALSE(unicode::is_blank(d[i]));
                CHECK_FALSE(unicode::is_hyphen(d[i]));
                if (i > 0) CHECK_FALSE((unicode::is_lower(d[i - 1]) && unicode::is_upper(d[i])));
                if (unicode::is_letter(d[i])) letters_out.push_back(d[i]);
            }
        }
        CHECK(letters_in == letters_out);
    }
}

TEST_CASE("token classes come from the table") {
    const auto& g = testing::fixture_refs().gender;
    CHECK(classify_token("Maria", g) == GenderClass::Female);
    CHECK(classify_token("MARIA", g) == GenderClass::Female);
    CHECK(classify_token("Zyxxy", g) == GenderClass::Unknown);
    CHECK(classify_token("Robin", g) == GenderClass::Andy);
}

namespace {

/// Vote-by-vote oracle: a gender wins if its votes outnumber everything
/// else in the denominator put together.
AuthorGender majority_oracle(const std::vector<GenderClass>& classes, bool all_tokens) {
    int male = 0, female = 0, other = 0;
    for (auto c : classes) {
        switch (c) {
            case GenderClass::Male:
            case GenderClass::MostlyMale: ++male; break;
            case GenderClass::Female:
            case GenderClass::MostlyFemale: ++female; break;
            default: ++other; break;
        }
    }
    const int rest = all_tokens ? other : 0;
    if (male > female + rest) return AuthorGender::Male;
    if (female > male + rest) return AuthorGender::Female;
    return AuthorGender::Unknown;
}

}  // namespace

TEST_CASE("strict majority against brute force over all multisets up to six tokens") {
    std::size_t multisets = 0, size_six = 0;
    std::vector<GenderClass> current;
    std::mt19937 rng(11);
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t start, std::size_t left) {
        if (!current.empty()) {
            ++multisets;
            if (current.size() == 6) ++size_six;
            auto shuffled = current;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (auto [variant, all] : {std::pair{MajorityVariant::Gendered, false}, {MajorityVariant::AllTokens, true}}) {
                const auto want = majority_oracle(current, all);
                CHECK(infer_author_gender(current, variant) == want);
                CHECK(infer_author_gender(shuffled, variant) == want);
            }
        }
        if (left == 0) return;
        for (std::size_t k = start; k < kAllGenderClasses.size(); ++k) {
            current.push_back(kAllGenderClasses[k]);
            walk(k, left - 1);
            current.pop_back();
        }
    };
    walk(0, 6);
    CHECK(multisets == 923);
    CHECK(size_six == 462);
}

TEST_CASE("majority examples") {
    using C = GenderClass;
    const std::vector<C> male_unknown{C::Male, C::Unknown};
    CHECK(infer_author_gender(male_unknown, MajorityVariant::Gendered) == AuthorGender::Male);
    CHECK(infer_author_gender(male_unknown, MajorityVariant::AllTokens) == AuthorGender::Unknown);
    const std::vector<C> tie{C::MostlyMale, C::Female};
    CHECK(infer_author_gender(tie, MajorityVariant::Gendered) == AuthorGender::Unknown);
    const std::vector<C> andy{C::Andy};
    CHECK(infer_author_gender(andy, MajorityVariant::Gendered) == AuthorGender::Unknown);
    CHECK(infer_author_gender(std::vector<C>{}, MajorityVariant::Gendered) == AuthorGender::Unknown);

    const auto& g = testing::fixture_refs().gender;
    CHECK(infer_author_gender(tokenize_name("Maria Rossi"), g, MajorityVariant::Gendered) == AuthorGender::Female);
    CHECK(infer_author_gender(tokenize_name("Jean-Marie Dupont"), g, MajorityVariant::Gendered) == AuthorGender::Unknown);
    CHECK(parse_majority_variant("all") == MajorityVariant::AllTokens);
    CHECK_FALSE(parse_majority_variant("most"));
}
