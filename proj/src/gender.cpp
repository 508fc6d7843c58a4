#include "gendergap/gender.hpp"

#include "gendergap/unicode.hpp"

namespace gendergap {

NameTokens tokenize_name(std::string_view name) {
    NameTokens tokens;
    auto decoded = unicode::decode_utf8(name);
    if (!decoded) return tokens;

    std::u32string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(unicode::encode_utf8(current));
        current.clear();
    };
    char32_t prev = 0;
    for (char32_t cp : *decoded) {
        if (unicode::is_blank(cp) || unicode::is_hyphen(cp)) {
            flush();
            prev = 0;
            continue;
        }
        if (unicode::is_upper(cp) && prev != 0 && unicode::is_lower(prev)) flush();
        current.push_back(cp);
        prev = cp;
    }
    flush();
    return tokens;
}

GenderClass classify_token(std::string_view token, const GenderTable& table) { return table.lookup(token); }

std::optional<MajorityVariant> parse_majority_variant(std::string_view s) {
    if (s == "gendered") return MajorityVariant::Gendered;
    if (s == "all") return MajorityVariant::AllTokens;
    return std::nullopt;
}

AuthorGender infer_author_gender(std::span<const GenderClass> classes, MajorityVariant variant) {
    std::size_t male = 0, female = 0;
    for (auto c : classes) {
        if (c == GenderClass::Male || c == GenderClass::MostlyMale) ++male;
        else if (c == GenderClass::Female || c == GenderClass::MostlyFemale) ++female;
    }
    const std::size_t denom = variant == MajorityVariant::Gendered ? male + female : classes.size();
    if (2 * male > denom) return AuthorGender::Male;
    if (2 * female > denom) return AuthorGender::Female;
    return AuthorGender::Unknown;
}

AuthorGender infer_author_gender(std::span<const std::string> tokens, const GenderTable& table,
                                 MajorityVariant variant) {
    std::vector<GenderClass> classes;
    classes.reserve(tokens.size());
    for (const auto& t : tokens) classes.push_back(classify_token(t, table));
    return infer_author_gender(classes, variant);
}

}  // namespace gendergap
