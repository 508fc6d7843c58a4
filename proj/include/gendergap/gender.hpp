#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gendergap/refdata.hpp"
#include "gendergap/types.hpp"

namespace gendergap {

using NameTokens = std::vector<std::string>;

/// Splits a sanitized full name at blanks, hyphens, and lower→upper case
/// changes ("JeanPierre" → "Jean", "Pierre"). Empty fragments are dropped.
NameTokens tokenize_name(std::string_view name);

GenderClass classify_token(std::string_view token, const GenderTable& table);

/// Which tokens form the denominator of the strict-majority test.
enum class MajorityVariant {
    Gendered,  // only tokens voting male or female
    AllTokens, // every token, including unknown and andy
};

std::optional<MajorityVariant> parse_majority_variant(std::string_view s);

/// Strict majority over per-token votes. mostly_* labels are full votes.
AuthorGender infer_author_gender(std::span<const GenderClass> classes,
                                 MajorityVariant variant = MajorityVariant::Gendered);

AuthorGender infer_author_gender(std::span<const std::string> tokens, const GenderTable& table,
                                 MajorityVariant variant = MajorityVariant::Gendered);

}  // namespace gendergap
