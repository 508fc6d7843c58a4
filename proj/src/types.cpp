#include "gendergap/types.hpp"

namespace gendergap {

namespace {

constexpr std::array<std::string_view, kRegionCount> kRegionNames = {
    "Africa",
    "Australia and New Zealand",
    "Central and South America",
    "Central and South Asia",
    "China",
    "East Asia",
    "Europe",
    "North America",
    "Pacific",
    "Russia",
    "South-eastern Asia",
    "West Asia",
};

constexpr std::array<std::string_view, 6> kGenderClassNames = {
    "male", "mostly_male", "unknown", "mostly_female", "female", "andy"};

constexpr std::array<std::string_view, 3> kAuthorGenderNames = {"male", "female", "unknown"};

}  // namespace

std::string_view region_name(Region r) { return kRegionNames[static_cast<std::size_t>(r)]; }

std::optional<Region> parse_region(std::string_view name) {
    for (std::size_t i = 0; i < kRegionNames.size(); ++i)
        if (kRegionNames[i] == name) return static_cast<Region>(i);
    return std::nullopt;
}

std::string_view gender_class_name(GenderClass c) {
    return kGenderClassNames[static_cast<std::size_t>(c)];
}

std::optional<GenderClass> parse_gender_class(std::string_view name) {
    for (std::size_t i = 0; i < kGenderClassNames.size(); ++i)
        if (kGenderClassNames[i] == name) return static_cast<GenderClass>(i);
    return std::nullopt;
}

std::string_view author_gender_name(AuthorGender g) {
    return kAuthorGenderNames[static_cast<std::size_t>(g)];
}

std::optional<AuthorGender> parse_author_gender(std::string_view name) {
    for (std::size_t i = 0; i < kAuthorGenderNames.size(); ++i)
        if (kAuthorGenderNames[i] == name) return static_cast<AuthorGender>(i);
    return std::nullopt;
}

}  // namespace gendergap
