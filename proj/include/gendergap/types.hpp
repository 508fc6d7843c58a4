#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gendergap {

/// World regions used for geolocation. Serialized names are stable and
/// appear verbatim in reference files and CSV outputs.
enum class Region : std::uint8_t {
    Africa,
    AustraliaNewZealand,
    CentralSouthAmerica,
    CentralSouthAsia,
    China,
    EastAsia,
    Europe,
    NorthAmerica,
    Pacific,
    Russia,
    SouthEasternAsia,
    WestAsia,
};

inline constexpr std::size_t kRegionCount = 12;

inline constexpr std::array<Region, kRegionCount> kAllRegions = {
    Region::Africa,           Region::AustraliaNewZealand, Region::CentralSouthAmerica,
    Region::CentralSouthAsia, Region::China,               Region::EastAsia,
    Region::Europe,           Region::NorthAmerica,        Region::Pacific,
    Region::Russia,           Region::SouthEasternAsia,    Region::WestAsia,
};

std::string_view region_name(Region r);
std::optional<Region> parse_region(std::string_view name);

/// Six-way label assigned to a single name token.
enum class GenderClass : std::uint8_t { Male, MostlyMale, Unknown, MostlyFemale, Female, Andy };

inline constexpr std::array<GenderClass, 6> kAllGenderClasses = {
    GenderClass::Male,         GenderClass::MostlyMale, GenderClass::Unknown,
    GenderClass::MostlyFemale, GenderClass::Female,     GenderClass::Andy,
};

std::string_view gender_class_name(GenderClass c);
std::optional<GenderClass> parse_gender_class(std::string_view name);

enum class AuthorGender : std::uint8_t { Male, Female, Unknown };

inline constexpr std::array<AuthorGender, 3> kAllAuthorGenders = {
    AuthorGender::Male, AuthorGender::Female, AuthorGender::Unknown};

std::string_view author_gender_name(AuthorGender g);
std::optional<AuthorGender> parse_author_gender(std::string_view name);

}  // namespace gendergap
