#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gendergap/types.hpp"
#include "gendergap/tz.hpp"

namespace gendergap {

/// Name → six-way gender label. Keys are stored title-cased, lookups are
/// title-cased too; absent names are `unknown`.
class GenderTable {
public:
    void set(std::string_view name, GenderClass c);
    GenderClass lookup(std::string_view name) const;

    std::size_t size() const { return table_.size(); }
    /// Rows that overwrote an earlier row for the same name.
    std::size_t duplicates() const { return duplicates_; }

    bool operator==(const GenderTable& o) const { return table_ == o.table_; }

private:
    std::unordered_map<std::string, GenderClass> table_;
    std::size_t duplicates_ = 0;
};

struct Place {
    std::string place_id;  // tz identifier
    Region region;
    std::uint64_t population;

    bool operator==(const Place&) const = default;
};

/// Places sorted by place_id; a place's index is its position in that order.
class PlaceTable {
public:
    PlaceTable() = default;
    explicit PlaceTable(std::vector<Place> places);

    std::span<const Place> places() const { return places_; }
    std::size_t size() const { return places_.size(); }
    const Place& operator[](std::size_t i) const { return places_[i]; }
    std::optional<std::size_t> index_of(std::string_view place_id) const;

    std::vector<std::string> ids() const;

    bool operator==(const PlaceTable& o) const { return places_ == o.places_; }

private:
    std::vector<Place> places_;
};

struct PlaceIncidence {
    std::uint32_t place;  // index into PlaceTable
    double incidence;     // fraction of the place's population, in [0,1]

    bool operator==(const PlaceIncidence&) const = default;
};

/// (name token, place) → fraction of population bearing the name. Keys
/// are stored lower-cased.
class IncidenceTable {
public:
    void set(std::string_view name, std::uint32_t place, double incidence);

    double incidence(std::string_view name, std::uint32_t place) const;
    /// All places where the lower-cased name occurs, ordered by place index.
    std::span<const PlaceIncidence> entries(std::string_view name) const;

    /// Distinct (lower-cased) names, sorted.
    std::vector<std::string> names() const;

    std::size_t size() const { return rows_; }
    bool operator==(const IncidenceTable& o) const { return table_ == o.table_; }

private:
    std::unordered_map<std::string, std::vector<PlaceIncidence>> table_;
    std::size_t rows_ = 0;
};

/// ccTLD (two Latin letters) → region; lookups are case-insensitive.
class CcTldMap {
public:
    void set(std::string_view tld, Region r);
    std::optional<Region> lookup(std::string_view tld) const;
    bool contains(std::string_view tld) const { return lookup(tld).has_value(); }
    std::size_t size() const { return table_.size(); }
    /// All (tld, region) pairs sorted by tld.
    std::vector<std::pair<std::string, Region>> entries() const;

    bool operator==(const CcTldMap& o) const { return table_ == o.table_; }

private:
    std::unordered_map<std::string, Region> table_;
};

GenderTable load_gender_table(const std::filesystem::path& path);
PlaceTable load_places(const std::filesystem::path& path);
IncidenceTable load_incidence_table(const std::filesystem::path& path, const PlaceTable& places);
std::pair<IncidenceTable, IncidenceTable> load_incidence_tables(const std::filesystem::path& forenames,
                                                                const std::filesystem::path& surnames,
                                                                const PlaceTable& places);
CcTldMap load_cctld_map(const std::filesystem::path& path);

/// Every reference table a run needs. Immutable once loaded.
struct RefData {
    GenderTable gender;
    PlaceTable places;
    IncidenceTable forenames;
    IncidenceTable surnames;
    CcTldMap cctld;
    TzRuleSet tz;
};

/// File names inside a reference-data directory.
inline constexpr std::string_view kGenderFile = "gender.tsv";
inline constexpr std::string_view kPlacesFile = "places.tsv";
inline constexpr std::string_view kForenamesFile = "forenames.tsv";
inline constexpr std::string_view kSurnamesFile = "surnames.tsv";
inline constexpr std::string_view kCcTldFile = "cctld.tsv";
inline constexpr std::string_view kTzRulesFile = "tzrules.tsv";

/// Loads a reference-data directory. `tz_source` overrides the bundled
/// tzrules.tsv with a zoneinfo root or another extracted table.
RefData load_refdata(const std::filesystem::path& dir,
                     const std::optional<std::filesystem::path>& tz_source = std::nullopt);

/// Throws ConfigError naming the first missing file.
void check_refdata_dir(const std::filesystem::path& dir);

}  // namespace gendergap
