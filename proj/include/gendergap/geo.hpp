#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gendergap/gender.hpp"
#include "gendergap/ingest.hpp"
#include "gendergap/refdata.hpp"
#include "gendergap/types.hpp"

namespace gendergap {

enum class GeoMethod : std::uint8_t { Email, TzName, Unresolved };
enum class GeoStrategy : std::uint8_t { Email, TzName, Mixed };

std::string_view geo_method_name(GeoMethod m);
std::string_view geo_strategy_name(GeoStrategy s);
std::optional<GeoStrategy> parse_geo_strategy(std::string_view s);

struct PlaceScore {
    std::string place_id;
    double score = 0.0;
};

using RegionScores = std::array<double, kRegionCount>;

struct GeoResolution {
    std::optional<Region> region;  // present iff method != Unresolved
    GeoMethod method = GeoMethod::Unresolved;
    /// Per-region summed place scores; filled by the tz-name technique only.
    std::optional<RegionScores> region_scores;
};

/// Last label of the email's domain, lower-cased, iff it is a known ccTLD.
std::optional<std::string> extract_cctld(std::string_view email, const CcTldMap& map);

GeoResolution geolocate_email(const CommitRecord& record, const CcTldMap& map);

/// Places, sorted by id, whose rules give `offset_minutes` at the UTC instant.
std::vector<std::string> compatible_places(std::int64_t utc, std::int32_t offset_minutes, const TzRuleSet& rules);

/// population × incidence summed over tokens and over both name tables.
PlaceScore score_place(std::span<const std::string> tokens, const Place& place, const PlaceTable& places,
                       const IncidenceTable& forenames, const IncidenceTable& surnames);

/// Region argmax over compatible-place scores. Zero maxima and exact ties
/// between regions are unresolved.
std::optional<Region> pick_region(const RegionScores& scores);

GeoResolution geolocate_tzname(const CommitRecord& record, std::span<const std::string> tokens, const RefData& refs);

/// ccTLD for offset-zero commits, tz-name scoring otherwise; no fallback.
GeoResolution geolocate_mixed(const CommitRecord& record, std::span<const std::string> tokens, const RefData& refs);

/// Precomputed (instant, offset) → compatible places lookup. Offsets of
/// every place are constant between consecutive transition instants, so
/// the window is cut into segments holding offset → places tables.
class CompatibilityIndex {
public:
    CompatibilityIndex(const PlaceTable& places, const TzRuleSet& rules, std::int64_t window_begin,
                       std::int64_t window_end);

    /// Place indices sorted ascending (i.e. by place_id).
    std::span<const std::uint32_t> lookup(std::int64_t utc, std::int32_t offset_minutes) const;
    /// Unindexed scan over all places; reference for lookup().
    std::vector<std::uint32_t> direct(std::int64_t utc, std::int32_t offset_minutes) const;

    std::size_t segments() const { return starts_.size(); }

private:
    struct Entry {
        std::int32_t offset_seconds;
        std::uint32_t begin;  // into places_
        std::uint32_t end;
    };

    const PlaceTable* table_;
    const TzRuleSet* rules_;
    std::int64_t window_begin_;
    std::int64_t window_end_;
    std::vector<std::int64_t> starts_;
    std::vector<std::uint32_t> entry_offsets_;  // segment i → entries_[entry_offsets_[i] .. entry_offsets_[i+1])
    std::vector<Entry> entries_;
    std::vector<std::uint32_t> places_;
    mutable std::vector<std::uint32_t> scratch_;
};

/// Reusable geolocation engine over one RefData instance. Not thread-safe
/// for out-of-window lookups; use one instance per worker.
class Geolocator {
public:
    explicit Geolocator(const RefData& refs);

    GeoResolution email(const CommitRecord& record) const;
    GeoResolution tzname(const CommitRecord& record, std::span<const std::string> tokens) const;
    GeoResolution mixed(const CommitRecord& record, std::span<const std::string> tokens) const;
    GeoResolution resolve(GeoStrategy strategy, const CommitRecord& record, std::span<const std::string> tokens) const;

    const RefData& refs() const { return *refs_; }

private:
    const RefData* refs_;
    CompatibilityIndex index_;
};

/// Share of a year's commits recorded at UTC offset zero; nullopt when the
/// year has no commits.
std::optional<double> tzz_share(std::span<const CommitRecord> records, int year);

}  // namespace gendergap
