#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gendergap {

/// A POSIX TZ rule string such as "CET-1CEST,M3.5.0,M10.5.0/3", as found
/// in the footer of version 2+ TZif files. Offsets are east of UTC.
class PosixTz {
public:
    static std::optional<PosixTz> parse(std::string_view spec);

    std::int32_t offset_at(std::int64_t utc) const;
    bool has_dst() const { return has_dst_; }
    std::int32_t std_offset() const { return std_offset_; }
    std::int32_t dst_offset() const { return dst_offset_; }

    struct DateRule {
        enum class Kind { Julian1, Julian0, MonthWeekDay } kind = Kind::MonthWeekDay;
        int day = 0;    // Jn: 1..365, n: 0..365, Mm.w.d: weekday 0..6
        int week = 0;   // 1..5
        int month = 0;  // 1..12
        std::int32_t time = 7200;  // seconds after local midnight, may be negative or > 24h
    };

private:
    std::int64_t transition_utc(int year, const DateRule& rule, std::int32_t offset_before) const;

    std::int32_t std_offset_ = 0;
    std::int32_t dst_offset_ = 0;
    bool has_dst_ = false;
    DateRule start_;
    DateRule end_;
};

/// Piecewise-constant UTC offset function for a single zone.
class ZoneRules {
public:
    ZoneRules() = default;
    ZoneRules(std::int32_t initial_offset, std::vector<std::int64_t> transition_times,
              std::vector<std::int32_t> offsets_after, std::optional<PosixTz> tail = std::nullopt);

    /// Offset in seconds east of UTC in effect at the UTC instant.
    std::int32_t offset_seconds(std::int64_t utc) const;

    std::span<const std::int64_t> transitions() const { return times_; }

    /// Transition instants inside [from, to], including those produced by
    /// the POSIX tail rule.
    std::vector<std::int64_t> transitions_between(std::int64_t from, std::int64_t to) const;

private:
    std::int32_t initial_ = 0;
    std::vector<std::int64_t> times_;
    std::vector<std::int32_t> offsets_;
    std::optional<PosixTz> tail_;
};

/// Parses the binary TZif format (RFC 8536), versions 1 to 4.
std::optional<ZoneRules> parse_tzif(std::span<const unsigned char> bytes);

/// Offset rules for every known place, keyed by tz identifier.
class TzRuleSet {
public:
    void add(std::string place_id, ZoneRules rules);
    bool contains(std::string_view place_id) const;
    const ZoneRules& rules(std::string_view place_id) const;

    std::int32_t offset_seconds(std::string_view place_id, std::int64_t utc) const;
    std::int32_t offset_minutes(std::string_view place_id, std::int64_t utc) const;

    std::vector<std::string> place_ids() const;
    std::size_t size() const { return zones_.size(); }

private:
    std::map<std::string, ZoneRules, std::less<>> zones_;
};

/// Reads the extracted transition table (place_id, utc_start, offset_seconds;
/// utc_start "-" marks the offset in effect before any transition).
TzRuleSet load_tz_rules_table(const std::filesystem::path& path);

/// Reads compiled zoneinfo files for the given places from a zoneinfo root.
TzRuleSet load_tz_rules_zoneinfo(const std::filesystem::path& root, std::span<const std::string> place_ids);

/// Directory → compiled zoneinfo; regular file → extracted table. Every
/// listed place must be covered; zones not listed are dropped. Throws
/// ConfigError.
TzRuleSet load_tz_rules(const std::filesystem::path& source, std::span<const std::string> place_ids);

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

}  // namespace gendergap
