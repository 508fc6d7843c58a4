#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gendergap/types.hpp"

namespace gendergap {

enum class Grouping : std::uint8_t { ByOffset, ByRegion };
enum class Metric : std::uint8_t { Commits, Authors };

std::string_view grouping_name(Grouping g);  // "offset" / "region"
std::optional<Grouping> parse_grouping(std::string_view s);
std::string_view metric_name(Metric m);

/// Serialized group label: signed offset minutes or the region name.
std::string group_label(Grouping g, std::int32_t group);

struct YearRange {
    int first = 1970;
    int last = 2020;

    bool contains(int y) const { return y >= first && y <= last; }
    bool operator==(const YearRange&) const = default;
};

/// "A:B" with A <= B.
std::optional<YearRange> parse_year_range(std::string_view s);

/// One commit after gender inference and geolocation.
struct ClassifiedCommit {
    std::uint32_t author = 0;  // interned AuthorKey id
    int year = 0;              // UTC calendar year
    std::int32_t offset_minutes = 0;
    std::optional<Region> region;
    AuthorGender gender = AuthorGender::Unknown;
};

struct AggregateCell {
    int year = 0;
    Grouping grouping = Grouping::ByOffset;
    std::int32_t group = 0;  // offset minutes or Region ordinal
    AuthorGender gender = AuthorGender::Unknown;
    std::uint64_t commit_count = 0;
    std::uint64_t author_count = 0;  // distinct active authors

    auto operator<=>(const AggregateCell&) const = default;
};

/// Where an author's commits are counted against the activity threshold.
enum class ThresholdScope {
    PerGroup,  // within one (year, group)
    PerYear,   // across all groups of a year
};

std::optional<ThresholdScope> parse_threshold_scope(std::string_view s);

struct AggregateOptions {
    std::uint32_t author_threshold = 5;
    ThresholdScope scope = ThresholdScope::PerGroup;
    YearRange years{};
    bool by_offset = true;
    bool by_region = true;
};

/// Streaming, mergeable (year, group, author) tallies. Merging is
/// associative and commutative, so shards can be combined in any order.
class CellAccumulator {
public:
    explicit CellAccumulator(AggregateOptions options = {});

    void add(const ClassifiedCommit& commit);
    void merge(const CellAccumulator& other);

    /// Cells sorted by (grouping, group, year, gender); every (year, group)
    /// that saw a commit gets one cell per gender, zeros included.
    std::vector<AggregateCell> cells() const;

    std::uint64_t commits_added() const { return added_; }
    std::uint64_t commits_outside_years() const { return outside_years_; }
    /// by_region: commits excluded because no region was resolved, per year.
    const std::map<int, std::uint64_t>& unresolved_by_year() const { return unresolved_; }
    /// All in-range commits per year, independent of grouping.
    const std::map<int, std::uint64_t>& totals_by_year() const { return totals_; }

    const AggregateOptions& options() const { return options_; }

private:
    static std::uint64_t pack(int year, Grouping g, std::int32_t group, std::uint32_t author);

    AggregateOptions options_;
    std::unordered_map<std::uint64_t, std::uint64_t> counts_;    // (year, grouping, group, author) → commits
    std::unordered_map<std::uint64_t, std::uint64_t> per_year_;  // (year, author) → commits
    std::unordered_map<std::uint32_t, AuthorGender> genders_;
    std::map<int, std::uint64_t> unresolved_;
    std::map<int, std::uint64_t> totals_;
    std::uint64_t added_ = 0;
    std::uint64_t outside_years_ = 0;
};

/// Builds cells in one pass over classified commits.
std::vector<AggregateCell> build_cells(std::span<const ClassifiedCommit> commits, Grouping grouping,
                                       std::uint32_t author_threshold = 5);

/// F / (F + M) over the cells of one (year, grouping, group); unknowns are
/// excluded. nullopt when F + M = 0.
std::optional<double> female_ratio(std::span<const AggregateCell> cells, Metric metric);

std::optional<double> female_ratio(std::uint64_t female, std::uint64_t male);

/// Locally weighted regression (tricube weights) evaluated at each x.
/// Requires at least 3 points, span in (0, 1], degree 0 or 1.
std::vector<double> loess_smooth(std::span<const double> x, std::span<const double> y, double span = 0.75,
                                 int degree = 1);

struct TrendSeries {
    std::vector<int> years;
    std::vector<std::optional<double>> ratio;
    std::vector<std::optional<double>> smoothed;

    std::optional<double> ratio_at(int year) const;
};

/// Loess over the defined points of `ratio`; undefined years stay undefined.
/// With fewer than 3 defined points nothing is smoothed.
TrendSeries make_trend(std::vector<int> years, std::vector<std::optional<double>> ratio, double span = 0.75);

/// ratio(year_b) - ratio(year_a); nullopt if either is missing or undefined.
std::optional<double> ratio_delta(const TrendSeries& series, int year_a, int year_b);

struct GrowthFit {
    double a = 0.0;         // count at 1970
    double b = 0.0;         // growth rate per year
    double residual = 0.0;  // RMSE of ln(count)
    YearRange range{};
};

/// Least squares of ln(count) against (year - 1970) over the range. Every
/// year in the range must have a strictly positive count.
GrowthFit exp_fit(const std::map<int, double>& yearly_totals, YearRange range = {1971, 2019});

/// Key for one ratio series: (grouping, group, metric).
struct SeriesKey {
    Grouping grouping;
    std::int32_t group;
    Metric metric;

    auto operator<=>(const SeriesKey&) const = default;
};

/// Per-series female ratios and loess curves derived from cells.
std::map<SeriesKey, TrendSeries> ratio_series(std::span<const AggregateCell> cells, double span = 0.75);

/// Total commits per (grouping, group) across years and genders.
std::map<std::pair<Grouping, std::int32_t>, std::uint64_t> group_volumes(std::span<const AggregateCell> cells);

}  // namespace gendergap
