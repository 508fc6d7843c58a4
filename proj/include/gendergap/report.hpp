#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gendergap/aggregate.hpp"

namespace gendergap {

/// "%.9g" formatting used for every float written to CSV.
std::string format_real(double v);
/// format_real, or "NA" when undefined.
std::string format_optional(const std::optional<double>& v);

void write_cells_csv(std::ostream& out, std::span<const AggregateCell> cells);
void write_ratios_csv(std::ostream& out, const std::map<SeriesKey, TrendSeries>& series);
void write_growth_csv(std::ostream& out, const std::optional<GrowthFit>& fit, YearRange range);

/// Parses cells.csv as written by write_cells_csv. Throws InputError.
std::vector<AggregateCell> read_cells_csv(std::istream& in);

struct ChartPanel {
    std::string label;
    std::uint64_t volume = 0;  // total commits of the group, for ordering and share
    TrendSeries series;
};

struct ChartSpec {
    std::string title;
    double panel_width = 640.0;
    double panel_height = 150.0;
    double margin_left = 56.0;
    double margin_right = 96.0;  // room for the share inset
    double panel_gap = 28.0;
};

/// Panel y-axis maximum: the data maximum rounded up at its leading
/// significant digit (0.073 → 0.08, 0.12 → 0.2). All-zero data → 0.1.
double panel_y_max(double data_max);

/// Renders one panel per group, ordered by volume descending, each with
/// ratio bars, the loess polyline and a share-of-total pie inset. Panels
/// with no defined ratio are omitted and reported in `warnings`. Throws
/// InputError when nothing is left to draw.
std::string render_stacked_chart(std::vector<ChartPanel> panels, const ChartSpec& spec,
                                 std::vector<std::string>* warnings = nullptr);

/// Builds the chart panels of one (grouping, metric) from ratio series and
/// cell volumes.
std::vector<ChartPanel> chart_panels(const std::map<SeriesKey, TrendSeries>& series,
                                     std::span<const AggregateCell> cells, Grouping grouping, Metric metric);

/// Writes charts/<grouping>_<metric>.svg for every grouping present in the
/// cells. Returns the warnings produced.
std::vector<std::string> write_charts(const std::filesystem::path& dir, std::span<const AggregateCell> cells,
                                      const std::map<SeriesKey, TrendSeries>& series);

}  // namespace gendergap
