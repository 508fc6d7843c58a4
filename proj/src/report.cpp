#include "gendergap/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gendergap/error.hpp"

namespace gendergap {

namespace {

std::string fixed2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (c == '"') quoted = false;
            else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : "NA"; }

// ------------------------------------------------------------------- CSV

void write_cells_csv(std::ostream& out, std::span<const AggregateCell> cells) {
    out << "year,grouping,group,gender,commit_count,author_count\n";
    for (const auto& c : cells)
        out << c.year << ',' << grouping_name(c.grouping) << ',' << csv_field(group_label(c.grouping, c.group)) << ','
            << author_gender_name(c.gender) << ',' << c.commit_count << ',' << c.author_count << '\n';
}

void write_ratios_csv(std::ostream& out, const std::map<SeriesKey, TrendSeries>& series) {
    out << "year,grouping,group,metric,ratio,loess\n";
    for (const auto& [key, s] : series)
        for (std::size_t i = 0; i < s.years.size(); ++i)
            out << s.years[i] << ',' << grouping_name(key.grouping) << ','
                << csv_field(group_label(key.grouping, key.group)) << ',' << metric_name(key.metric) << ','
                << format_optional(s.ratio[i]) << ',' << format_optional(s.smoothed[i]) << '\n';
}

void write_growth_csv(std::ostream& out, const std::optional<GrowthFit>& fit, YearRange range) {
    out << "a,b,residual,range\n";
    const auto r = fit ? fit->range : range;
    const std::string label = std::to_string(r.first) + ":" + std::to_string(r.last);
    if (fit) out << format_real(fit->a) << ',' << format_real(fit->b) << ',' << format_real(fit->residual) << ',' << label << '\n';
    else out << "NA,NA,NA," << label << '\n';
}

std::vector<AggregateCell> read_cells_csv(std::istream& in) {
    std::vector<AggregateCell> cells;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "year,grouping,group,gender,commit_count,author_count")
                throw InputError("report", "cells.csv: unexpected header");
            continue;
        }
        auto f = split_csv_line(line);
        auto bad = [&](const std::string& what) {
            throw InputError("report", "cells.csv:" + std::to_string(line_no) + ": " + what);
        };
        if (f.size() != 6) bad("expected 6 columns");
        AggregateCell c;
        try {
            c.year = std::stoi(f[0]);
            c.commit_count = std::stoull(f[4]);
            c.author_count = std::stoull(f[5]);
        } catch (const std::exception&) {
            bad("bad number");
        }
        auto grouping = parse_grouping(f[1]);
        auto gender = parse_author_gender(f[3]);
        if (!grouping || !gender) bad("bad grouping or gender");
        c.grouping = *grouping;
        c.gender = *gender;
        if (c.grouping == Grouping::ByRegion) {
            auto r = parse_region(f[2]);
            if (!r) bad("unknown region '" + f[2] + "'");
            c.group = static_cast<std::int32_t>(*r);
        } else {
            try {
                c.group = std::stoi(f[2]);
            } catch (const std::exception&) {
                bad("bad offset group");
            }
        }
        cells.push_back(c);
    }
    return cells;
}

// ----------------------------------------------------------------- charts

double panel_y_max(double data_max) {
    if (!(data_max > 0.0)) return 0.1;
    const double step = std::pow(10.0, std::floor(std::log10(data_max)));
    const double k = std::ceil(data_max / step - 1e-9);
    return k * step;
}

std::string render_stacked_chart(std::vector<ChartPanel> panels, const ChartSpec& spec,
                                 std::vector<std::string>* warnings) {
    std::uint64_t total_volume = 0;
    for (const auto& p : panels) total_volume += p.volume;

    std::vector<ChartPanel> kept;
    for (auto& p : panels) {
        bool any = std::any_of(p.series.ratio.begin(), p.series.ratio.end(), [](const auto& r) { return r.has_value(); });
        if (any) kept.push_back(std::move(p));
        else if (warnings) warnings->push_back("panel '" + p.label + "' omitted: no defined ratio");
    }
    if (kept.empty()) throw InputError("report", "chart '" + spec.title + "': no group with a defined ratio");
    std::stable_sort(kept.begin(), kept.end(), [](const ChartPanel& a, const ChartPanel& b) {
        return a.volume != b.volume ? a.volume > b.volume : a.label < b.label;
    });

    int first_year = kept.front().series.years.front();
    int last_year = first_year;
    for (const auto& p : kept) {
        first_year = std::min(first_year, p.series.years.front());
        last_year = std::max(last_year, p.series.years.back());
    }
    const int span_years = last_year - first_year + 1;
    const double plot_w = spec.panel_width - spec.margin_left - spec.margin_right;
    const double slot = plot_w / span_years;
    const double bar_w = slot * 0.7;
    const double title_h = 30.0;
    const double total_h = title_h + kept.size() * (spec.panel_height + spec.panel_gap);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(spec.panel_width) << "\" height=\""
        << fixed2(total_h) << "\" viewBox=\"0 0 " << fixed2(spec.panel_width) << ' ' << fixed2(total_h)
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    svg << "<text x=\"" << fixed2(spec.margin_left) << "\" y=\"18\" font-size=\"13\">" << xml_escape(spec.title)
        << "</text>\n";

    for (std::size_t k = 0; k < kept.size(); ++k) {
        const auto& p = kept[k];
        const auto& s = p.series;
        const double top = title_h + k * (spec.panel_height + spec.panel_gap) + 14.0;
        const double h = spec.panel_height - 14.0;
        const double left = spec.margin_left;

        double data_max = 0.0;
        for (std::size_t i = 0; i < s.years.size(); ++i) {
            if (s.ratio[i]) data_max = std::max(data_max, *s.ratio[i]);
            if (s.smoothed[i]) data_max = std::max(data_max, *s.smoothed[i]);
        }
        const double ymax = panel_y_max(data_max);
        auto y_of = [&](double v) { return top + h - std::clamp(v / ymax, 0.0, 1.0) * h; };
        auto x_of = [&](int year) { return left + (year - first_year) * slot + slot / 2.0; };

        svg << "<g class=\"panel\" data-group=\"" << xml_escape(p.label) << "\" data-volume=\"" << p.volume
            << "\" data-ymax=\"" << format_real(ymax) << "\">\n";
        svg << "<text x=\"" << fixed2(left) << "\" y=\"" << fixed2(top - 4.0) << "\" font-size=\"11\">"
            << xml_escape(p.label) << "</text>\n";
        svg << "<rect class=\"frame\" x=\"" << fixed2(left) << "\" y=\"" << fixed2(top) << "\" width=\""
            << fixed2(plot_w) << "\" height=\"" << fixed2(h) << "\" fill=\"none\" stroke=\"#999\"/>\n";
        svg << "<text x=\"" << fixed2(left - 4.0) << "\" y=\"" << fixed2(top + 8.0)
            << "\" text-anchor=\"end\">" << format_real(ymax) << "</text>\n";
        svg << "<text x=\"" << fixed2(left - 4.0) << "\" y=\"" << fixed2(top + h) << "\" text-anchor=\"end\">0</text>\n";

        for (std::size_t i = 0; i < s.years.size(); ++i) {
            if (!s.ratio[i]) continue;
            const double y = y_of(*s.ratio[i]);
            svg << "<rect class=\"bar\" data-year=\"" << s.years[i] << "\" data-ratio=\"" << format_real(*s.ratio[i])
                << "\" x=\"" << fixed2(x_of(s.years[i]) - bar_w / 2.0) << "\" y=\"" << fixed2(y) << "\" width=\""
                << fixed2(bar_w) << "\" height=\"" << fixed2(top + h - y) << "\" fill=\"#7aa6c2\"/>\n";
        }
        std::string points;
        for (std::size_t i = 0; i < s.years.size(); ++i) {
            if (!s.smoothed[i]) continue;
            if (!points.empty()) points += ' ';
            points += fixed2(x_of(s.years[i])) + "," + fixed2(y_of(*s.smoothed[i]));
        }
        if (!points.empty())
            svg << "<polyline class=\"loess\" points=\"" << points << "\" fill=\"none\" stroke=\"#c0392b\" "
                << "stroke-width=\"1.5\"/>\n";

        for (int year = first_year; year <= last_year; year += std::max(1, span_years / 6))
            svg << "<text x=\"" << fixed2(x_of(year)) << "\" y=\"" << fixed2(top + h + 11.0)
                << "\" text-anchor=\"middle\">" << year << "</text>\n";

        const double share = total_volume ? static_cast<double>(p.volume) / static_cast<double>(total_volume) : 0.0;
        const double r = std::min(28.0, h / 2.0 - 4.0);
        const double cx = spec.panel_width - spec.margin_right / 2.0;
        const double cy = top + h / 2.0;
        svg << "<g class=\"inset\" data-share=\"" << format_real(share) << "\">\n";
        svg << "<circle cx=\"" << fixed2(cx) << "\" cy=\"" << fixed2(cy) << "\" r=\"" << fixed2(r)
            << "\" fill=\"#eee\" stroke=\"#999\"/>\n";
        if (share >= 1.0) {
            svg << "<circle class=\"share\" cx=\"" << fixed2(cx) << "\" cy=\"" << fixed2(cy) << "\" r=\"" << fixed2(r)
                << "\" fill=\"#34495e\"/>\n";
        } else if (share > 0.0) {
            const double a = 2.0 * std::numbers::pi * share;
            svg << "<path class=\"share\" d=\"M " << fixed2(cx) << ' ' << fixed2(cy) << " L " << fixed2(cx) << ' '
                << fixed2(cy - r) << " A " << fixed2(r) << ' ' << fixed2(r) << " 0 " << (share > 0.5 ? 1 : 0)
                << " 1 " << fixed2(cx + r * std::sin(a)) << ' ' << fixed2(cy - r * std::cos(a))
                << " Z\" fill=\"#34495e\"/>\n";
        }
        char pct[32];
        std::snprintf(pct, sizeof pct, "%.1f%%", share * 100.0);
        svg << "<text x=\"" << fixed2(cx) << "\" y=\"" << fixed2(cy + r + 11.0) << "\" text-anchor=\"middle\">" << pct
            << "</text>\n";
        svg << "</g>\n</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<ChartPanel> chart_panels(const std::map<SeriesKey, TrendSeries>& series,
                                     std::span<const AggregateCell> cells, Grouping grouping, Metric metric) {
    auto volumes = group_volumes(cells);
    std::vector<ChartPanel> panels;
    for (const auto& [key, s] : series) {
        if (key.grouping != grouping || key.metric != metric || s.years.empty()) continue;
        panels.push_back(ChartPanel{group_label(key.grouping, key.group), volumes[{key.grouping, key.group}], s});
    }
    return panels;
}

std::vector<std::string> write_charts(const std::filesystem::path& dir, std::span<const AggregateCell> cells,
                                      const std::map<SeriesKey, TrendSeries>& series) {
    std::vector<std::string> warnings;
    if (cells.empty()) {
        warnings.push_back("no cells: charts skipped");
        return warnings;
    }
    std::filesystem::create_directories(dir);
    for (auto grouping : {Grouping::ByOffset, Grouping::ByRegion}) {
        for (auto metric : {Metric::Commits, Metric::Authors}) {
            auto panels = chart_panels(series, cells, grouping, metric);
            if (panels.empty()) continue;
            const std::string name = std::string(grouping_name(grouping)) + "_" + std::string(metric_name(metric));
            ChartSpec spec;
            spec.title = "Female ratio by " + std::string(grouping_name(grouping)) + " (" +
                         std::string(metric_name(metric)) + ")";
            std::string doc;
            try {
                doc = render_stacked_chart(std::move(panels), spec, &warnings);
            } catch (const InputError& e) {
                warnings.push_back(std::string(name) + ": " + e.what());
                continue;
            }
            std::ofstream out(dir / (name + ".svg"), std::ios::binary);
            out << doc;
            if (!out) throw InputError("report", "cannot write " + (dir / (name + ".svg")).string());
        }
    }
    return warnings;
}

}  // namespace gendergap
