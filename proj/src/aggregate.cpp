#include "gendergap/aggregate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "gendergap/error.hpp"

namespace gendergap {

std::string_view grouping_name(Grouping g) { return g == Grouping::ByOffset ? "offset" : "region"; }

std::optional<Grouping> parse_grouping(std::string_view s) {
    if (s == "offset") return Grouping::ByOffset;
    if (s == "region") return Grouping::ByRegion;
    return std::nullopt;
}

std::string_view metric_name(Metric m) { return m == Metric::Commits ? "commits" : "authors"; }

std::string group_label(Grouping g, std::int32_t group) {
    if (g == Grouping::ByRegion) return std::string(region_name(static_cast<Region>(group)));
    return std::to_string(group);
}

std::optional<YearRange> parse_year_range(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto num = [](std::string_view part) -> std::optional<int> {
        int v{};
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc{} || p != part.data() + part.size()) return std::nullopt;
        return v;
    };
    auto a = num(s.substr(0, colon));
    auto b = num(s.substr(colon + 1));
    if (!a || !b || *a > *b) return std::nullopt;
    return YearRange{*a, *b};
}

std::optional<ThresholdScope> parse_threshold_scope(std::string_view s) {
    if (s == "group") return ThresholdScope::PerGroup;
    if (s == "year") return ThresholdScope::PerYear;
    return std::nullopt;
}

// ------------------------------------------------------- CellAccumulator

CellAccumulator::CellAccumulator(AggregateOptions options) : options_(options) {}

std::uint64_t CellAccumulator::pack(int year, Grouping g, std::int32_t group, std::uint32_t author) {
    return (static_cast<std::uint64_t>(static_cast<std::uint16_t>(year)) << 48) |
           (static_cast<std::uint64_t>(g == Grouping::ByRegion) << 47) |
           (static_cast<std::uint64_t>((group + 16384) & 0x7FFF) << 32) | author;
}

void CellAccumulator::add(const ClassifiedCommit& c) {
    if (!options_.years.contains(c.year)) {
        ++outside_years_;
        return;
    }
    ++added_;
    ++totals_[c.year];
    genders_[c.author] = c.gender;
    ++per_year_[pack(c.year, Grouping::ByOffset, 0, c.author)];
    if (options_.by_offset) ++counts_[pack(c.year, Grouping::ByOffset, c.offset_minutes, c.author)];
    if (options_.by_region) {
        if (c.region) ++counts_[pack(c.year, Grouping::ByRegion, static_cast<std::int32_t>(*c.region), c.author)];
        else ++unresolved_[c.year];
    }
}

void CellAccumulator::merge(const CellAccumulator& o) {
    for (const auto& [k, v] : o.counts_) counts_[k] += v;
    for (const auto& [k, v] : o.per_year_) per_year_[k] += v;
    for (const auto& [k, v] : o.genders_) genders_[k] = v;
    for (const auto& [k, v] : o.unresolved_) unresolved_[k] += v;
    for (const auto& [k, v] : o.totals_) totals_[k] += v;
    added_ += o.added_;
    outside_years_ += o.outside_years_;
}

std::vector<AggregateCell> CellAccumulator::cells() const {
    struct Key {
        Grouping grouping;
        std::int32_t group;
        int year;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::array<AggregateCell, 3>> out;
    for (const auto& [k, count] : counts_) {
        const int year = static_cast<std::int16_t>(static_cast<std::uint16_t>(k >> 48));
        const auto grouping = ((k >> 47) & 1) ? Grouping::ByRegion : Grouping::ByOffset;
        const auto group = static_cast<std::int32_t>((k >> 32) & 0x7FFF) - 16384;
        const auto author = static_cast<std::uint32_t>(k & 0xFFFFFFFFu);
        const auto gender = genders_.at(author);

        auto [it, inserted] = out.try_emplace(Key{grouping, group, year});
        if (inserted)
            for (auto g : kAllAuthorGenders)
                it->second[static_cast<std::size_t>(g)] = AggregateCell{year, grouping, group, g, 0, 0};
        auto& cell = it->second[static_cast<std::size_t>(gender)];
        cell.commit_count += count;
        const std::uint64_t activity =
            options_.scope == ThresholdScope::PerGroup ? count : per_year_.at(pack(year, Grouping::ByOffset, 0, author));
        if (activity >= options_.author_threshold) ++cell.author_count;
    }
    std::vector<AggregateCell> cells;
    cells.reserve(out.size() * 3);
    for (const auto& [_, triple] : out) cells.insert(cells.end(), triple.begin(), triple.end());
    return cells;
}

std::vector<AggregateCell> build_cells(std::span<const ClassifiedCommit> commits, Grouping grouping,
                                       std::uint32_t author_threshold) {
    AggregateOptions options;
    options.author_threshold = author_threshold;
    options.years = {-32768, 32767};
    options.by_offset = grouping == Grouping::ByOffset;
    options.by_region = grouping == Grouping::ByRegion;
    CellAccumulator acc(options);
    for (const auto& c : commits) acc.add(c);
    return acc.cells();
}

// ---------------------------------------------------------------- ratios

std::optional<double> female_ratio(std::uint64_t female, std::uint64_t male) {
    if (female + male == 0) return std::nullopt;
    return static_cast<double>(female) / static_cast<double>(female + male);
}

std::optional<double> female_ratio(std::span<const AggregateCell> cells, Metric metric) {
    std::uint64_t f = 0, m = 0;
    for (const auto& c : cells) {
        const auto v = metric == Metric::Commits ? c.commit_count : c.author_count;
        if (c.gender == AuthorGender::Female) f += v;
        else if (c.gender == AuthorGender::Male) m += v;
    }
    return female_ratio(f, m);
}

// ----------------------------------------------------------------- loess

std::vector<double> loess_smooth(std::span<const double> x, std::span<const double> y, double span, int degree) {
    const std::size_t n = x.size();
    if (n != y.size()) throw InputError("aggregate", "loess: x and y differ in length");
    if (n < 3) throw InputError("aggregate", "loess: at least 3 points required");
    if (!(span > 0.0 && span <= 1.0)) throw ConfigError("aggregate", "loess: span must be in (0, 1]");
    if (degree != 0 && degree != 1) throw ConfigError("aggregate", "loess: degree must be 0 or 1");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InputError("aggregate", "loess: non-finite input");

    std::size_t q = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n)));
    q = std::clamp<std::size_t>(q, static_cast<std::size_t>(degree) + 2, n);

    std::vector<double> out(n);
    std::vector<double> dist(n), sorted(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) dist[j] = std::abs(x[j] - x[i]);
        sorted = dist;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(q - 1), sorted.end());
        const double dmax = sorted[q - 1];

        double sw = 0.0, swx = 0.0, swy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (dmax == 0.0) {
                w[j] = dist[j] == 0.0 ? 1.0 : 0.0;
            } else if (dist[j] < dmax) {
                const double u = dist[j] / dmax;
                const double t = 1.0 - u * u * u;
                w[j] = t * t * t;
            } else {
                w[j] = 0.0;
            }
            sw += w[j];
            swx += w[j] * x[j];
            swy += w[j] * y[j];
        }
        const double xm = swx / sw;
        const double ym = swy / sw;
        if (degree == 0) {
            out[i] = ym;
            continue;
        }
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sxx += w[j] * (x[j] - xm) * (x[j] - xm);
            sxy += w[j] * (x[j] - xm) * (y[j] - ym);
        }
        out[i] = sxx > 0.0 ? ym + (sxy / sxx) * (x[i] - xm) : ym;
    }
    return out;
}

std::optional<double> TrendSeries::ratio_at(int year) const {
    auto it = std::lower_bound(years.begin(), years.end(), year);
    if (it == years.end() || *it != year) return std::nullopt;
    return ratio[static_cast<std::size_t>(it - years.begin())];
}

TrendSeries make_trend(std::vector<int> years, std::vector<std::optional<double>> ratio, double span) {
    TrendSeries s{std::move(years), std::move(ratio), {}};
    s.smoothed.assign(s.years.size(), std::nullopt);
    std::vector<double> xs, ys;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < s.years.size(); ++i) {
        if (!s.ratio[i]) continue;
        xs.push_back(s.years[i]);
        ys.push_back(*s.ratio[i]);
        where.push_back(i);
    }
    if (xs.size() >= 3) {
        auto fit = loess_smooth(xs, ys, span, 1);
        for (std::size_t k = 0; k < where.size(); ++k) s.smoothed[where[k]] = fit[k];
    }
    return s;
}

std::optional<double> ratio_delta(const TrendSeries& series, int year_a, int year_b) {
    auto a = series.ratio_at(year_a);
    auto b = series.ratio_at(year_b);
    if (!a || !b) return std::nullopt;
    return *b - *a;
}

// ---------------------------------------------------------------- growth

GrowthFit exp_fit(const std::map<int, double>& yearly_totals, YearRange range) {
    if (range.last <= range.first) throw ConfigError("aggregate", "growth fit needs at least two years");
    std::vector<double> xs, ys;
    for (int y = range.first; y <= range.last; ++y) {
        auto it = yearly_totals.find(y);
        const double v = it == yearly_totals.end() ? 0.0 : it->second;
        if (!(v > 0.0) || !std::isfinite(v))
            throw InputError("aggregate", "growth fit: non-positive count in year " + std::to_string(y));
        xs.push_back(y - 1970);
        ys.push_back(std::log(v));
    }
    const double n = static_cast<double>(xs.size());
    const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - xm) * (xs[i] - xm);
        sxy += (xs[i] - xm) * (ys[i] - ym);
    }
    GrowthFit fit;
    fit.b = sxy / sxx;
    const double intercept = ym - fit.b * xm;
    fit.a = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + fit.b * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.range = range;
    return fit;
}

// ---------------------------------------------------------------- series

std::map<SeriesKey, TrendSeries> ratio_series(std::span<const AggregateCell> cells, double span) {
    struct Tally {
        std::uint64_t fc = 0, mc = 0, fa = 0, ma = 0;
    };
    std::map<std::pair<Grouping, std::int32_t>, std::map<int, Tally>> by_group;
    for (const auto& c : cells) {
        auto& t = by_group[{c.grouping, c.group}][c.year];
        if (c.gender == AuthorGender::Female) t.fc += c.commit_count, t.fa += c.author_count;
        else if (c.gender == AuthorGender::Male) t.mc += c.commit_count, t.ma += c.author_count;
    }
    std::map<SeriesKey, TrendSeries> out;
    for (const auto& [key, years] : by_group) {
        for (auto metric : {Metric::Commits, Metric::Authors}) {
            std::vector<int> ys;
            std::vector<std::optional<double>> rs;
            for (const auto& [year, t] : years) {
                ys.push_back(year);
                rs.push_back(metric == Metric::Commits ? female_ratio(t.fc, t.mc) : female_ratio(t.fa, t.ma));
            }
            out.emplace(SeriesKey{key.first, key.second, metric}, make_trend(std::move(ys), std::move(rs), span));
        }
    }
    return out;
}

std::map<std::pair<Grouping, std::int32_t>, std::uint64_t> group_volumes(std::span<const AggregateCell> cells) {
    std::map<std::pair<Grouping, std::int32_t>, std::uint64_t> out;
    for (const auto& c : cells) out[{c.grouping, c.group}] += c.commit_count;
    return out;
}

}  // namespace gendergap
