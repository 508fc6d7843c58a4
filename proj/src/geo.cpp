#include "gendergap/geo.hpp"

#include <algorithm>
#include <map>

#include "gendergap/error.hpp"

namespace gendergap {

namespace {

constexpr std::array<std::string_view, 3> kMethodNames = {"email", "tzname", "unresolved"};
constexpr std::array<std::string_view, 3> kStrategyNames = {"email", "tzname", "mixed"};

struct TokenEntries {
    std::span<const PlaceIncidence> forename;
    std::span<const PlaceIncidence> surname;
};

double lookup(std::span<const PlaceIncidence> list, std::uint32_t place) {
    auto it = std::lower_bound(list.begin(), list.end(), place,
                               [](const PlaceIncidence& e, std::uint32_t p) { return e.place < p; });
    return (it != list.end() && it->place == place) ? it->incidence : 0.0;
}

std::vector<TokenEntries> prefetch(std::span<const std::string> tokens, const RefData& refs) {
    std::vector<TokenEntries> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back({refs.forenames.entries(t), refs.surnames.entries(t)});
    return out;
}

// Summation order is fixed: tokens in order, forename table before surname.
double score_with(std::span<const TokenEntries> tokens, std::uint32_t place, std::uint64_t population) {
    const double pop = static_cast<double>(population);
    double acc = 0.0;
    for (const auto& t : tokens) {
        acc += pop * lookup(t.forename, place);
        acc += pop * lookup(t.surname, place);
    }
    return acc;
}

GeoResolution resolve_scores(std::span<const TokenEntries> tokens, std::span<const std::uint32_t> compatible,
                             const PlaceTable& places) {
    RegionScores sums{};
    for (auto idx : compatible) {
        const auto& place = places[idx];
        sums[static_cast<std::size_t>(place.region)] += score_with(tokens, idx, place.population);
    }
    GeoResolution res;
    res.region = pick_region(sums);
    res.method = res.region ? GeoMethod::TzName : GeoMethod::Unresolved;
    res.region_scores = sums;
    return res;
}

std::vector<std::uint32_t> compatible_indices(std::int64_t utc, std::int32_t offset_minutes, const PlaceTable& places,
                                              const TzRuleSet& rules) {
    std::vector<std::uint32_t> out;
    const std::int64_t want = std::int64_t{offset_minutes} * 60;
    for (std::size_t i = 0; i < places.size(); ++i)
        if (rules.offset_seconds(places[i].place_id, utc) == want) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

}  // namespace

std::string_view geo_method_name(GeoMethod m) { return kMethodNames[static_cast<std::size_t>(m)]; }
std::string_view geo_strategy_name(GeoStrategy s) { return kStrategyNames[static_cast<std::size_t>(s)]; }

std::optional<GeoStrategy> parse_geo_strategy(std::string_view s) {
    for (std::size_t i = 0; i < kStrategyNames.size(); ++i)
        if (kStrategyNames[i] == s) return static_cast<GeoStrategy>(i);
    return std::nullopt;
}

std::optional<std::string> extract_cctld(std::string_view email, const CcTldMap& map) {
    auto at = email.rfind('@');
    if (at == std::string_view::npos || at == 0) return std::nullopt;
    auto domain = email.substr(at + 1);
    while (!domain.empty() && (domain.back() == '>' || domain.back() == ' ')) domain.remove_suffix(1);
    auto dot = domain.rfind('.');
    if (dot == std::string_view::npos || dot == 0) return std::nullopt;
    auto label = domain.substr(dot + 1);
    if (label.size() != 2) return std::nullopt;
    std::string tld(label);
    for (auto& c : tld)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (!map.contains(tld)) return std::nullopt;
    return tld;
}

GeoResolution geolocate_email(const CommitRecord& record, const CcTldMap& map) {
    GeoResolution res;
    if (auto tld = extract_cctld(record.author_email, map)) {
        res.region = map.lookup(*tld);
        res.method = GeoMethod::Email;
    }
    return res;
}

std::vector<std::string> compatible_places(std::int64_t utc, std::int32_t offset_minutes, const TzRuleSet& rules) {
    std::vector<std::string> out;
    const std::int64_t want = std::int64_t{offset_minutes} * 60;
    for (auto& id : rules.place_ids())
        if (rules.offset_seconds(id, utc) == want) out.push_back(std::move(id));
    return out;
}

PlaceScore score_place(std::span<const std::string> tokens, const Place& place, const PlaceTable& places,
                       const IncidenceTable& forenames, const IncidenceTable& surnames) {
    auto idx = places.index_of(place.place_id);
    if (!idx) throw ConfigError("geo", "place " + place.place_id + " not in places table");
    std::vector<TokenEntries> entries;
    for (const auto& t : tokens) entries.push_back({forenames.entries(t), surnames.entries(t)});
    return {place.place_id, score_with(entries, static_cast<std::uint32_t>(*idx), place.population)};
}

std::optional<Region> pick_region(const RegionScores& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    if (!(scores[best] > 0.0)) return std::nullopt;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (i != best && scores[i] == scores[best]) return std::nullopt;
    return static_cast<Region>(best);
}

GeoResolution geolocate_tzname(const CommitRecord& record, std::span<const std::string> tokens, const RefData& refs) {
    auto compatible = compatible_indices(record.author_timestamp, record.utc_offset_minutes, refs.places, refs.tz);
    auto entries = prefetch(tokens, refs);
    return resolve_scores(entries, compatible, refs.places);
}

GeoResolution geolocate_mixed(const CommitRecord& record, std::span<const std::string> tokens, const RefData& refs) {
    if (record.utc_offset_minutes == 0) return geolocate_email(record, refs.cctld);
    return geolocate_tzname(record, tokens, refs);
}

// ----------------------------------------------------- CompatibilityIndex

CompatibilityIndex::CompatibilityIndex(const PlaceTable& places, const TzRuleSet& rules, std::int64_t window_begin,
                                       std::int64_t window_end)
    : table_(&places), rules_(&rules), window_begin_(window_begin), window_end_(window_end) {
    starts_.push_back(window_begin);
    for (const auto& p : places.places()) {
        auto ts = rules.rules(p.place_id).transitions_between(window_begin + 1, window_end);
        starts_.insert(starts_.end(), ts.begin(), ts.end());
    }
    std::sort(starts_.begin(), starts_.end());
    starts_.erase(std::unique(starts_.begin(), starts_.end()), starts_.end());

    std::vector<std::pair<std::int32_t, std::uint32_t>> pairs(places.size());
    entry_offsets_.reserve(starts_.size() + 1);
    for (auto start : starts_) {
        entry_offsets_.push_back(static_cast<std::uint32_t>(entries_.size()));
        for (std::size_t i = 0; i < places.size(); ++i)
            pairs[i] = {rules.offset_seconds(places[i].place_id, start), static_cast<std::uint32_t>(i)};
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t i = 0; i < pairs.size();) {
            Entry e{pairs[i].first, static_cast<std::uint32_t>(places_.size()), 0};
            for (; i < pairs.size() && pairs[i].first == e.offset_seconds; ++i) places_.push_back(pairs[i].second);
            e.end = static_cast<std::uint32_t>(places_.size());
            entries_.push_back(e);
        }
    }
    entry_offsets_.push_back(static_cast<std::uint32_t>(entries_.size()));
}

std::vector<std::uint32_t> CompatibilityIndex::direct(std::int64_t utc, std::int32_t offset_minutes) const {
    return compatible_indices(utc, offset_minutes, *table_, *rules_);
}

std::span<const std::uint32_t> CompatibilityIndex::lookup(std::int64_t utc, std::int32_t offset_minutes) const {
    if (utc < window_begin_ || utc > window_end_) {
        scratch_ = direct(utc, offset_minutes);
        return scratch_;
    }
    auto seg = static_cast<std::size_t>(std::upper_bound(starts_.begin(), starts_.end(), utc) - starts_.begin()) - 1;
    const std::int32_t want = offset_minutes * 60;
    auto first = entries_.begin() + entry_offsets_[seg];
    auto last = entries_.begin() + entry_offsets_[seg + 1];
    auto it = std::lower_bound(first, last, want, [](const Entry& e, std::int32_t v) { return e.offset_seconds < v; });
    if (it == last || it->offset_seconds != want) return {};
    return std::span<const std::uint32_t>(places_).subspan(it->begin, it->end - it->begin);
}

// ------------------------------------------------------------- Geolocator

Geolocator::Geolocator(const RefData& refs)
    : refs_(&refs), index_(refs.places, refs.tz, kStudyWindowBegin, kStudyWindowEnd) {}

GeoResolution Geolocator::email(const CommitRecord& record) const { return geolocate_email(record, refs_->cctld); }

GeoResolution Geolocator::tzname(const CommitRecord& record, std::span<const std::string> tokens) const {
    auto compatible = index_.lookup(record.author_timestamp, record.utc_offset_minutes);
    auto entries = prefetch(tokens, *refs_);
    return resolve_scores(entries, compatible, refs_->places);
}

GeoResolution Geolocator::mixed(const CommitRecord& record, std::span<const std::string> tokens) const {
    if (record.utc_offset_minutes == 0) return email(record);
    return tzname(record, tokens);
}

GeoResolution Geolocator::resolve(GeoStrategy strategy, const CommitRecord& record,
                                  std::span<const std::string> tokens) const {
    switch (strategy) {
        case GeoStrategy::Email: return email(record);
        case GeoStrategy::TzName: return tzname(record, tokens);
        case GeoStrategy::Mixed: return mixed(record, tokens);
    }
    return {};
}

std::optional<double> tzz_share(std::span<const CommitRecord> records, int year) {
    std::uint64_t total = 0, zero = 0;
    for (const auto& r : records) {
        if (utc_year(r.author_timestamp) != year) continue;
        ++total;
        if (r.utc_offset_minutes == 0) ++zero;
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(zero) / static_cast<double>(total);
}

}  // namespace gendergap
