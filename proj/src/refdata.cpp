#include "gendergap/refdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "gendergap/error.hpp"
#include "gendergap/unicode.hpp"
#include "tsv.hpp"

namespace gendergap {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

}  // namespace

// ----------------------------------------------------------- GenderTable

void GenderTable::set(std::string_view name, GenderClass c) {
    auto [it, inserted] = table_.insert_or_assign(unicode::to_title(name), c);
    if (!inserted) ++duplicates_;
}

GenderClass GenderTable::lookup(std::string_view name) const {
    auto it = table_.find(unicode::to_title(name));
    return it == table_.end() ? GenderClass::Unknown : it->second;
}

GenderTable load_gender_table(const std::filesystem::path& path) {
    GenderTable table;
    static constexpr std::string_view kHeader[] = {"name", "class"};
    detail::for_each_tsv_row(path, kHeader, [&](std::size_t line, std::span<const std::string_view> f) {
        auto c = parse_gender_class(f[1]);
        if (!c) throw ConfigError("refdata", detail::where(path, line) + ": unknown gender class '" + std::string(f[1]) + "'");
        if (f[0].empty() || !unicode::is_valid_utf8(f[0]))
            throw ConfigError("refdata", detail::where(path, line) + ": invalid name");
        table.set(f[0], *c);
    });
    return table;
}

// ------------------------------------------------------------ PlaceTable

PlaceTable::PlaceTable(std::vector<Place> places) : places_(std::move(places)) {
    std::sort(places_.begin(), places_.end(), [](const Place& a, const Place& b) { return a.place_id < b.place_id; });
}

std::optional<std::size_t> PlaceTable::index_of(std::string_view place_id) const {
    auto it = std::lower_bound(places_.begin(), places_.end(), place_id,
                               [](const Place& p, std::string_view id) { return p.place_id < id; });
    if (it == places_.end() || it->place_id != place_id) return std::nullopt;
    return static_cast<std::size_t>(it - places_.begin());
}

std::vector<std::string> PlaceTable::ids() const {
    std::vector<std::string> out;
    out.reserve(places_.size());
    for (const auto& p : places_) out.push_back(p.place_id);
    return out;
}

PlaceTable load_places(const std::filesystem::path& path) {
    std::vector<Place> places;
    static constexpr std::string_view kHeader[] = {"place_id", "region", "population"};
    detail::for_each_tsv_row(path, kHeader, [&](std::size_t line, std::span<const std::string_view> f) {
        auto bad = [&](const std::string& what) { throw ConfigError("refdata", detail::where(path, line) + ": " + what); };
        auto region = parse_region(f[1]);
        if (!region) bad("unknown region '" + std::string(f[1]) + "'");
        std::uint64_t pop{};
        auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), pop);
        if (ec != std::errc{} || p != f[2].data() + f[2].size() || pop == 0) bad("population must be a positive integer");
        if (f[0].empty()) bad("empty place_id");
        places.push_back(Place{std::string(f[0]), *region, pop});
    });
    PlaceTable table(std::move(places));
    for (std::size_t i = 1; i < table.size(); ++i)
        if (table[i].place_id == table[i - 1].place_id)
            throw ConfigError("refdata", path.filename().string() + ": duplicate place " + table[i].place_id);
    return table;
}

// -------------------------------------------------------- IncidenceTable

void IncidenceTable::set(std::string_view name, std::uint32_t place, double incidence) {
    auto& list = table_[unicode::to_lower(name)];
    auto it = std::lower_bound(list.begin(), list.end(), place,
                               [](const PlaceIncidence& e, std::uint32_t p) { return e.place < p; });
    if (it != list.end() && it->place == place) {
        it->incidence = incidence;
        return;
    }
    list.insert(it, PlaceIncidence{place, incidence});
    ++rows_;
}

std::span<const PlaceIncidence> IncidenceTable::entries(std::string_view name) const {
    auto it = table_.find(unicode::to_lower(name));
    if (it == table_.end()) return {};
    return it->second;
}

std::vector<std::string> IncidenceTable::names() const {
    std::vector<std::string> out;
    out.reserve(table_.size());
    for (const auto& [name, _] : table_) out.push_back(name);
    std::sort(out.begin(), out.end());
    return out;
}

double IncidenceTable::incidence(std::string_view name, std::uint32_t place) const {
    auto list = entries(name);
    auto it = std::lower_bound(list.begin(), list.end(), place,
                               [](const PlaceIncidence& e, std::uint32_t p) { return e.place < p; });
    return (it != list.end() && it->place == place) ? it->incidence : 0.0;
}

IncidenceTable load_incidence_table(const std::filesystem::path& path, const PlaceTable& places) {
    IncidenceTable table;
    static constexpr std::string_view kHeader[] = {"name", "place_id", "incidence"};
    detail::for_each_tsv_row(path, kHeader, [&](std::size_t line, std::span<const std::string_view> f) {
        auto bad = [&](const std::string& what) { throw ConfigError("refdata", detail::where(path, line) + ": " + what); };
        if (f[0].empty() || !unicode::is_valid_utf8(f[0])) bad("invalid name");
        auto place = places.index_of(f[1]);
        if (!place) bad("place '" + std::string(f[1]) + "' not in places table");
        double v{};
        auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), v);
        if (ec != std::errc{} || p != f[2].data() + f[2].size()) bad("bad incidence '" + std::string(f[2]) + "'");
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) bad("incidence " + std::string(f[2]) + " outside [0,1]");
        table.set(f[0], static_cast<std::uint32_t>(*place), v);
    });
    return table;
}

std::pair<IncidenceTable, IncidenceTable> load_incidence_tables(const std::filesystem::path& forenames,
                                                                const std::filesystem::path& surnames,
                                                                const PlaceTable& places) {
    return {load_incidence_table(forenames, places), load_incidence_table(surnames, places)};
}

// -------------------------------------------------------------- CcTldMap

void CcTldMap::set(std::string_view tld, Region r) { table_[ascii_lower(tld)] = r; }

std::optional<Region> CcTldMap::lookup(std::string_view tld) const {
    auto it = table_.find(ascii_lower(tld));
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<std::string, Region>> CcTldMap::entries() const {
    std::vector<std::pair<std::string, Region>> out(table_.begin(), table_.end());
    std::sort(out.begin(), out.end());
    return out;
}

CcTldMap load_cctld_map(const std::filesystem::path& path) {
    CcTldMap map;
    static constexpr std::string_view kHeader[] = {"tld", "region"};
    detail::for_each_tsv_row(path, kHeader, [&](std::size_t line, std::span<const std::string_view> f) {
        auto bad = [&](const std::string& what) { throw ConfigError("refdata", detail::where(path, line) + ": " + what); };
        auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
        if (f[0].size() != 2 || !is_alpha(f[0][0]) || !is_alpha(f[0][1])) bad("ccTLD must be two Latin letters");
        auto region = parse_region(f[1]);
        if (!region) bad("unknown region '" + std::string(f[1]) + "'");
        map.set(f[0], *region);
    });
    return map;
}

// --------------------------------------------------------------- RefData

void check_refdata_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw ConfigError("refdata", "reference-data directory not found: " + dir.string());
    for (auto name : {kGenderFile, kPlacesFile, kForenamesFile, kSurnamesFile, kCcTldFile})
        if (!std::filesystem::is_regular_file(dir / name, ec))
            throw ConfigError("refdata", "missing " + std::string(name) + " in " + dir.string());
}

RefData load_refdata(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& tz_source) {
    check_refdata_dir(dir);
    RefData refs;
    refs.gender = load_gender_table(dir / kGenderFile);
    refs.places = load_places(dir / kPlacesFile);
    std::tie(refs.forenames, refs.surnames) =
        load_incidence_tables(dir / kForenamesFile, dir / kSurnamesFile, refs.places);
    refs.cctld = load_cctld_map(dir / kCcTldFile);
    auto ids = refs.places.ids();
    refs.tz = load_tz_rules(tz_source.value_or(dir / kTzRulesFile), ids);
    return refs;
}

}  // namespace gendergap
