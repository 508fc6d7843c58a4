#include "gendergap/tz.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iterator>

#include "gendergap/error.hpp"
#include "tsv.hpp"

namespace gendergap {

namespace {

int year_of_days(std::int64_t days) {
    using namespace std::chrono;
    return static_cast<int>(year_month_day{sys_days{std::chrono::days{days}}}.year());
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned month_length(int y, int m) {
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return (m == 2 && is_leap(y)) ? 29 : kDays[m - 1];
}

class SpecReader {
public:
    explicit SpecReader(std::string_view s) : s_(s) {}

    bool done() const { return i_ >= s_.size(); }
    char peek() const { return done() ? '\0' : s_[i_]; }
    bool consume(char c) {
        if (peek() != c) return false;
        ++i_;
        return true;
    }

    bool name() {
        if (consume('<')) {
            auto close = s_.find('>', i_);
            if (close == std::string_view::npos || close - i_ < 3) return false;
            i_ = close + 1;
            return true;
        }
        std::size_t start = i_;
        while (!done() && std::isalpha(static_cast<unsigned char>(peek()))) ++i_;
        return i_ - start >= 3;
    }

    std::optional<int> number(int max_digits) {
        std::size_t start = i_;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek())) && i_ - start < std::size_t(max_digits)) ++i_;
        if (i_ == start) return std::nullopt;
        int v = 0;
        std::from_chars(s_.data() + start, s_.data() + i_, v);
        return v;
    }

    /// [+-]hh[:mm[:ss]] in seconds; hours up to 167 per RFC 8536.
    std::optional<std::int32_t> hms() {
        int sign = 1;
        if (consume('-')) sign = -1;
        else consume('+');
        auto h = number(3);
        if (!h || *h > 167) return std::nullopt;
        std::int32_t total = *h * 3600;
        if (consume(':')) {
            auto m = number(2);
            if (!m || *m > 59) return std::nullopt;
            total += *m * 60;
            if (consume(':')) {
                auto sec = number(2);
                if (!sec || *sec > 59) return std::nullopt;
                total += *sec;
            }
        }
        return sign * total;
    }

    std::optional<PosixTz::DateRule> date_rule() {
        PosixTz::DateRule r;
        if (consume('J')) {
            auto n = number(3);
            if (!n || *n < 1 || *n > 365) return std::nullopt;
            r.kind = PosixTz::DateRule::Kind::Julian1;
            r.day = *n;
        } else if (consume('M')) {
            auto m = number(2);
            if (!m || *m < 1 || *m > 12 || !consume('.')) return std::nullopt;
            auto w = number(1);
            if (!w || *w < 1 || *w > 5 || !consume('.')) return std::nullopt;
            auto d = number(1);
            if (!d || *d > 6) return std::nullopt;
            r.kind = PosixTz::DateRule::Kind::MonthWeekDay;
            r.month = *m, r.week = *w, r.day = *d;
        } else {
            auto n = number(3);
            if (!n || *n > 365) return std::nullopt;
            r.kind = PosixTz::DateRule::Kind::Julian0;
            r.day = *n;
        }
        if (consume('/')) {
            auto t = hms();
            if (!t) return std::nullopt;
            r.time = *t;
        }
        return r;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

template <typename T>
T read_be(const unsigned char* p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v = (v << 8) | p[i];
    return static_cast<T>(v);
}

}  // namespace

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
    using namespace std::chrono;
    return sys_days{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}}
        .time_since_epoch()
        .count();
}

// ------------------------------------------------------------ PosixTz

std::optional<PosixTz> PosixTz::parse(std::string_view spec) {
    SpecReader in(spec);
    PosixTz tz;
    if (!in.name()) return std::nullopt;
    auto std_off = in.hms();
    if (!std_off) return std::nullopt;
    tz.std_offset_ = -*std_off;
    if (in.done()) return tz;

    if (!in.name()) return std::nullopt;
    tz.has_dst_ = true;
    tz.dst_offset_ = tz.std_offset_ + 3600;
    if (!in.done() && in.peek() != ',') {
        auto dst_off = in.hms();
        if (!dst_off) return std::nullopt;
        tz.dst_offset_ = -*dst_off;
    }
    if (in.consume(',')) {
        auto start = in.date_rule();
        if (!start || !in.consume(',')) return std::nullopt;
        auto end = in.date_rule();
        if (!end) return std::nullopt;
        tz.start_ = *start;
        tz.end_ = *end;
    } else {
        tz.start_ = DateRule{DateRule::Kind::MonthWeekDay, 0, 2, 3, 7200};
        tz.end_ = DateRule{DateRule::Kind::MonthWeekDay, 0, 1, 11, 7200};
    }
    if (!in.done()) return std::nullopt;
    return tz;
}

std::int64_t PosixTz::transition_utc(int year, const DateRule& rule, std::int32_t offset_before) const {
    std::int64_t days = 0;
    switch (rule.kind) {
        case DateRule::Kind::Julian1:
            days = days_from_civil(year, 1, 1) + rule.day - 1 + ((is_leap(year) && rule.day >= 60) ? 1 : 0);
            break;
        case DateRule::Kind::Julian0:
            days = days_from_civil(year, 1, 1) + rule.day;
            break;
        case DateRule::Kind::MonthWeekDay: {
            const std::int64_t first = days_from_civil(year, rule.month, 1);
            const int first_wday = static_cast<int>(((first + 4) % 7 + 7) % 7);  // 1970-01-01 was a Thursday
            std::int64_t day = (rule.day - first_wday + 7) % 7 + 7 * (rule.week - 1);
            while (day >= month_length(year, rule.month)) day -= 7;
            days = first + day;
            break;
        }
    }
    return days * 86400 + rule.time - offset_before;
}

std::int32_t PosixTz::offset_at(std::int64_t utc) const {
    if (!has_dst_) return std_offset_;
    const int year = year_of_days(floor_div(utc + std_offset_, 86400));
    const auto start = transition_utc(year, start_, std_offset_);
    const auto end = transition_utc(year, end_, dst_offset_);
    bool dst;
    if (start < end) dst = utc >= start && utc < end;
    else dst = !(utc >= end && utc < start);
    return dst ? dst_offset_ : std_offset_;
}

// ---------------------------------------------------------- ZoneRules

ZoneRules::ZoneRules(std::int32_t initial_offset, std::vector<std::int64_t> transition_times,
                     std::vector<std::int32_t> offsets_after, std::optional<PosixTz> tail)
    : initial_(initial_offset), times_(std::move(transition_times)), offsets_(std::move(offsets_after)),
      tail_(std::move(tail)) {}

std::int32_t ZoneRules::offset_seconds(std::int64_t utc) const {
    if (times_.empty()) return tail_ ? tail_->offset_at(utc) : initial_;
    auto it = std::upper_bound(times_.begin(), times_.end(), utc);
    if (it == times_.begin()) return initial_;
    if (it == times_.end() && tail_) return tail_->offset_at(utc);
    return offsets_[static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1];
}

std::vector<std::int64_t> ZoneRules::transitions_between(std::int64_t from, std::int64_t to) const {
    std::vector<std::int64_t> out;
    for (auto t : times_)
        if (t >= from && t <= to) out.push_back(t);
    if (tail_ && tail_->has_dst()) {
        const std::int64_t after = times_.empty() ? from : std::max(from, times_.back() + 1);
        if (after <= to) {
            const int y0 = year_of_days(floor_div(after, 86400)) - 1;
            const int y1 = year_of_days(floor_div(to, 86400)) + 1;
            for (int y = y0; y <= y1; ++y) {
                // Probe the tail by bisection so that every offset change is
                // found regardless of rule shape.
                const std::int64_t lo_bound = days_from_civil(y, 1, 1) * 86400 - 86400;
                const std::int64_t hi_bound = days_from_civil(y + 1, 1, 1) * 86400 + 86400;
                std::int64_t prev = lo_bound;
                for (std::int64_t probe = lo_bound + 86400; probe <= hi_bound; probe += 86400) {
                    if (tail_->offset_at(probe) == tail_->offset_at(prev)) {
                        prev = probe;
                        continue;
                    }
                    std::int64_t lo = prev, hi = probe;  // offset(lo) != offset(hi)
                    const auto before = tail_->offset_at(lo);
                    while (hi - lo > 1) {
                        auto mid = lo + (hi - lo) / 2;
                        (tail_->offset_at(mid) == before ? lo : hi) = mid;
                    }
                    if (hi >= after && hi <= to) out.push_back(hi);
                    prev = probe;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --------------------------------------------------------------- TZif

std::optional<ZoneRules> parse_tzif(std::span<const unsigned char> bytes) {
    constexpr std::size_t kHeader = 44;
    auto header_ok = [&](std::size_t at) {
        return bytes.size() >= at + kHeader && bytes[at] == 'T' && bytes[at + 1] == 'Z' && bytes[at + 2] == 'i' &&
               bytes[at + 3] == 'f';
    };
    if (!header_ok(0)) return std::nullopt;

    struct Counts {
        std::uint32_t isut, isstd, leap, time, type, chars;
    };
    auto counts_at = [&](std::size_t at) {
        const auto* p = bytes.data() + at + 20;
        return Counts{read_be<std::uint32_t>(p), read_be<std::uint32_t>(p + 4), read_be<std::uint32_t>(p + 8),
                      read_be<std::uint32_t>(p + 12), read_be<std::uint32_t>(p + 16),
                      read_be<std::uint32_t>(p + 20)};
    };
    auto block_size = [](const Counts& c, std::size_t time_size) {
        return c.time * time_size + c.time + c.type * 6 + c.chars + c.leap * (time_size + 4) + c.isstd + c.isut;
    };

    const char version = static_cast<char>(bytes[4]);
    std::size_t at = 0;
    std::size_t time_size = 4;
    Counts c = counts_at(0);
    if (version >= '2') {
        at = kHeader + block_size(c, 4);
        if (!header_ok(at)) return std::nullopt;
        c = counts_at(at);
        time_size = 8;
    }
    if (c.type == 0) return std::nullopt;
    std::size_t p = at + kHeader;
    if (bytes.size() < p + block_size(c, time_size)) return std::nullopt;

    std::vector<std::int64_t> times(c.time);
    for (auto& t : times) {
        t = time_size == 8 ? read_be<std::int64_t>(bytes.data() + p)
                           : static_cast<std::int64_t>(read_be<std::int32_t>(bytes.data() + p));
        p += time_size;
    }
    std::vector<std::uint8_t> idx(bytes.begin() + static_cast<std::ptrdiff_t>(p),
                                  bytes.begin() + static_cast<std::ptrdiff_t>(p + c.time));
    p += c.time;
    std::vector<std::int32_t> utoff(c.type);
    for (auto& o : utoff) {
        o = read_be<std::int32_t>(bytes.data() + p);
        p += 6;
    }
    p += c.chars + c.leap * (time_size + 4) + c.isstd + c.isut;

    std::vector<std::int32_t> offsets;
    offsets.reserve(idx.size());
    for (auto i : idx) {
        if (i >= c.type) return std::nullopt;
        offsets.push_back(utoff[i]);
    }

    std::optional<PosixTz> tail;
    if (time_size == 8 && p < bytes.size() && bytes[p] == '\n') {
        auto end = std::find(bytes.begin() + static_cast<std::ptrdiff_t>(p + 1), bytes.end(), '\n');
        if (end == bytes.end()) return std::nullopt;
        std::string footer(bytes.begin() + static_cast<std::ptrdiff_t>(p + 1), end);
        if (!footer.empty()) {
            tail = PosixTz::parse(footer);
            if (!tail) return std::nullopt;
        }
    }
    return ZoneRules(utoff[0], std::move(times), std::move(offsets), std::move(tail));
}

// ---------------------------------------------------------- TzRuleSet

void TzRuleSet::add(std::string place_id, ZoneRules rules) { zones_[std::move(place_id)] = std::move(rules); }

bool TzRuleSet::contains(std::string_view place_id) const { return zones_.find(place_id) != zones_.end(); }

const ZoneRules& TzRuleSet::rules(std::string_view place_id) const {
    auto it = zones_.find(place_id);
    if (it == zones_.end()) throw ConfigError("refdata", "no tz rules for place " + std::string(place_id));
    return it->second;
}

std::int32_t TzRuleSet::offset_seconds(std::string_view place_id, std::int64_t utc) const {
    return rules(place_id).offset_seconds(utc);
}

std::int32_t TzRuleSet::offset_minutes(std::string_view place_id, std::int64_t utc) const {
    return static_cast<std::int32_t>(floor_div(offset_seconds(place_id, utc), 60));
}

std::vector<std::string> TzRuleSet::place_ids() const {
    std::vector<std::string> out;
    out.reserve(zones_.size());
    for (const auto& [id, _] : zones_) out.push_back(id);
    return out;
}

TzRuleSet load_tz_rules_table(const std::filesystem::path& path) {
    struct Pending {
        std::optional<std::int32_t> initial;
        std::vector<std::int64_t> times;
        std::vector<std::int32_t> offsets;
    };
    std::map<std::string, Pending, std::less<>> pending;
    static constexpr std::string_view kHeader[] = {"place_id", "utc_start", "offset_seconds"};

    detail::for_each_tsv_row(path, kHeader, [&](std::size_t line, std::span<const std::string_view> f) {
        auto bad = [&](const std::string& what) { throw ConfigError("refdata", detail::where(path, line) + ": " + what); };
        std::int32_t offset{};
        auto [po, eo] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), offset);
        if (eo != std::errc{} || po != f[2].data() + f[2].size()) bad("bad offset '" + std::string(f[2]) + "'");
        if (offset < -86400 || offset > 86400) bad("offset out of range");
        auto& zone = pending[std::string(f[0])];
        if (f[1] == "-") {
            if (zone.initial) bad("duplicate initial row for " + std::string(f[0]));
            zone.initial = offset;
            return;
        }
        std::int64_t t{};
        auto [pt, et] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), t);
        if (et != std::errc{} || pt != f[1].data() + f[1].size()) bad("bad utc_start '" + std::string(f[1]) + "'");
        if (!zone.initial) bad("transition before initial row for " + std::string(f[0]));
        if (!zone.times.empty() && t <= zone.times.back()) bad("transitions out of order for " + std::string(f[0]));
        zone.times.push_back(t);
        zone.offsets.push_back(offset);
    });

    TzRuleSet out;
    for (auto& [id, z] : pending) out.add(id, ZoneRules(*z.initial, std::move(z.times), std::move(z.offsets)));
    return out;
}

TzRuleSet load_tz_rules_zoneinfo(const std::filesystem::path& root, std::span<const std::string> place_ids) {
    TzRuleSet out;
    for (const auto& id : place_ids) {
        auto path = root / id;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("refdata", "no zoneinfo file for " + id + " under " + root.string());
        std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto rules = parse_tzif(bytes);
        if (!rules) throw ConfigError("refdata", "malformed zoneinfo file " + path.string());
        out.add(id, std::move(*rules));
    }
    return out;
}

TzRuleSet load_tz_rules(const std::filesystem::path& source, std::span<const std::string> place_ids) {
    std::error_code ec;
    TzRuleSet rules = std::filesystem::is_directory(source, ec) ? load_tz_rules_zoneinfo(source, place_ids)
                                                                : load_tz_rules_table(source);
    TzRuleSet out;
    for (const auto& id : place_ids) {
        if (!rules.contains(id)) throw ConfigError("refdata", "tz rules missing for place " + id);
        out.add(id, rules.rules(id));
    }
    return out;
}

}  // namespace gendergap
