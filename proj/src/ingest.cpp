#include "gendergap/ingest.hpp"

#include <charconv>
#include <chrono>

#include "gendergap/error.hpp"
#include "gendergap/unicode.hpp"

namespace gendergap {

namespace {

constexpr std::array<std::string_view, kNameRuleCount> kNameRuleNames = {
    "invalid_utf8", "email_address", "blank", "too_many_non_letters", "too_long"};

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

}  // namespace

std::string_view name_rule_name(NameRule r) { return kNameRuleNames[static_cast<std::size_t>(r)]; }

bool looks_like_email(std::u32string_view text) {
    for (std::size_t at = 0; at < text.size(); ++at) {
        if (text[at] != U'@') continue;
        if (at == 0 || unicode::is_blank(text[at - 1])) continue;
        std::size_t end = at + 1;
        while (end < text.size() && !unicode::is_blank(text[end])) ++end;
        auto domain = text.substr(at + 1, end - at - 1);
        auto dot = domain.find(U'.', 1);
        while (dot != std::u32string_view::npos) {
            if (dot + 1 < domain.size() && domain[dot + 1] != U'.' && domain[dot - 1] != U'.') return true;
            dot = domain.find(U'.', dot + 1);
        }
    }
    return false;
}

NameCheck check_author_name(std::string_view raw) {
    auto decoded = unicode::decode_utf8(raw);
    if (!decoded) return {std::nullopt, NameRule::InvalidUtf8};
    auto text = unicode::trim_blanks(*decoded);
    if (looks_like_email(text)) return {std::nullopt, NameRule::EmailAddress};

    std::size_t non_blank = 0;
    std::size_t non_letter = 0;
    for (char32_t cp : text) {
        if (unicode::is_blank(cp)) continue;
        ++non_blank;
        if (!unicode::is_letter(cp) && !unicode::is_hyphen(cp) && !unicode::is_apostrophe(cp)) ++non_letter;
    }
    if (non_blank == 0) return {std::nullopt, NameRule::Blank};
    // more than 10% of non-blank characters
    if (non_letter * 10 > non_blank) return {std::nullopt, NameRule::TooManyNonLetters};
    if (text.size() > kMaxNameLength) return {std::nullopt, NameRule::TooLong};
    return {unicode::encode_utf8(text), std::nullopt};
}

int utc_year(std::int64_t ts) {
    using namespace std::chrono;
    auto day = floor<days>(sys_seconds{seconds{ts}});
    return static_cast<int>(year_month_day{day}.year());
}

AuthorKey make_author_key(const CommitRecord& r) {
    return AuthorKey{r.author_name, unicode::to_lower(r.author_email)};
}

IngestStats& IngestStats::operator+=(const IngestStats& o) {
    records_read += o.records_read;
    records_kept += o.records_kept;
    rejected_name += o.rejected_name;
    rejected_timestamp += o.rejected_timestamp;
    rejected_malformed += o.rejected_malformed;
    for (std::size_t i = 0; i < kNameRuleCount; ++i) rejected_name_by_rule[i] += o.rejected_name_by_rule[i];
    return *this;
}

nlohmann::ordered_json IngestStats::to_json() const {
    nlohmann::ordered_json j;
    j["records_read"] = records_read;
    j["records_kept"] = records_kept;
    j["rejected_name"] = rejected_name;
    j["rejected_timestamp"] = rejected_timestamp;
    j["rejected_malformed"] = rejected_malformed;
    nlohmann::ordered_json rules;
    for (std::size_t i = 0; i < kNameRuleCount; ++i)
        rules[std::string(kNameRuleNames[i])] = rejected_name_by_rule[i];
    j["rejected_name_by_rule"] = std::move(rules);
    return j;
}

std::optional<InputFormat> parse_input_format(std::string_view s) {
    if (s == "ndjson") return InputFormat::Ndjson;
    if (s == "gitlog") return InputFormat::Gitlog;
    return std::nullopt;
}

bool is_valid_commit_id(std::string_view id) {
    if (id.size() != 40) return false;
    for (char c : id)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'))) return false;
    return true;
}

bool is_valid_utc_offset(std::int64_t minutes) {
    return minutes >= -1440 && minutes <= 1440 && minutes % 15 == 0;
}

std::optional<CommitRecord> parse_ndjson_line(std::string_view line) {
    auto j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;

    auto str = [&](const char* key) -> const std::string* {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) return nullptr;
        return it->get_ptr<const std::string*>();
    };
    auto integer = [&](const char* key) -> std::optional<std::int64_t> {
        auto it = j.find(key);
        if (it == j.end() || !(it->is_number_integer())) return std::nullopt;
        return it->get<std::int64_t>();
    };

    const auto* id = str("id");
    const auto* name = str("author_name");
    const auto* email = str("author_email");
    auto ts = integer("author_date_unix");
    auto offset = integer("author_tz_offset_min");
    if (!id || !name || !email || !ts || !offset) return std::nullopt;
    if (!is_valid_commit_id(*id) || !is_valid_utc_offset(*offset)) return std::nullopt;
    return CommitRecord{*id, *name, *email, *ts, static_cast<std::int32_t>(*offset)};
}

std::optional<CommitRecord> parse_gitlog_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::array<std::string_view, 5> fields;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (count < fields.size()) {
        auto nul = line.find('\0', pos);
        fields[count++] = line.substr(pos, nul == std::string_view::npos ? std::string_view::npos : nul - pos);
        if (nul == std::string_view::npos) break;
        pos = nul + 1;
    }
    // Trailing fields (e.g. committer data) are accepted and ignored.
    if (count < fields.size()) return std::nullopt;

    auto ts = parse_int<std::int64_t>(fields[3]);
    const auto tz = fields[4];
    if (!ts || tz.size() != 5 || (tz[0] != '+' && tz[0] != '-')) return std::nullopt;
    auto hh = parse_int<int>(tz.substr(1, 2));
    auto mm = parse_int<int>(tz.substr(3, 2));
    if (!hh || !mm || *mm >= 60) return std::nullopt;
    const std::int64_t offset = (tz[0] == '-' ? -1 : 1) * (*hh * 60 + *mm);
    if (!is_valid_commit_id(fields[0]) || !is_valid_utc_offset(offset)) return std::nullopt;
    return CommitRecord{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), *ts,
                        static_cast<std::int32_t>(offset)};
}

CommitStream::CommitStream(std::istream& in, IngestOptions options) : in_(in), options_(options) {}

std::optional<CommitRecord> CommitStream::next() {
    while (std::getline(in_, line_)) {
        ++line_no_;
        std::string_view view = line_;
        if (view.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        ++stats_.records_read;

        auto record = options_.format == InputFormat::Ndjson ? parse_ndjson_line(view) : parse_gitlog_line(view);
        if (record && options_.reject_duplicate_ids && !seen_ids_.insert(record->commit_id).second) {
            if (options_.strict)
                throw InputError("ingest", "line " + std::to_string(line_no_) + ": duplicate commit id " +
                                               record->commit_id);
            record.reset();
        }
        if (!record) {
            if (options_.strict)
                throw InputError("ingest", "line " + std::to_string(line_no_) + ": malformed commit record");
            ++stats_.rejected_malformed;
            continue;
        }

        auto check = check_author_name(record->author_name);
        if (!check.name) {
            ++stats_.rejected_name;
            ++stats_.rejected_name_by_rule[static_cast<std::size_t>(*check.rejected_by)];
            continue;
        }
        if (!in_study_window(record->author_timestamp)) {
            ++stats_.rejected_timestamp;
            continue;
        }
        record->author_name = std::move(*check.name);
        ++stats_.records_kept;
        return record;
    }
    if (in_.bad()) throw InputError("ingest", "read failure after line " + std::to_string(line_no_));
    return std::nullopt;
}

ParsedCorpus parse_commit_stream(std::istream& in, IngestOptions options) {
    CommitStream stream(in, options);
    ParsedCorpus out;
    while (auto r = stream.next()) out.records.push_back(std::move(*r));
    out.stats = stream.stats();
    return out;
}

std::map<AuthorKey, std::uint64_t> dedupe_authors(std::span<const CommitRecord> records) {
    std::map<AuthorKey, std::uint64_t> out;
    for (const auto& r : records) ++out[make_author_key(r)];
    return out;
}

std::string to_ndjson(const CommitRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.commit_id;
    j["author_name"] = r.author_name;
    j["author_email"] = r.author_email;
    j["author_date_unix"] = r.author_timestamp;
    j["author_tz_offset_min"] = r.utc_offset_minutes;
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace gendergap
