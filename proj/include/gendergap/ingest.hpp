#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gendergap {

/// Author-side metadata of one commit. Committer fields are never kept.
struct CommitRecord {
    std::string commit_id;      // 40 lowercase or uppercase hex digits
    std::string author_name;    // raw bytes on input, sanitized after ingest
    std::string author_email;   // raw bytes
    std::int64_t author_timestamp = 0;  // seconds since the Unix epoch, UTC
    std::int32_t utc_offset_minutes = 0;

    bool operator==(const CommitRecord&) const = default;
};

struct AuthorKey {
    std::string name;   // sanitized
    std::string email;  // lowercased

    auto operator<=>(const AuthorKey&) const = default;
    bool operator==(const AuthorKey&) const = default;
};

struct AuthorKeyHash {
    std::size_t operator()(const AuthorKey& k) const noexcept {
        auto h = std::hash<std::string>{}(k.name);
        return h ^ (std::hash<std::string>{}(k.email) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

AuthorKey make_author_key(const CommitRecord& sanitized);

// ---------------------------------------------------------------- names

/// Name filter rules, in the order they are checked. A rejected name is
/// attributed to the first rule it fails.
enum class NameRule : std::uint8_t { InvalidUtf8, EmailAddress, Blank, TooManyNonLetters, TooLong };

inline constexpr std::size_t kNameRuleCount = 5;
std::string_view name_rule_name(NameRule r);

inline constexpr std::size_t kMaxNameLength = 100;

struct NameCheck {
    std::optional<std::string> name;  // set iff accepted
    std::optional<NameRule> rejected_by;
};

NameCheck check_author_name(std::string_view raw);

inline std::optional<std::string> sanitize_author_name(std::string_view raw) {
    return check_author_name(raw).name;
}

/// Loose local@domain.tld detector used for rule (b).
bool looks_like_email(std::u32string_view text);

// ----------------------------------------------------------- timestamps

inline constexpr std::int64_t kStudyWindowBegin = 0;            // 1970-01-01T00:00:00Z
inline constexpr std::int64_t kStudyWindowEnd = 1609459199;     // 2020-12-31T23:59:59Z

constexpr bool in_study_window(std::int64_t ts) {
    return ts >= kStudyWindowBegin && ts <= kStudyWindowEnd;
}

/// UTC calendar year of an epoch timestamp.
int utc_year(std::int64_t ts);

// ---------------------------------------------------------------- stats

struct IngestStats {
    std::uint64_t records_read = 0;
    std::uint64_t records_kept = 0;
    std::uint64_t rejected_name = 0;
    std::uint64_t rejected_timestamp = 0;
    std::uint64_t rejected_malformed = 0;
    std::array<std::uint64_t, kNameRuleCount> rejected_name_by_rule{};

    IngestStats& operator+=(const IngestStats& other);
    bool operator==(const IngestStats&) const = default;

    bool conserved() const {
        return records_read == records_kept + rejected_name + rejected_timestamp + rejected_malformed;
    }
    nlohmann::ordered_json to_json() const;
};

// -------------------------------------------------------------- parsing

enum class InputFormat { Ndjson, Gitlog };

std::optional<InputFormat> parse_input_format(std::string_view s);

struct IngestOptions {
    InputFormat format = InputFormat::Ndjson;
    /// Malformed lines become fatal InputErrors naming the line number.
    bool strict = false;
    /// Treat a repeated commit id as malformed.
    bool reject_duplicate_ids = true;
};

/// Parses a single line without applying name/timestamp filters.
/// Returns nullopt for any structural problem.
std::optional<CommitRecord> parse_ndjson_line(std::string_view line);
std::optional<CommitRecord> parse_gitlog_line(std::string_view line);

bool is_valid_commit_id(std::string_view id);
bool is_valid_utc_offset(std::int64_t minutes);

/// Streams kept records from a commit-metadata stream in input order.
/// Kept records carry the sanitized author name.
class CommitStream {
public:
    CommitStream(std::istream& in, IngestOptions options);

    std::optional<CommitRecord> next();

    const IngestStats& stats() const { return stats_; }

private:
    std::istream& in_;
    IngestOptions options_;
    IngestStats stats_;
    std::uint64_t line_no_ = 0;
    std::string line_;
    std::unordered_set<std::string> seen_ids_;
};

struct ParsedCorpus {
    std::vector<CommitRecord> records;
    IngestStats stats;
};

ParsedCorpus parse_commit_stream(std::istream& in, IngestOptions options);

/// Distinct (name, lowercased email) pairs with their commit counts.
std::map<AuthorKey, std::uint64_t> dedupe_authors(std::span<const CommitRecord> records);

std::string to_ndjson(const CommitRecord& r);

}  // namespace gendergap
