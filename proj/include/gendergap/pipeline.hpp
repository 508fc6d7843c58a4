#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "gendergap/aggregate.hpp"
#include "gendergap/gender.hpp"
#include "gendergap/geo.hpp"
#include "gendergap/ingest.hpp"
#include "gendergap/refdata.hpp"

namespace gendergap {

struct PipelineConfig {
    std::filesystem::path input;
    InputFormat format = InputFormat::Ndjson;
    bool strict = false;
    std::filesystem::path refdata_dir;
    std::optional<std::filesystem::path> tz_source;  // zoneinfo root or extracted table
    GeoStrategy strategy = GeoStrategy::Mixed;
    std::uint32_t author_threshold = 5;
    ThresholdScope threshold_scope = ThresholdScope::PerGroup;
    YearRange years{1970, 2020};
    bool by_offset = true;
    bool by_region = true;
    MajorityVariant majority = MajorityVariant::Gendered;
    double span = 0.75;
    std::filesystem::path out_dir;
    unsigned threads = 0;  // 0 = hardware concurrency

    /// Throws ConfigError (bad settings, refdata) or InputError (input path).
    void validate() const;
    nlohmann::ordered_json to_json() const;
};

struct AuthorInfo {
    NameTokens tokens;
    AuthorGender gender = AuthorGender::Unknown;
};

/// Interns (name, email) identities and caches their gender inference.
class AuthorRegistry {
public:
    AuthorRegistry(const GenderTable& table, MajorityVariant variant) : table_(&table), variant_(variant) {}

    std::uint32_t intern(const CommitRecord& sanitized);
    const AuthorInfo& info(std::uint32_t id) const { return infos_[id]; }
    std::size_t size() const { return infos_.size(); }

private:
    const GenderTable* table_;
    MajorityVariant variant_;
    std::unordered_map<AuthorKey, std::uint32_t, AuthorKeyHash> ids_;
    std::vector<AuthorInfo> infos_;
};

/// Per-commit outcome of the classify + geolocate stages.
struct CommitOutcome {
    ClassifiedCommit commit;
    GeoResolution chosen;
    std::optional<Region> email_region;
    std::optional<Region> tzname_region;
};

/// Runs gender inference and geolocation over batches of sanitized
/// records. Batch results are in input order whatever the thread count.
class BatchClassifier {
public:
    BatchClassifier(const RefData& refs, GeoStrategy strategy, MajorityVariant variant, unsigned threads);

    std::vector<CommitOutcome> classify(const std::vector<CommitRecord>& batch);

    const AuthorRegistry& authors() const { return authors_; }

private:
    const RefData* refs_;
    GeoStrategy strategy_;
    Geolocator geo_;
    AuthorRegistry authors_;
    unsigned threads_;
};

struct PipelineResult {
    IngestStats ingest;
    std::vector<AggregateCell> cells;
    nlohmann::ordered_json coverage;
    std::vector<std::string> warnings;
};

/// Writes cells.csv, ratios.csv, growth.csv and charts/*.svg. The growth fit
/// runs over 1971–2019 clipped to `years` and to the years present in
/// `yearly_totals`. Returns warnings.
std::vector<std::string> write_analysis(const std::filesystem::path& out_dir, std::span<const AggregateCell> cells,
                                        const std::map<int, double>& yearly_totals, YearRange years, double span);

/// parse → sanitize → classify → geolocate → aggregate → report. Writes
/// cells.csv, ratios.csv, growth.csv, coverage.json, config.json and
/// charts/*.svg into config.out_dir. Nothing is written if validation or
/// reference-data loading fails.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace gendergap
