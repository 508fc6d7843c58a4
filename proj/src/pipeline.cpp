#include "gendergap/pipeline.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "gendergap/error.hpp"
#include "gendergap/report.hpp"

namespace gendergap {

namespace {

constexpr std::size_t kBatchSize = 16384;

std::string year_key(int y) { return std::to_string(y); }

struct Coverage {
    std::uint64_t kept = 0;
    std::array<std::uint64_t, 3> commits_by_gender{};
    std::array<std::uint64_t, 3> resolved_by_method{};
    std::uint64_t email_resolvable = 0;
    std::uint64_t tzname_resolvable = 0;
    std::uint64_t nonzero_offset = 0;
    std::uint64_t tzname_resolvable_nonzero = 0;
    std::uint64_t both_resolved = 0;
    std::uint64_t agreeing = 0;
    std::array<std::array<std::uint64_t, kRegionCount>, kRegionCount> agreement{};
    std::map<int, std::pair<std::uint64_t, std::uint64_t>> tzz;  // year → (offset-zero, total)

    void add(const CommitRecord& r, const CommitOutcome& o) {
        ++kept;
        ++commits_by_gender[static_cast<std::size_t>(o.commit.gender)];
        ++resolved_by_method[static_cast<std::size_t>(o.chosen.method)];
        if (o.email_region) ++email_resolvable;
        if (o.tzname_region) ++tzname_resolvable;
        if (r.utc_offset_minutes != 0) {
            ++nonzero_offset;
            if (o.tzname_region) ++tzname_resolvable_nonzero;
        }
        if (o.email_region && o.tzname_region) {
            ++both_resolved;
            if (*o.email_region == *o.tzname_region) ++agreeing;
            ++agreement[static_cast<std::size_t>(*o.email_region)][static_cast<std::size_t>(*o.tzname_region)];
        }
        auto& t = tzz[o.commit.year];
        if (r.utc_offset_minutes == 0) ++t.first;
        ++t.second;
    }
};

double share(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::ordered_json share_or_null(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return nullptr;
    return share(num, den);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw InputError("report", "cannot write " + path.string());
}

}  // namespace

// ---------------------------------------------------------------- config

void PipelineConfig::validate() const {
    std::error_code ec;
    if (input.empty()) throw ConfigError("report", "no input path given");
    if (!std::filesystem::is_regular_file(input, ec))
        throw InputError("ingest", "cannot read input " + input.string());
    check_refdata_dir(refdata_dir);
    if (tz_source && !std::filesystem::exists(*tz_source, ec))
        throw ConfigError("refdata", "tz source not found: " + tz_source->string());
    if (out_dir.empty()) throw ConfigError("report", "no output directory given");
    if (std::filesystem::exists(out_dir, ec) && !std::filesystem::is_directory(out_dir, ec))
        throw ConfigError("report", "output path exists and is not a directory: " + out_dir.string());
    if (author_threshold == 0) throw ConfigError("aggregate", "threshold must be at least 1");
    if (!(span > 0.0 && span <= 1.0)) throw ConfigError("aggregate", "span must be in (0, 1]");
    if (years.first > years.last) throw ConfigError("aggregate", "empty year range");
    if (!by_offset && !by_region) throw ConfigError("aggregate", "no grouping selected");
}

nlohmann::ordered_json PipelineConfig::to_json() const {
    nlohmann::ordered_json j;
    j["input"] = input.string();
    j["format"] = format == InputFormat::Ndjson ? "ndjson" : "gitlog";
    j["strict"] = strict;
    j["refdata"] = refdata_dir.string();
    j["tz_source"] = tz_source ? nlohmann::ordered_json(tz_source->string()) : nlohmann::ordered_json(nullptr);
    j["strategy"] = geo_strategy_name(strategy);
    j["threshold"] = author_threshold;
    j["threshold_scope"] = threshold_scope == ThresholdScope::PerGroup ? "group" : "year";
    j["years"] = std::to_string(years.first) + ":" + std::to_string(years.last);
    j["group"] = by_offset && by_region ? "both" : (by_offset ? "offset" : "region");
    j["majority"] = majority == MajorityVariant::Gendered ? "gendered" : "all";
    j["span"] = span;
    return j;
}

// -------------------------------------------------------- AuthorRegistry

std::uint32_t AuthorRegistry::intern(const CommitRecord& r) {
    auto key = make_author_key(r);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(infos_.size());
    AuthorInfo info;
    info.tokens = tokenize_name(key.name);
    info.gender = info.tokens.empty() ? AuthorGender::Unknown : infer_author_gender(info.tokens, *table_, variant_);
    infos_.push_back(std::move(info));
    ids_.emplace(std::move(key), id);
    return id;
}

// ------------------------------------------------------- BatchClassifier

BatchClassifier::BatchClassifier(const RefData& refs, GeoStrategy strategy, MajorityVariant variant, unsigned threads)
    : refs_(&refs), strategy_(strategy), geo_(refs), authors_(refs.gender, variant),
      threads_(threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads) {}

std::vector<CommitOutcome> BatchClassifier::classify(const std::vector<CommitRecord>& batch) {
    std::vector<CommitOutcome> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& r = batch[i];
        auto& c = out[i].commit;
        c.author = authors_.intern(r);
        c.year = utc_year(r.author_timestamp);
        c.offset_minutes = r.utc_offset_minutes;
        c.gender = authors_.info(c.author).gender;
    }

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& r = batch[i];
            auto& o = out[i];
            const auto& tokens = authors_.info(o.commit.author).tokens;
            auto email = geo_.email(r);
            auto tz = geo_.tzname(r, tokens);
            o.email_region = email.region;
            o.tzname_region = tz.region;
            switch (strategy_) {
                case GeoStrategy::Email: o.chosen = std::move(email); break;
                case GeoStrategy::TzName: o.chosen = std::move(tz); break;
                case GeoStrategy::Mixed: o.chosen = r.utc_offset_minutes == 0 ? std::move(email) : std::move(tz); break;
            }
            o.commit.region = o.chosen.region;
        }
    };

    const std::size_t n = batch.size();
    const std::size_t workers = std::min<std::size_t>(threads_, std::max<std::size_t>(1, n / 1024));
    if (workers <= 1) {
        work(0, n);
        return out;
    }
    std::vector<std::jthread> pool;
    const std::size_t per = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * per, e = std::min(n, b + per);
        if (b < e) pool.emplace_back(work, b, e);
    }
    return out;
}

// ---------------------------------------------------------- run_pipeline

std::vector<std::string> write_analysis(const std::filesystem::path& out_dir, std::span<const AggregateCell> cells,
                                        const std::map<int, double>& yearly_totals, YearRange years, double span) {
    std::vector<std::string> warnings;
    const auto series = ratio_series(cells, span);

    // Growth fit over the default window, clipped to years that have data.
    YearRange growth_range{std::max(1971, years.first), std::min(2019, years.last)};
    if (!yearly_totals.empty()) {
        growth_range.first = std::max(growth_range.first, yearly_totals.begin()->first);
        growth_range.last = std::min(growth_range.last, yearly_totals.rbegin()->first);
    }
    std::optional<GrowthFit> growth;
    if (growth_range.last > growth_range.first) {
        try {
            growth = exp_fit(yearly_totals, growth_range);
        } catch (const Error& e) {
            warnings.push_back(std::string("growth fit skipped: ") + e.what());
        }
    } else {
        warnings.push_back("growth fit skipped: fewer than two years with data");
    }

    std::filesystem::create_directories(out_dir);
    {
        std::ostringstream s;
        write_cells_csv(s, cells);
        write_file(out_dir / "cells.csv", s.str());
    }
    {
        std::ostringstream s;
        write_ratios_csv(s, series);
        write_file(out_dir / "ratios.csv", s.str());
    }
    {
        std::ostringstream s;
        write_growth_csv(s, growth, growth_range);
        write_file(out_dir / "growth.csv", s.str());
    }
    auto chart_warnings = write_charts(out_dir / "charts", cells, series);
    warnings.insert(warnings.end(), chart_warnings.begin(), chart_warnings.end());
    return warnings;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    const RefData refs = load_refdata(config.refdata_dir, config.tz_source);

    std::ifstream in(config.input, std::ios::binary);
    if (!in) throw InputError("ingest", "cannot open input " + config.input.string());

    AggregateOptions agg;
    agg.author_threshold = config.author_threshold;
    agg.scope = config.threshold_scope;
    agg.years = config.years;
    agg.by_offset = config.by_offset;
    agg.by_region = config.by_region;
    CellAccumulator acc(agg);

    BatchClassifier classifier(refs, config.strategy, config.majority, config.threads);
    Coverage cov;
    CommitStream stream(in, IngestOptions{config.format, config.strict, true});
    std::vector<CommitRecord> batch;
    batch.reserve(kBatchSize);
    auto flush = [&] {
        auto outcomes = classifier.classify(batch);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            cov.add(batch[i], outcomes[i]);
            acc.add(outcomes[i].commit);
        }
        batch.clear();
    };
    while (auto r = stream.next()) {
        batch.push_back(std::move(*r));
        if (batch.size() == kBatchSize) flush();
    }
    flush();

    PipelineResult result;
    result.ingest = stream.stats();
    result.cells = acc.cells();
    // Coverage and conservation diagnostics.
    const auto& st = result.ingest;
    const auto& authors = classifier.authors();
    std::array<std::uint64_t, 3> author_genders{};
    for (std::size_t i = 0; i < authors.size(); ++i)
        ++author_genders[static_cast<std::size_t>(authors.info(static_cast<std::uint32_t>(i)).gender)];

    nlohmann::ordered_json j;
    j["ingest"] = st.to_json();
    {
        auto& a = j["authors"];
        a["total"] = authors.size();
        for (auto g : kAllAuthorGenders) a[std::string(author_gender_name(g))] = author_genders[static_cast<std::size_t>(g)];
        a["detected_share"] = share(author_genders[0] + author_genders[1], authors.size());
    }
    {
        auto& c = j["commits"];
        c["kept"] = cov.kept;
        for (auto g : kAllAuthorGenders)
            c[std::string(author_gender_name(g))] = cov.commits_by_gender[static_cast<std::size_t>(g)];
        c["gender_detected_share"] = share(cov.commits_by_gender[0] + cov.commits_by_gender[1], cov.kept);
    }
    {
        auto& g = j["geolocation"];
        g["strategy"] = geo_strategy_name(config.strategy);
        for (auto m : {GeoMethod::Email, GeoMethod::TzName, GeoMethod::Unresolved})
            g["resolved_by_method"][std::string(geo_method_name(m))] = cov.resolved_by_method[static_cast<std::size_t>(m)];
        g["resolved_share"] = share(cov.kept - cov.resolved_by_method[2], cov.kept);
        g["technique_recall"]["email"] = share(cov.email_resolvable, cov.kept);
        g["technique_recall"]["tzname"] = share(cov.tzname_resolvable, cov.kept);
        g["technique_recall"]["tzname_nonzero_offset"] = share(cov.tzname_resolvable_nonzero, cov.nonzero_offset);
        auto& ag = g["agreement"];
        ag["both_resolved"] = cov.both_resolved;
        ag["agreeing"] = cov.agreeing;
        ag["agreement_share"] = share_or_null(cov.agreeing, cov.both_resolved);
        ag["matrix"] = nlohmann::ordered_json::object();
        for (auto er : kAllRegions)
            for (auto tr : kAllRegions)
                if (auto n = cov.agreement[static_cast<std::size_t>(er)][static_cast<std::size_t>(tr)])
                    ag["matrix"][std::string(region_name(er))][std::string(region_name(tr))] = n;
    }
    j["tzz_share"] = nlohmann::ordered_json::object();
    for (const auto& [y, t] : cov.tzz) j["tzz_share"][year_key(y)] = share(t.first, t.second);
    j["unresolved_region_by_year"] = nlohmann::ordered_json::object();
    for (const auto& [y, n] : acc.unresolved_by_year()) j["unresolved_region_by_year"][year_key(y)] = n;
    {
        std::uint64_t unresolved = 0;
        for (const auto& [_, n] : acc.unresolved_by_year()) unresolved += n;
        const std::uint64_t rejected = st.rejected_name + st.rejected_timestamp + st.rejected_malformed;
        auto& c = j["conservation"];
        c["records_read"] = st.records_read;
        c["rejected"] = rejected;
        c["outside_years"] = acc.commits_outside_years();
        c["aggregated"] = acc.commits_added();
        if (config.by_region) {
            c["aggregated_region_resolved"] = acc.commits_added() - unresolved;
            c["aggregated_region_unresolved"] = unresolved;
        }
        c["balanced"] = st.conserved() && st.records_read == rejected + acc.commits_outside_years() + acc.commits_added() &&
                        cov.kept == st.records_kept;
    }

    // Outputs: nothing touches the output directory before this point.
    std::map<int, double> totals;
    for (const auto& [y, n] : acc.totals_by_year()) totals[y] = static_cast<double>(n);
    auto written = write_analysis(config.out_dir, result.cells, totals, config.years, config.span);
    result.warnings.insert(result.warnings.end(), written.begin(), written.end());
    j["warnings"] = result.warnings;
    write_file(config.out_dir / "coverage.json", j.dump(2) + "\n");
    write_file(config.out_dir / "config.json", config.to_json().dump(2) + "\n");
    result.coverage = std::move(j);
    return result;
}

}  // namespace gendergap
