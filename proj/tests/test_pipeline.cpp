#include <doctest.h>

#include "gendergap/corpus.hpp"
#include "gendergap/error.hpp"
#include "gendergap/pipeline.hpp"
#include "gendergap/report.hpp"
#include "support.hpp"

using namespace gendergap;

namespace {

PipelineConfig config_for(const std::filesystem::path& input, const std::filesystem::path& out) {
    PipelineConfig c;
    c.input = input;
    c.refdata_dir = testing::refdata_dir();
    c.out_dir = out;
    return c;
}

std::filesystem::path small_corpus(const std::string& name, std::uint64_t commits = 3000) {
    static std::map<std::string, std::filesystem::path> made;
    if (auto it = made.find(name); it != made.end()) return it->second;
    const auto dir = testing::scratch_dir(name);
    CorpusOptions o;
    o.commits = commits;
    o.years = {2012, 2020};
    write_corpus(dir, generate_corpus(testing::fixture_refs(), o), o);
    return made[name] = dir;
}

}  // namespace

TEST_CASE("pipeline reproduces the generator ledger") {
    const auto corpus = small_corpus("pipe-corpus");
    const auto out = testing::scratch_dir("pipe-out");
    auto result = run_pipeline(config_for(corpus / "corpus.ndjson", out));
    CHECK(testing::read_text(out / "cells.csv") == testing::read_text(corpus / "ledger_cells.csv"));
    CHECK(result.coverage["conservation"]["balanced"] == true);
    for (const char* f : {"cells.csv", "ratios.csv", "growth.csv", "coverage.json", "config.json",
                          "charts/offset_commits.svg", "charts/region_authors.svg"})
        CHECK(std::filesystem::exists(out / f));
    const auto cfg = nlohmann::json::parse(testing::read_text(out / "config.json"));
    CHECK(cfg["threshold"] == 5);
}

TEST_CASE("thread count does not change outputs") {
    const auto corpus = small_corpus("pipe-corpus");
    std::vector<std::string> docs;
    for (unsigned threads : {1u, 3u, 8u}) {
        const auto out = testing::scratch_dir("pipe-threads-" + std::to_string(threads));
        auto c = config_for(corpus / "corpus.ndjson", out);
        c.threads = threads;
        run_pipeline(c);
        docs.push_back(testing::read_text(out / "cells.csv") + testing::read_text(out / "coverage.json") +
                       testing::read_text(out / "charts/region_commits.svg"));
    }
    CHECK(docs[0] == docs[1]);
    CHECK(docs[0] == docs[2]);
}

TEST_CASE("empty corpus") {
    const auto dir = testing::scratch_dir("pipe-empty");
    testing::write_text(dir / "empty.ndjson", "");
    auto result = run_pipeline(config_for(dir / "empty.ndjson", dir / "out"));
    CHECK(result.cells.empty());
    CHECK(testing::read_text(dir / "out" / "cells.csv") == "year,grouping,group,gender,commit_count,author_count\n");
    CHECK(std::find(result.warnings.begin(), result.warnings.end(), "no cells: charts skipped") != result.warnings.end());
    CHECK_FALSE(std::filesystem::exists(dir / "out" / "charts"));
}

TEST_CASE("missing reference data leaves no partial output") {
    const auto corpus = small_corpus("pipe-corpus");
    const auto out = testing::scratch_dir("pipe-noref") / "out";
    auto c = config_for(corpus / "corpus.ndjson", out);
    c.refdata_dir = "/nonexistent";
    CHECK_THROWS_AS(run_pipeline(c), ConfigError);
    CHECK_FALSE(std::filesystem::exists(out));
    c = config_for(corpus / "missing.ndjson", out);
    CHECK_THROWS_AS(run_pipeline(c), InputError);
    CHECK_FALSE(std::filesystem::exists(out));
}

TEST_CASE("strict mode aborts on the first bad line") {
    const auto dir = testing::scratch_dir("pipe-strict");
    testing::write_text(dir / "in.ndjson", "{\"id\": 1}\n");
    auto c = config_for(dir / "in.ndjson", dir / "out");
    c.strict = true;
    CHECK_THROWS_WITH_AS(run_pipeline(c), doctest::Contains("line 1"), InputError);
    CHECK_FALSE(std::filesystem::exists(dir / "out"));
}

TEST_CASE("config validation") {
    const auto corpus = small_corpus("pipe-corpus");
    auto c = config_for(corpus / "corpus.ndjson", testing::scratch_dir("pipe-cfg") / "out");
    c.span = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.span = 0.75;
    c.by_offset = c.by_region = false;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.by_offset = true;
    c.years = {2020, 2010};
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("coverage diagnostics") {
    const auto corpus = small_corpus("pipe-corpus");
    const auto out = testing::scratch_dir("pipe-cov");
    auto c = config_for(corpus / "corpus.ndjson", out);
    c.strategy = GeoStrategy::Email;
    const auto result = run_pipeline(c);
    const auto& g = result.coverage["geolocation"];
    CHECK(g["strategy"] == "email");
    CHECK(g["resolved_by_method"]["tzname"] == 0);
    const auto ledger = nlohmann::json::parse(testing::read_text(corpus / "ledger.json"));
    for (const auto& [year, share] : ledger["tzz_share"].items())
        CHECK(result.coverage["tzz_share"][year].get<double>() == doctest::Approx(share.get<double>()).epsilon(1e-12));
}
