#include <doctest.h>

#include <array>
#include <map>
#include <set>
#include <sstream>

#include "gendergap/corpus.hpp"
#include "gendergap/gender.hpp"
#include "support.hpp"

using namespace gendergap;

namespace {

CorpusOptions small(std::uint64_t seed = 7) {
    CorpusOptions o;
    o.commits = 4000;
    o.seed = seed;
    o.years = {2010, 2020};
    return o;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
    const auto& refs = testing::fixture_refs();
    const auto a = generate_corpus(refs, small());
    const auto b = generate_corpus(refs, small());
    const auto c = generate_corpus(refs, small(8));
    CHECK(a.lines == b.lines);
    CHECK(a.ledger.cells == b.ledger.cells);
    CHECK(a.lines != c.lines);
}

TEST_CASE("ingest sees exactly the planned rejections") {
    const auto& refs = testing::fixture_refs();
    for (auto format : {InputFormat::Ndjson, InputFormat::Gitlog}) {
        auto o = small();
        o.format = format;
        const auto corpus = generate_corpus(refs, o);
        std::string text;
        for (const auto& l : corpus.lines) text += l + "\n";
        std::istringstream in(text);
        const auto parsed = parse_commit_stream(in, IngestOptions{format, false, true});
        CHECK(parsed.stats.to_json() == corpus.ledger.expected_ingest.to_json());
        CHECK(parsed.records.size() == o.commits);
        std::set<std::string> ids;
        for (const auto& r : parsed.records) ids.insert(r.commit_id);
        CHECK(ids.size() == parsed.records.size());
    }
}

TEST_CASE("truth is consistent with the reference tables") {
    const auto& refs = testing::fixture_refs();
    const auto corpus = generate_corpus(refs, small());
    std::set<std::string> emails;
    for (const auto& a : corpus.authors) {
        CAPTURE(a.name);
        CHECK(emails.insert(a.email).second);
        CHECK(infer_author_gender(tokenize_name(a.name), refs.gender, MajorityVariant::Gendered) == a.gender);
        const auto idx = refs.places.index_of(a.place_id);
        REQUIRE(idx);
        CHECK(refs.places[*idx].region == a.region);
    }
}

TEST_CASE("every year and region is populated and the dip is embedded") {
    const auto& refs = testing::fixture_refs();
    const auto corpus = generate_corpus(refs, small());
    std::set<std::pair<int, int>> seen;
    for (const auto& c : corpus.ledger.cells)
        if (c.grouping == Grouping::ByRegion && c.commit_count > 0) seen.insert({c.group, c.year});
    CHECK(seen.size() == kRegionCount * 11);

    // At this scale some 2019 cells have no female share left to shrink; the
    // dip must land exactly in the regions where a strict drop is possible.
    std::map<std::pair<int, int>, std::array<std::uint64_t, 4>> fm;  // f commits, m commits, f authors, m authors
    for (const auto& c : corpus.ledger.cells) {
        if (c.grouping != Grouping::ByRegion || c.gender == AuthorGender::Unknown) continue;
        auto& v = fm[{c.group, c.year}];
        const std::size_t k = c.gender == AuthorGender::Female ? 0 : 1;
        v[k] += c.commit_count;
        v[k + 2] += c.author_count;
    }
    auto share = [](std::uint64_t f, std::uint64_t m) { return f + m ? double(f) / double(f + m) : -1.0; };
    const std::set<Region> dip(corpus.ledger.dip_regions.begin(), corpus.ledger.dip_regions.end());
    CHECK(dip.size() >= kRegionCount / 2);
    for (auto r : kAllRegions) {
        CAPTURE(region_name(r));
        const auto a = fm[{int(r), 2019}], b = fm[{int(r), 2020}];
        const bool droppable = share(a[0], a[1]) > 0 && share(a[2], a[3]) > 0;
        const bool dropped = share(b[0], b[1]) >= 0 && share(b[0], b[1]) < share(a[0], a[1]) &&
                             share(b[2], b[3]) >= 0 && share(b[2], b[3]) < share(a[2], a[3]);
        CHECK(dip.contains(r) == dropped);
        if (droppable) CHECK(dropped);
    }

    auto flat = small();
    flat.dip = false;
    CHECK(generate_corpus(refs, flat).ledger.dip_regions.empty());
}

TEST_CASE("formats share the same ledger") {
    const auto& refs = testing::fixture_refs();
    auto o = small();
    const auto nd = generate_corpus(refs, o);
    o.format = InputFormat::Gitlog;
    const auto gl = generate_corpus(refs, o);
    CHECK(nd.ledger.cells == gl.ledger.cells);
}

TEST_CASE("write_corpus files") {
    const auto& refs = testing::fixture_refs();
    const auto dir = testing::scratch_dir("corpus");
    const auto o = small();
    const auto corpus = generate_corpus(refs, o);
    write_corpus(dir, corpus, o);
    for (const char* f : {"corpus.ndjson", "ledger_cells.csv", "ledger.json", "truth.tsv"})
        CHECK(std::filesystem::exists(dir / f));
    const auto ledger = nlohmann::json::parse(testing::read_text(dir / "ledger.json"));
    CHECK(ledger["commits"] == 4000);
    CHECK(ledger["dip_regions"].size() == corpus.ledger.dip_regions.size());
}

TEST_CASE("bad options") {
    const auto& refs = testing::fixture_refs();
    auto o = small();
    o.years = {1960, 2020};
    CHECK_THROWS(generate_corpus(refs, o));
}
