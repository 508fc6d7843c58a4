// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "argmax_instances.hpp"
#include "gendergap/corpus.hpp"
#include "gendergap/gender.hpp"
#include "gendergap/geo.hpp"
#include "gendergap/pipeline.hpp"
#include "gendergap/report.hpp"
#include "name_fixture.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gendergap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs >= limit_s) {
        o.ok = false;
        o.detail = "took longer than " + std::to_string(limit_s) + " s";
    }
    if (!o.ok) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << name << "  (" << timing << ")";
    if (!o.detail.empty()) std::cout << "  " << o.detail;
    std::cout << std::endl;
}

/// Every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = testing::read_text(e.path());
    return files;
}

PipelineConfig pipeline_config(const fs::path& input, const fs::path& out) {
    PipelineConfig c;
    c.input = input;
    c.refdata_dir = testing::refdata_dir();
    c.out_dir = out;
    return c;
}

}  // namespace

int main() {
    const auto& refs = testing::fixture_refs();
    using testing::utc;

    criterion("tz worked example: +240 sets at 2012-01, 2012-08, 2016-08", 1.0, [&](Outcome& o) {
        using S = std::vector<std::string>;
        const S jan2012{"Asia/Baku",    "Asia/Dubai",    "Asia/Muscat",   "Asia/Tbilisi",
                        "Asia/Yerevan", "Europe/Moscow", "Europe/Samara", "Indian/Mauritius"};
        S aug2012 = jan2012;
        std::erase(aug2012, "Asia/Baku");
        S aug2016 = jan2012;
        std::erase(aug2016, "Europe/Moscow");  // Baku is back: Azerbaijan stopped DST in 2016
        const auto a = compatible_places(utc(2012, 1, 1, 8), 240, refs.tz);
        const auto b = compatible_places(utc(2012, 8, 1, 8), 240, refs.tz);
        const auto c = compatible_places(utc(2016, 8, 1, 8), 240, refs.tz);
        o.require(a == jan2012 && a.size() == 8, "2012-01-01T08Z set differs");
        o.require(b == aug2012 && b.size() == 7, "2012-08-01T08Z set differs");
        o.require(c == aug2016 && std::find(c.begin(), c.end(), "Europe/Moscow") == c.end(),
                  "2016-08-01T08Z set differs");
    });

    criterion("majority oracle over token-class multisets, both denominators", 1.0, [&](Outcome& o) {
        std::size_t checked = 0, size_six = 0;
        std::vector<GenderClass> cur;
        std::function<void(std::size_t)> walk = [&](std::size_t start) {
            if (!cur.empty()) {
                int m = 0, f = 0, other = 0;
                for (auto c : cur) {
                    if (c == GenderClass::Male || c == GenderClass::MostlyMale) ++m;
                    else if (c == GenderClass::Female || c == GenderClass::MostlyFemale) ++f;
                    else ++other;
                }
                for (bool all : {false, true}) {
                    const int rest = all ? other : 0;
                    const auto want = m > f + rest ? AuthorGender::Male
                                      : f > m + rest ? AuthorGender::Female
                                                     : AuthorGender::Unknown;
                    const auto got =
                        infer_author_gender(cur, all ? MajorityVariant::AllTokens : MajorityVariant::Gendered);
                    o.require(got == want, "mismatch on a multiset of size " + std::to_string(cur.size()));
                }
                ++checked;
                size_six += cur.size() == 6;
            }
            if (cur.size() == 6) return;
            for (std::size_t k = start; k < kAllGenderClasses.size(); ++k) {
                cur.push_back(kAllGenderClasses[k]);
                walk(k);
                cur.pop_back();
            }
        };
        walk(0);
        o.require(size_six == 462, "expected 462 six-token multisets");
        o.require(checked == 923, "expected 923 multisets of 1..6 tokens");
        o.detail = o.ok ? std::to_string(checked) + " multisets x 2 variants" : o.detail;
    });

    criterion("30-name sanitization fixture: per-rule rejection counts", 60.0, [&](Outcome& o) {
        const auto fixture = testing::name_fixture();
        o.require(fixture.size() == 30, "fixture must hold 30 names");
        std::array<std::uint64_t, kNameRuleCount> expected{};
        std::uint64_t accepted = 0;
        for (const auto& c : fixture) c.expected ? ++expected[static_cast<std::size_t>(*c.expected)] : ++accepted;
        // gitlog keeps raw bytes, so every rule is reachable from a stream
        std::string text;
        int i = 0;
        for (const auto& c : fixture) {
            char id[41];
            std::snprintf(id, sizeof id, "%040x", ++i);
            text += std::string(id) + '\0' + c.raw + '\0' + "x@example.org" + '\0' + "1300000000" + '\0' + "+0100\n";
        }
        std::istringstream in(text);
        const auto parsed = parse_commit_stream(in, IngestOptions{InputFormat::Gitlog, false, true});
        o.require(parsed.stats.rejected_name_by_rule == expected, "per-rule counts differ");
        o.require(parsed.stats.records_kept == accepted, "accepted count differs");
        o.require(parsed.stats.rejected_name == 30 - accepted, "rejected total differs");
        std::ostringstream d;
        for (std::size_t r = 0; r < kNameRuleCount; ++r)
            d << name_rule_name(static_cast<NameRule>(r)) << '=' << parsed.stats.rejected_name_by_rule[r] << ' ';
        d << "kept=" << parsed.stats.records_kept;
        if (o.ok) o.detail = d.str();
    });

    const auto work = testing::scratch_dir("acceptance");

    criterion("synthetic end-to-end: 50k commits, ledger-exact cells and ratios, dip in every region", 60.0,
              [&](Outcome& o) {
        CorpusOptions opts;
        opts.commits = 50000;
        opts.years = {2000, 2020};
        const auto corpus = generate_corpus(refs, opts);
        write_corpus(work / "e2e", corpus, opts);

        std::set<int> regions, years;
        std::uint64_t total = 0;
        for (const auto& c : corpus.ledger.cells)
            if (c.grouping == Grouping::ByOffset) total += c.commit_count, years.insert(c.year);
        for (const auto& c : corpus.ledger.cells)
            if (c.grouping == Grouping::ByRegion && c.commit_count > 0) regions.insert(c.group);
        o.require(total == 50000, "corpus does not hold 50k kept commits");
        o.require(regions.size() == 12 && years.size() == 21, "corpus does not span 12 regions x 21 years");
        o.require(corpus.ledger.dip_regions.size() == 12, "dip not embedded in every region");

        const auto result = run_pipeline(pipeline_config(work / "e2e" / corpus_file_name(opts.format), work / "e2e-out"));
        o.require(result.cells == corpus.ledger.cells, "pipeline cells differ from the ledger");
        o.require(testing::read_text(work / "e2e-out" / "cells.csv") ==
                      testing::read_text(work / "e2e" / "ledger_cells.csv"),
                  "cells.csv differs from ledger_cells.csv");

        // Ledger ratios recomputed here from the ledger cells alone.
        std::map<std::pair<int, int>, std::array<std::uint64_t, 4>> fm;
        for (const auto& c : corpus.ledger.cells) {
            if (c.grouping != Grouping::ByRegion) continue;
            auto& t = fm[{c.group, c.year}];
            if (c.gender == AuthorGender::Female) t[0] += c.commit_count, t[2] += c.author_count;
            if (c.gender == AuthorGender::Male) t[1] += c.commit_count, t[3] += c.author_count;
        }
        const auto series = ratio_series(result.cells);
        std::size_t compared = 0;
        for (const auto& [key, t] : fm) {
            for (auto [metric, f, m] : {std::tuple{Metric::Commits, t[0], t[1]}, std::tuple{Metric::Authors, t[2], t[3]}}) {
                const auto got = series.at(SeriesKey{Grouping::ByRegion, key.first, metric}).ratio_at(key.second);
                const std::optional<double> want =
                    f + m == 0 ? std::nullopt : std::optional<double>(double(f) / double(f + m));
                o.require(got == want, "ratio differs for " + group_label(Grouping::ByRegion, key.first) + " " +
                                           std::to_string(key.second));
                ++compared;
            }
        }
        int negative = 0;
        for (auto r : corpus.ledger.dip_regions)
            for (auto metric : {Metric::Commits, Metric::Authors}) {
                const auto d = ratio_delta(series.at(SeriesKey{Grouping::ByRegion, static_cast<int>(r), metric}), 2019, 2020);
                o.require(d && *d < 0.0, "no 2019->2020 drop in " + std::string(region_name(r)));
                negative += d && *d < 0.0;
            }
        if (o.ok)
            o.detail = std::to_string(result.cells.size()) + " cells, " + std::to_string(compared) + " ratios, " +
                       std::to_string(negative) + "/24 negative deltas";
    });

    criterion("loess: constant and linear exact, 11-point noisy series vs WLS oracle (1e-9)", 60.0, [&](Outcome& o) {
        std::vector<double> x, c, lin;
        for (int i = 0; i < 11; ++i) {
            x.push_back(2010 + i);
            c.push_back(0.07);
            lin.push_back(2.0 * (2010 + i) + 1.0);
        }
        double worst = 0.0;
        for (double v : loess_smooth(x, c, 0.75)) worst = std::max(worst, std::fabs(v - 0.07));
        const auto fl = loess_smooth(x, lin, 1.0);
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::fabs(fl[i] - lin[i]));
        o.require(worst < 1e-9, "exact cases off by " + std::to_string(worst));

        std::mt19937_64 rng(2020);
        std::normal_distribution<double> noise(0.0, 0.01);
        std::vector<double> y;
        for (double xi : x) y.push_back(0.05 + 0.003 * (xi - 2010) + noise(rng));
        double dev = 0.0;
        for (double span : {0.5, 0.75, 1.0}) {
            const auto got = loess_smooth(x, y, span);
            const auto want = testing::wls_loess_oracle(x, y, span);
            for (std::size_t i = 0; i < x.size(); ++i) dev = std::max(dev, std::fabs(got[i] - want[i]));
        }
        o.require(dev < 1e-9, "noisy series deviates by " + std::to_string(dev));
        if (o.ok) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "max deviation %.2e", std::max(worst, dev));
            o.detail = buf;
        }
    });

    criterion("exp_fit recovers a=100, b=0.3 (1e-6); b invariant under scaling (1e-9)", 60.0, [&](Outcome& o) {
        std::map<int, double> counts;
        for (int y = 1971; y <= 2019; ++y) counts[y] = 100.0 * std::exp(0.3 * (y - 1970));
        const auto fit = exp_fit(counts);
        o.require(std::fabs(fit.a - 100.0) < 1e-6 && std::fabs(fit.b - 0.3) < 1e-6, "exact model not recovered");
        std::mt19937_64 rng(5);
        std::map<int, double> noisy;
        for (int y = 1971; y <= 2019; ++y) noisy[y] = counts[y] * (0.8 + 0.4 * double(rng() % 10000) / 10000.0);
        const auto base = exp_fit(noisy);
        for (double k : {0.01, 0.5, 7.0, 1e6}) {
            std::map<int, double> scaled;
            for (const auto& [y, v] : noisy) scaled[y] = v * k;
            o.require(std::fabs(exp_fit(scaled).b - base.b) < 1e-9, "b moved under scaling by " + std::to_string(k));
        }
    });

    criterion("argmax invariance: 1000 instances x c in {0.5, 2, 10}, zero violations", 60.0, [&](Outcome& o) {
        std::size_t ties = 0, zeros = 0;
        const auto v = testing::argmax_violations(1000, {0.5, 2.0, 10.0}, 20201231, &ties, &zeros);
        o.require(v == 0, std::to_string(v) + " violations");
        if (o.ok)
            o.detail = "0 violations (" + std::to_string(ties) + " tie and " + std::to_string(zeros) +
                       " zero-score instances)";
    });

    criterion("determinism: two pipeline runs give byte-identical CSV, SVG and JSON", 60.0, [&](Outcome& o) {
        const auto input = work / "e2e" / "corpus.ndjson";
        if (!fs::exists(input)) {
            CorpusOptions opts;
            write_corpus(work / "e2e", generate_corpus(refs, opts), opts);
        }
        run_pipeline(pipeline_config(input, work / "det-a"));
        auto second = pipeline_config(input, work / "det-b");
        second.threads = 3;
        run_pipeline(second);
        const auto a = snapshot(work / "det-a"), b = snapshot(work / "det-b");
        o.require(a == b, "outputs differ");
        std::size_t svg = 0;
        for (const auto& [name, _] : a) svg += name.ends_with(".svg");
        o.require(a.count("cells.csv") && a.count("ratios.csv") && a.count("growth.csv") && a.count("coverage.json") &&
                      svg == 4,
                  "expected artifacts missing");
        if (o.ok) o.detail = std::to_string(a.size()) + " files identical";
    });

    {
        // The 1M-commit corpus is generated outside the timed section.
        CorpusOptions big;
        big.commits = 1'000'000;
        big.years = {1970, 2020};
        big.noise_fraction = 0.0;
        const auto t0 = std::chrono::steady_clock::now();
        write_corpus(work / "big", generate_corpus(refs, big), big);
        const double gen = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        criterion("1M synthetic NDJSON commits through the full pipeline", 60.0, [&](Outcome& o) {
            const auto result = run_pipeline(pipeline_config(work / "big" / "corpus.ndjson", work / "big-out"));
            o.require(result.ingest.records_kept == 1'000'000, "not all commits kept");
            o.require(result.coverage["conservation"]["balanced"] == true, "conservation broken");
            char buf[64];
            std::snprintf(buf, sizeof buf, "generation took %.1f s, untimed", gen);
            if (o.ok) o.detail = buf;
        });
    }

    fs::remove_all(work.parent_path());
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
