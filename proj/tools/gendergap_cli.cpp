// gendergap: command-line front end.
//
// Stage commands read a commit stream and write NDJSON (to --out DIR or
// stdout); `aggregate`, `report` and `pipeline` write CSV/SVG/JSON
// artifacts into --out. Exit codes: 0 ok, 1 input error, 2 config error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "gendergap/aggregate.hpp"
#include "gendergap/corpus.hpp"
#include "gendergap/error.hpp"
#include "gendergap/gender.hpp"
#include "gendergap/geo.hpp"
#include "gendergap/ingest.hpp"
#include "gendergap/pipeline.hpp"
#include "gendergap/refdata.hpp"
#include "gendergap/report.hpp"

namespace fs = std::filesystem;
using namespace gendergap;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string input;
    std::string format = "ndjson";
    std::string refdata;
    std::string tz_source;
    std::string strategy = "mixed";
    std::uint32_t threshold = 5;
    std::string threshold_scope = "group";
    std::string years = "1970:2020";
    std::string group = "both";
    std::string majority = "gendered";
    double span = 0.75;
    std::string out;
    bool strict = false;
    unsigned threads = 0;
    // gen-corpus
    std::uint64_t commits = 50000;
    std::uint64_t seed = CorpusOptions{}.seed;
    double noise = CorpusOptions{}.noise_fraction;
    bool no_dip = false;
};

template <typename T, typename F>
T parse_or_config(const std::string& text, const char* what, F parse) {
    auto v = parse(text);
    if (!v) throw ConfigError("cli", std::string("invalid ") + what + ": " + text);
    return *v;
}

YearRange years_of(const Options& o) { return parse_or_config<YearRange>(o.years, "--years", parse_year_range); }

IngestOptions ingest_options(const Options& o) {
    return IngestOptions{parse_or_config<InputFormat>(o.format, "--format", parse_input_format), o.strict, true};
}

std::optional<fs::path> tz_source(const Options& o) {
    if (o.tz_source.empty()) return std::nullopt;
    return fs::path(o.tz_source);
}

RefData refdata_of(const Options& o) {
    if (o.refdata.empty()) throw ConfigError("refdata", "--refdata is required");
    check_refdata_dir(o.refdata);
    return load_refdata(o.refdata, tz_source(o));
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("ingest", "cannot open input " + path);
    return in;
}

/// NDJSON sink: `<out>/<name>` when --out is given, stdout otherwise.
class Sink {
public:
    Sink(const Options& o, const std::string& name) {
        if (o.out.empty()) return;
        fs::create_directories(o.out);
        file_ = std::make_unique<std::ofstream>(fs::path(o.out) / name, std::ios::binary);
        if (!*file_) throw InputError("cli", "cannot write " + (fs::path(o.out) / name).string());
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit_stats(const Options& o, const IngestStats& stats) {
    const auto text = stats.to_json().dump(2) + "\n";
    if (o.out.empty()) {
        std::cerr << text;
        return;
    }
    std::ofstream(fs::path(o.out) / "ingest.json", std::ios::binary) << text;
}

json record_json(const CommitRecord& r) { return json::parse(to_ndjson(r)); }

json tokens_json(const NameTokens& tokens) {
    json a = json::array();
    for (const auto& t : tokens) a.push_back(t);
    return a;
}

int cmd_ingest(const Options& o) {
    auto in = open_input(o.input);
    CommitStream stream(in, ingest_options(o));
    Sink sink(o, "records.ndjson");
    while (auto r = stream.next()) sink.stream() << to_ndjson(*r) << '\n';
    emit_stats(o, stream.stats());
    return 0;
}

int cmd_classify(const Options& o) {
    const auto refs = refdata_of(o);
    const auto variant = parse_or_config<MajorityVariant>(o.majority, "--majority", parse_majority_variant);
    auto in = open_input(o.input);
    CommitStream stream(in, ingest_options(o));
    Sink sink(o, "classified.ndjson");
    while (auto r = stream.next()) {
        const auto tokens = tokenize_name(r->author_name);
        std::vector<GenderClass> classes;
        json cls = json::array();
        for (const auto& t : tokens) {
            classes.push_back(classify_token(t, refs.gender));
            cls.push_back(gender_class_name(classes.back()));
        }
        auto j = record_json(*r);
        j["tokens"] = tokens_json(tokens);
        j["token_classes"] = std::move(cls);
        j["gender"] = author_gender_name(infer_author_gender(classes, variant));
        sink.stream() << j.dump() << '\n';
    }
    emit_stats(o, stream.stats());
    return 0;
}

int cmd_geolocate(const Options& o) {
    const auto refs = refdata_of(o);
    const auto strategy = parse_or_config<GeoStrategy>(o.strategy, "--strategy", parse_geo_strategy);
    const auto variant = parse_or_config<MajorityVariant>(o.majority, "--majority", parse_majority_variant);
    const Geolocator geo(refs);
    auto in = open_input(o.input);
    CommitStream stream(in, ingest_options(o));
    Sink sink(o, "geolocated.ndjson");
    while (auto r = stream.next()) {
        const auto tokens = tokenize_name(r->author_name);
        const auto res = geo.resolve(strategy, *r, tokens);
        auto j = record_json(*r);
        j["tokens"] = tokens_json(tokens);
        j["gender"] = author_gender_name(infer_author_gender(tokens, refs.gender, variant));
        j["region"] = res.region ? json(region_name(*res.region)) : json(nullptr);
        j["method"] = geo_method_name(res.method);
        sink.stream() << j.dump() << '\n';
    }
    emit_stats(o, stream.stats());
    return 0;
}

AggregateOptions aggregate_options(const Options& o) {
    AggregateOptions a;
    if (o.threshold == 0) throw ConfigError("aggregate", "threshold must be at least 1");
    a.author_threshold = o.threshold;
    a.scope = parse_or_config<ThresholdScope>(o.threshold_scope, "--threshold-scope", parse_threshold_scope);
    a.years = years_of(o);
    if (a.years.first > a.years.last) throw ConfigError("aggregate", "empty year range");
    if (o.group != "both") {
        const auto g = parse_or_config<Grouping>(o.group, "--group", parse_grouping);
        a.by_offset = g == Grouping::ByOffset;
        a.by_region = g == Grouping::ByRegion;
    }
    return a;
}

void check_span(double span) {
    if (!(span > 0.0 && span <= 1.0)) throw ConfigError("aggregate", "span must be in (0, 1]");
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

/// Reads the output of `geolocate` (or `classify` for offset-only grouping).
int cmd_aggregate(const Options& o) {
    const auto agg = aggregate_options(o);
    check_span(o.span);
    if (o.out.empty()) throw ConfigError("aggregate", "--out is required");
    auto in = open_input(o.input);
    CellAccumulator acc(agg);
    std::unordered_map<AuthorKey, std::uint32_t, AuthorKeyHash> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fail = [&](const std::string& why) {
            return InputError("aggregate", "line " + std::to_string(line_no) + ": " + why);
        };
        const auto rec = parse_ndjson_line(line);
        if (!rec) throw fail("malformed record");
        const auto j = json::parse(line);
        if (!j.contains("gender") || !j["gender"].is_string()) throw fail("missing gender (run classify or geolocate)");
        const auto gender = parse_author_gender(j["gender"].get<std::string>());
        if (!gender) throw fail("bad gender");
        std::optional<Region> region;
        if (agg.by_region) {
            if (!j.contains("region")) throw fail("missing region (run geolocate)");
            if (!j["region"].is_null()) {
                if (!j["region"].is_string()) throw fail("bad region");
                region = parse_region(j["region"].get<std::string>());
                if (!region) throw fail("unknown region");
            }
        }
        const auto [it, _] = ids.try_emplace(make_author_key(*rec), static_cast<std::uint32_t>(ids.size()));
        acc.add(ClassifiedCommit{it->second, utc_year(rec->author_timestamp), rec->utc_offset_minutes, region, *gender});
    }
    std::map<int, double> totals;
    for (const auto& [y, n] : acc.totals_by_year()) totals[y] = static_cast<double>(n);
    print_warnings(write_analysis(o.out, acc.cells(), totals, agg.years, o.span));
    return 0;
}

/// Re-renders ratios, growth and charts from an existing cells.csv.
int cmd_report(const Options& o) {
    check_span(o.span);
    fs::path cells_path = o.input;
    if (fs::is_directory(cells_path)) cells_path /= "cells.csv";
    auto in = open_input(cells_path.string());
    const auto cells = read_cells_csv(in);
    const fs::path out = o.out.empty() ? cells_path.parent_path() : fs::path(o.out);
    // Every commit has an offset, so offset cells carry the yearly totals.
    bool have_offset = false;
    for (const auto& c : cells) have_offset |= c.grouping == Grouping::ByOffset;
    std::map<int, double> totals;
    for (const auto& c : cells)
        if ((c.grouping == Grouping::ByOffset) == have_offset) totals[c.year] += static_cast<double>(c.commit_count);
    print_warnings(write_analysis(out.empty() ? fs::path(".") : out, cells, totals, years_of(o), o.span));
    return 0;
}

int cmd_pipeline(const Options& o) {
    PipelineConfig c;
    c.input = o.input;
    c.format = parse_or_config<InputFormat>(o.format, "--format", parse_input_format);
    c.strict = o.strict;
    if (o.refdata.empty()) throw ConfigError("refdata", "--refdata is required");
    c.refdata_dir = o.refdata;
    c.tz_source = tz_source(o);
    c.strategy = parse_or_config<GeoStrategy>(o.strategy, "--strategy", parse_geo_strategy);
    const auto agg = aggregate_options(o);
    c.author_threshold = agg.author_threshold;
    c.threshold_scope = agg.scope;
    c.years = agg.years;
    c.by_offset = agg.by_offset;
    c.by_region = agg.by_region;
    c.majority = parse_or_config<MajorityVariant>(o.majority, "--majority", parse_majority_variant);
    c.span = o.span;
    c.out_dir = o.out;
    c.threads = o.threads;
    const auto result = run_pipeline(c);
    print_warnings(result.warnings);
    return 0;
}

int cmd_gen_corpus(const Options& o) {
    if (o.out.empty()) throw ConfigError("corpus", "--out is required");
    const auto refs = refdata_of(o);
    CorpusOptions c;
    c.commits = o.commits;
    c.seed = o.seed;
    c.years = years_of(o);
    c.dip = !o.no_dip;
    c.noise_fraction = o.noise;
    c.format = parse_or_config<InputFormat>(o.format, "--format", parse_input_format);
    c.author_threshold = o.threshold;
    const auto corpus = generate_corpus(refs, c);
    write_corpus(o.out, corpus, c);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gender-gap analysis of commit histories"};
    app.require_subcommand(1);
    Options o;

    auto add_input = [&](CLI::App* s) { s->add_option("input", o.input, "Commit stream file")->required(); };
    auto add_format = [&](CLI::App* s) {
        s->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"ndjson", "gitlog"}))->capture_default_str();
    };
    auto add_strict = [&](CLI::App* s) { s->add_flag("--strict", o.strict, "Abort on the first malformed record"); };
    auto add_refdata = [&](CLI::App* s) {
        s->add_option("--refdata", o.refdata, "Reference data directory");
        s->add_option("--tz-source", o.tz_source, "Zoneinfo root or extracted tz table (default: refdata table)");
    };
    auto add_out = [&](CLI::App* s, const char* help) { s->add_option("--out", o.out, help); };
    auto add_majority = [&](CLI::App* s) {
        s->add_option("--majority", o.majority, "Majority denominator")
            ->check(CLI::IsMember({"gendered", "all"}))
            ->capture_default_str();
    };
    auto add_strategy = [&](CLI::App* s) {
        s->add_option("--strategy", o.strategy, "Geolocation strategy")
            ->check(CLI::IsMember({"email", "tzname", "mixed"}))
            ->capture_default_str();
    };
    auto add_aggregate = [&](CLI::App* s) {
        s->add_option("--threshold", o.threshold, "Minimum commits for an author to count")->capture_default_str();
        s->add_option("--threshold-scope", o.threshold_scope, "Threshold per (year, group) or per year")
            ->check(CLI::IsMember({"group", "year"}))
            ->capture_default_str();
        s->add_option("--years", o.years, "Year range A:B")->capture_default_str();
        s->add_option("--group", o.group, "Grouping")
            ->check(CLI::IsMember({"offset", "region", "both"}))
            ->capture_default_str();
        s->add_option("--span", o.span, "Loess span")->capture_default_str();
    };

    auto* ingest = app.add_subcommand("ingest", "Parse and sanitize commits; emit records.ndjson");
    add_input(ingest), add_format(ingest), add_strict(ingest), add_out(ingest, "Output directory (default stdout)");

    auto* classify = app.add_subcommand("classify", "Tokenize names and infer author gender");
    add_input(classify), add_format(classify), add_strict(classify), add_refdata(classify), add_majority(classify);
    add_out(classify, "Output directory (default stdout)");

    auto* geolocate = app.add_subcommand("geolocate", "Append region and method to each record");
    add_input(geolocate), add_format(geolocate), add_strict(geolocate), add_refdata(geolocate);
    add_strategy(geolocate), add_majority(geolocate), add_out(geolocate, "Output directory (default stdout)");

    auto* aggregate = app.add_subcommand("aggregate", "Build cells, ratios, growth fit and charts from geolocate output");
    add_input(aggregate), add_aggregate(aggregate), add_out(aggregate, "Output directory");

    auto* report = app.add_subcommand("report", "Re-render ratios, growth and charts from cells.csv");
    report->add_option("input", o.input, "cells.csv or a directory containing it")->required();
    report->add_option("--years", o.years, "Year range clipping the growth fit")->capture_default_str();
    report->add_option("--span", o.span, "Loess span")->capture_default_str();
    add_out(report, "Output directory (default: next to cells.csv)");

    auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write all artifacts");
    add_input(pipeline), add_format(pipeline), add_strict(pipeline), add_refdata(pipeline), add_strategy(pipeline);
    add_majority(pipeline), add_aggregate(pipeline), add_out(pipeline, "Output directory");
    pipeline->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();

    auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic corpus with ground-truth ledger");
    add_refdata(gen), add_format(gen), add_out(gen, "Output directory");
    gen->add_option("--commits", o.commits, "Well-formed commits to generate")->capture_default_str();
    gen->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    gen->add_option("--noise", o.noise, "Rejectable lines as a fraction of --commits")->capture_default_str();
    gen->add_flag("--no-dip", o.no_dip, "Do not embed the last-year dip");
    gen->add_option("--threshold", o.threshold, "Author threshold used for the ledger")->capture_default_str();
    gen->add_option("--years", o.years, "Year range A:B")->default_str("2000:2020");

    o.years = "1970:2020";
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (gen->parsed() && gen->count("--years") == 0) o.years = "2000:2020";

    try {
        if (ingest->parsed()) return cmd_ingest(o);
        if (classify->parsed()) return cmd_classify(o);
        if (geolocate->parsed()) return cmd_geolocate(o);
        if (aggregate->parsed()) return cmd_aggregate(o);
        if (report->parsed()) return cmd_report(o);
        if (pipeline->parsed()) return cmd_pipeline(o);
        if (gen->parsed()) return cmd_gen_corpus(o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
