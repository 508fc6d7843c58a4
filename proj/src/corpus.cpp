#include "gendergap/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "gendergap/error.hpp"
#include "gendergap/gender.hpp"
#include "gendergap/report.hpp"
#include "gendergap/unicode.hpp"

namespace gendergap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string commit_id(std::uint64_t seed, std::uint64_t serial) {
    char buf[64];
    const auto a = splitmix64(serial ^ (seed << 1));  // bijective in serial
    const auto b = splitmix64(a + serial);
    const auto c = splitmix64(b);
    std::snprintf(buf, sizeof buf, "%016llx%016llx%08llx", static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b), static_cast<unsigned long long>(c >> 32));
    return buf;
}

struct NamePools {
    std::array<std::vector<std::string>, 3> forenames;  // by AuthorGender
    std::vector<std::string> surnames;
};

/// Region of a name whose every incidence row (both tables) lies in it.
std::optional<Region> exclusive_region(const std::string& name, const RefData& refs) {
    std::optional<Region> region;
    for (const auto* table : {&refs.forenames, &refs.surnames}) {
        for (const auto& e : table->entries(name)) {
            const auto r = refs.places[e.place].region;
            if (region && *region != r) return std::nullopt;
            region = r;
        }
    }
    return region;
}

std::array<NamePools, kRegionCount> build_pools(const RefData& refs) {
    std::array<NamePools, kRegionCount> pools;
    auto usable = [](const std::string& display) {
        return tokenize_name(display).size() == 1 && sanitize_author_name(display).has_value();
    };
    for (const auto& name : refs.forenames.names()) {
        auto region = exclusive_region(name, refs);
        const auto display = unicode::to_title(name);
        if (!region || !usable(display)) continue;
        AuthorGender g;
        switch (refs.gender.lookup(display)) {
            case GenderClass::Male:
            case GenderClass::MostlyMale: g = AuthorGender::Male; break;
            case GenderClass::Female:
            case GenderClass::MostlyFemale: g = AuthorGender::Female; break;
            default: g = AuthorGender::Unknown; break;
        }
        pools[static_cast<std::size_t>(*region)].forenames[static_cast<std::size_t>(g)].push_back(display);
    }
    for (const auto& name : refs.surnames.names()) {
        auto region = exclusive_region(name, refs);
        const auto display = unicode::to_title(name);
        if (!region || !usable(display) || !refs.forenames.entries(name).empty()) continue;
        if (refs.gender.lookup(display) != GenderClass::Unknown) continue;
        pools[static_cast<std::size_t>(*region)].surnames.push_back(display);
    }
    for (auto r : kAllRegions) {
        const auto& p = pools[static_cast<std::size_t>(r)];
        for (const auto& list : p.forenames)
            if (list.empty())
                throw ConfigError("corpus", "no region-exclusive forenames for every gender in " +
                                                std::string(region_name(r)));
        if (p.surnames.empty())
            throw ConfigError("corpus", "no region-exclusive surnames in " + std::string(region_name(r)));
    }
    return pools;
}

struct Identity {
    TruthAuthor truth;
    std::uint32_t place = 0;
    std::optional<Region> email_region;
};

struct PendingCommit {
    std::uint32_t identity;
    std::int64_t ts;
    std::int32_t offset;
    std::optional<Region> expected_region;
};

struct CellPlan {
    std::uint64_t commits = 0;
    std::array<std::uint64_t, 3> active{};  // active authors by gender
};

class Generator {
public:
    Generator(const RefData& refs, const CorpusOptions& opt)
        : refs_(refs), opt_(opt), rng_(opt.seed), pools_(build_pools(refs)) {
        for (const auto& [tld, region] : refs.cctld.entries()) tlds_[static_cast<std::size_t>(region)].push_back(tld);
        for (std::size_t i = 0; i < refs.places.size(); ++i)
            region_places_[static_cast<std::size_t>(refs.places[i].region)].push_back(static_cast<std::uint32_t>(i));
        for (auto r : kAllRegions)
            if (region_places_[static_cast<std::size_t>(r)].empty())
                throw ConfigError("corpus", "no places in region " + std::string(region_name(r)));
    }

    GeneratedCorpus run();

private:
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
    }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[uniform_int(0, v.size() - 1)];
    }

    double female_share(int year) const { return std::min(0.4, 0.06 + 0.005 * (year - opt_.years.first)); }
    double tzz_probability(int year) const { return std::max(0.02, 0.12 - 0.004 * (year - opt_.years.first)); }
    static constexpr double kUnknownShare = 0.1;

    std::uint32_t new_identity(Region r, AuthorGender g);
    std::uint32_t active_identity(Region r, AuthorGender g, std::size_t k);
    std::vector<std::uint64_t> plan_volumes();
    CellPlan plan_cell(Region r, int year, std::uint64_t commits, const std::optional<CellPlan>& previous);
    std::vector<PendingCommit> draw_cell(Region r, int year, const CellPlan& plan);
    void emit_commits(std::uint32_t identity, int year, std::uint64_t count, std::vector<PendingCommit>& out);

    const RefData& refs_;
    CorpusOptions opt_;
    std::mt19937_64 rng_;
    std::array<NamePools, kRegionCount> pools_;
    std::array<std::vector<std::string>, kRegionCount> tlds_;
    std::array<std::vector<std::uint32_t>, kRegionCount> region_places_;
    std::vector<Identity> identities_;
    std::array<std::array<std::vector<std::uint32_t>, 3>, kRegionCount> active_;
};

std::uint32_t Generator::new_identity(Region r, AuthorGender g) {
    const auto ri = static_cast<std::size_t>(r);
    const auto& pool = pools_[ri];
    Identity id;
    // Pick a home place where at least one forename of the pool occurs.
    std::vector<std::string> candidates;
    for (int attempt = 0; attempt < 64 && candidates.empty(); ++attempt) {
        id.place = pick(region_places_[ri]);
        for (const auto& n : pool.forenames[static_cast<std::size_t>(g)])
            if (refs_.forenames.incidence(n, id.place) > 0.0) candidates.push_back(n);
    }
    if (candidates.empty())
        throw ConfigError("corpus", "no forename with incidence in any place of " + std::string(region_name(r)));

    const auto serial = identities_.size();
    id.truth.name = pick(candidates) + " " + pick(pool.surnames);
    id.truth.gender = g;
    id.truth.region = r;
    id.truth.place_id = refs_.places[id.place].place_id;
    static const std::vector<std::string> kGeneric = {"com", "org", "net", "edu"};
    std::string domain;
    if (!tlds_[ri].empty() && uniform() < 0.45) {
        domain = "mail." + pick(tlds_[ri]);
        id.email_region = r;
    } else {
        domain = "example." + pick(kGeneric);
    }
    id.truth.email = "dev" + std::to_string(serial) + "@" + domain;
    identities_.push_back(std::move(id));
    return static_cast<std::uint32_t>(serial);
}

std::uint32_t Generator::active_identity(Region r, AuthorGender g, std::size_t k) {
    auto& list = active_[static_cast<std::size_t>(r)][static_cast<std::size_t>(g)];
    while (list.size() <= k) list.push_back(new_identity(r, g));
    return list[k];
}

std::vector<std::uint64_t> Generator::plan_volumes() {
    // Largest-remainder apportionment of the commit budget over
    // (region, year) weights: distinct regional weights, 12% yearly growth.
    const auto years = static_cast<std::size_t>(opt_.years.last - opt_.years.first + 1);
    std::vector<double> w(kRegionCount * years);
    double total = 0.0;
    for (std::size_t r = 0; r < kRegionCount; ++r)
        for (std::size_t y = 0; y < years; ++y) {
            w[r * years + y] = (1.0 + 0.2 * static_cast<double>((r * 5) % kRegionCount)) * std::pow(1.12, double(y));
            total += w[r * years + y];
        }
    std::vector<std::uint64_t> n(w.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double exact = static_cast<double>(opt_.commits) * w[i] / total;
        n[i] = static_cast<std::uint64_t>(std::floor(exact));
        assigned += n[i];
        rem.emplace_back(exact - std::floor(exact), i);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t k = 0; assigned < opt_.commits; ++k, ++assigned) ++n[rem[k % rem.size()].second];
    return n;
}

CellPlan Generator::plan_cell(Region, int year, std::uint64_t commits, const std::optional<CellPlan>& previous) {
    CellPlan plan;
    plan.commits = commits;
    const auto active = std::min<std::uint64_t>(commits / 7, std::max<std::uint64_t>(1, std::llround(0.08 * commits)));
    if (active < 3) {
        plan.active[static_cast<std::size_t>(AuthorGender::Male)] = active;
        return plan;
    }
    const auto f = static_cast<std::uint64_t>(std::max<long long>(1, std::llround(female_share(year) * active)));
    const auto u = static_cast<std::uint64_t>(std::llround(kUnknownShare * active));
    std::uint64_t female = f;
    if (previous) {
        const auto prev_f = previous->active[static_cast<std::size_t>(AuthorGender::Female)];
        const auto cut = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(0.35 * prev_f)));
        female = prev_f > cut ? prev_f - cut : 0;
    }
    plan.active[static_cast<std::size_t>(AuthorGender::Female)] = female;
    plan.active[static_cast<std::size_t>(AuthorGender::Unknown)] = u;
    plan.active[static_cast<std::size_t>(AuthorGender::Male)] = active - std::min(active - 1, female + u);
    return plan;
}

void Generator::emit_commits(std::uint32_t identity, int year, std::uint64_t count, std::vector<PendingCommit>& out) {
    const auto& id = identities_[identity];
    const std::int64_t begin = days_from_civil(year, 1, 1) * 86400;
    const std::int64_t end = days_from_civil(year + 1, 1, 1) * 86400 - 1;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto ts = static_cast<std::int64_t>(uniform_int(static_cast<std::uint64_t>(begin), static_cast<std::uint64_t>(end)));
        std::int32_t offset = refs_.tz.offset_minutes(id.truth.place_id, ts);
        if (uniform() < tzz_probability(year)) offset = 0;
        PendingCommit c{identity, ts, offset, std::nullopt};
        c.expected_region = offset == 0 ? id.email_region : std::optional<Region>(id.truth.region);
        out.push_back(c);
    }
}

std::vector<PendingCommit> Generator::draw_cell(Region r, int year, const CellPlan& plan) {
    std::vector<std::pair<std::uint32_t, std::uint64_t>> authors;  // identity, commits
    std::uint64_t used = 0;
    for (auto g : kAllAuthorGenders)
        for (std::size_t k = 0; k < plan.active[static_cast<std::size_t>(g)]; ++k) {
            authors.emplace_back(active_identity(r, g, k), uniform_int(5, 15));
            used += authors.back().second;
        }
    while (used > plan.commits) {
        auto& a = authors[uniform_int(0, authors.size() - 1)];
        if (a.second > 5) --a.second, --used;
    }
    std::uint64_t remaining = plan.commits - used;
    const double f = female_share(year);
    while (remaining > 0) {
        const auto c = std::min<std::uint64_t>(remaining, uniform_int(1, 4));
        const double u = uniform();
        const auto g = u < f ? AuthorGender::Female : (u < f + kUnknownShare ? AuthorGender::Unknown : AuthorGender::Male);
        authors.emplace_back(new_identity(r, g), c);
        remaining -= c;
    }
    std::vector<PendingCommit> out;
    out.reserve(plan.commits);
    for (const auto& [identity, count] : authors) emit_commits(identity, year, count, out);
    return out;
}

struct RegionTally {
    std::uint64_t female_commits = 0, male_commits = 0, female_authors = 0, male_authors = 0;
};

GeneratedCorpus Generator::run() {
    const int first = opt_.years.first, last = opt_.years.last;
    const auto years = static_cast<std::size_t>(last - first + 1);
    const auto volumes = plan_volumes();

    auto tally = [&](const std::vector<PendingCommit>& commits) {
        std::map<std::uint32_t, std::uint64_t> per_author;
        RegionTally t;
        for (const auto& c : commits) {
            if (!c.expected_region) continue;
            ++per_author[c.identity];
            const auto g = identities_[c.identity].truth.gender;
            if (g == AuthorGender::Female) ++t.female_commits;
            if (g == AuthorGender::Male) ++t.male_commits;
        }
        for (const auto& [id, n] : per_author) {
            if (n < opt_.author_threshold) continue;
            const auto g = identities_[id].truth.gender;
            if (g == AuthorGender::Female) ++t.female_authors;
            if (g == AuthorGender::Male) ++t.male_authors;
        }
        return t;
    };
    auto lower = [](std::uint64_t f1, std::uint64_t m1, std::uint64_t f0, std::uint64_t m0) {
        // f1/(f1+m1) < f0/(f0+m0), both defined
        if (f1 + m1 == 0 || f0 + m0 == 0) return false;
        return f1 * (f0 + m0) < f0 * (f1 + m1);
    };

    GeneratedCorpus corpus;
    std::vector<PendingCommit> all;
    all.reserve(opt_.commits);
    for (auto r : kAllRegions) {
        const auto ri = static_cast<std::size_t>(r);
        std::optional<CellPlan> previous;
        RegionTally previous_tally;
        for (std::size_t yi = 0; yi < years; ++yi) {
            const int year = first + static_cast<int>(yi);
            const bool dip_year = opt_.dip && year == last && years >= 2;
            auto plan = plan_cell(r, year, volumes[ri * years + yi], dip_year ? previous : std::nullopt);
            auto commits = draw_cell(r, year, plan);
            auto t = tally(commits);
            if (dip_year) {
                int attempts = 0;
                while (!(lower(t.female_commits, t.male_commits, previous_tally.female_commits, previous_tally.male_commits) &&
                         lower(t.female_authors, t.male_authors, previous_tally.female_authors, previous_tally.male_authors))) {
                    if (++attempts > 200) break;
                    commits = draw_cell(r, year, plan);
                    t = tally(commits);
                }
                if (attempts <= 200) corpus.ledger.dip_regions.push_back(r);
            }
            all.insert(all.end(), commits.begin(), commits.end());
            previous = plan;
            previous_tally = t;
        }
    }

    // Expected cells, tallied straight from the construction.
    struct Key {
        Grouping grouping;
        std::int32_t group;
        int year;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::array<std::uint64_t, 3>> commit_counts;
    std::map<std::pair<Key, std::uint32_t>, std::uint64_t> author_commits;
    for (const auto& c : all) {
        const int year = utc_year(c.ts);
        const auto g = static_cast<std::size_t>(identities_[c.identity].truth.gender);
        std::vector<Key> keys{{Grouping::ByOffset, c.offset, year}};
        if (c.expected_region) keys.push_back({Grouping::ByRegion, static_cast<std::int32_t>(*c.expected_region), year});
        for (const auto& k : keys) {
            ++commit_counts[k][g];
            ++author_commits[{k, c.identity}];
        }
        auto& z = corpus.ledger.tzz[year];
        if (c.offset == 0) ++z.first;
        ++z.second;
    }
    std::map<Key, std::array<std::uint64_t, 3>> author_counts;
    for (const auto& [ka, n] : author_commits)
        if (n >= opt_.author_threshold) ++author_counts[ka.first][static_cast<std::size_t>(identities_[ka.second].truth.gender)];
    for (const auto& [k, counts] : commit_counts)
        for (auto g : kAllAuthorGenders) {
            const auto gi = static_cast<std::size_t>(g);
            corpus.ledger.cells.push_back(
                AggregateCell{k.year, k.grouping, k.group, g, counts[gi], author_counts[k][gi]});
        }

    // Noise lines that ingest must reject.
    const auto noise = static_cast<std::uint64_t>(std::llround(opt_.noise_fraction * static_cast<double>(opt_.commits)));
    auto& st = corpus.ledger.expected_ingest;
    st.records_read = opt_.commits + noise;
    st.records_kept = opt_.commits;

    std::uint64_t serial = 0;
    auto render = [&](const CommitRecord& r) {
        if (opt_.format == InputFormat::Ndjson) return to_ndjson(r);
        char tz[16];
        const int m = std::abs(r.utc_offset_minutes);
        std::snprintf(tz, sizeof tz, "%c%02d%02d", r.utc_offset_minutes < 0 ? '-' : '+', m / 60, m % 60);
        std::string line = r.commit_id;
        for (const auto& f : {r.author_name, r.author_email, std::to_string(r.author_timestamp), std::string(tz)}) {
            line += '\0';
            line += f;
        }
        return line;
    };

    corpus.lines.reserve(all.size() + noise);
    for (const auto& c : all) {
        const auto& id = identities_[c.identity].truth;
        corpus.lines.push_back(render(CommitRecord{commit_id(opt_.seed, serial++), id.name, id.email, c.ts, c.offset}));
    }
    const std::int64_t mid_window = days_from_civil(first, 6, 1) * 86400;
    for (std::uint64_t i = 0; i < noise; ++i) {
        CommitRecord r{commit_id(opt_.seed, serial++), "Marie Dupont", "noise" + std::to_string(i) + "@example.org",
                       mid_window, 60};
        switch (i % 6) {
            case 0: r.author_name = "builder" + std::string(1, char('a' + i % 26)) + "@ci.example.org";
                ++st.rejected_name, ++st.rejected_name_by_rule[static_cast<std::size_t>(NameRule::EmailAddress)]; break;
            case 1: r.author_name = "Release Bot 2000";
                ++st.rejected_name, ++st.rejected_name_by_rule[static_cast<std::size_t>(NameRule::TooManyNonLetters)]; break;
            case 2: r.author_name = "   ";
                ++st.rejected_name, ++st.rejected_name_by_rule[static_cast<std::size_t>(NameRule::Blank)]; break;
            case 3: r.author_name = std::string(101 + i % 7, 'a');
                ++st.rejected_name, ++st.rejected_name_by_rule[static_cast<std::size_t>(NameRule::TooLong)]; break;
            case 4: r.author_timestamp = (i % 12 == 4) ? -86400 : kStudyWindowEnd + 1 + static_cast<std::int64_t>(i);
                ++st.rejected_timestamp; break;
            default: {
                ++st.rejected_malformed;
                if (opt_.format == InputFormat::Ndjson) {
                    nlohmann::ordered_json j;
                    j["id"] = r.commit_id;
                    j["author_email"] = r.author_email;
                    j["author_date_unix"] = r.author_timestamp;
                    j["author_tz_offset_min"] = 7;
                    corpus.lines.push_back(j.dump());
                } else {
                    corpus.lines.push_back(r.commit_id + std::string(1, '\0') + r.author_name);
                }
                continue;
            }
        }
        corpus.lines.push_back(render(r));
    }
    std::shuffle(corpus.lines.begin(), corpus.lines.end(), rng_);

    // Identities drawn for discarded dip attempts never commit.
    std::vector<bool> used(identities_.size());
    for (const auto& c : all) used[c.identity] = true;
    for (std::size_t i = 0; i < identities_.size(); ++i)
        if (used[i]) corpus.authors.push_back(std::move(identities_[i].truth));
    return corpus;
}

}  // namespace

GeneratedCorpus generate_corpus(const RefData& refs, const CorpusOptions& options) {
    if (options.years.first > options.years.last) throw ConfigError("corpus", "empty year range");
    if (options.years.first < 1970 || options.years.last > 2020)
        throw ConfigError("corpus", "years must lie within 1970:2020");
    if (options.noise_fraction < 0.0) throw ConfigError("corpus", "noise fraction must be non-negative");
    return Generator(refs, options).run();
}

std::string corpus_file_name(InputFormat format) {
    return format == InputFormat::Ndjson ? "corpus.ndjson" : "corpus.gitlog";
}

nlohmann::ordered_json ledger_json(const GeneratedCorpus& corpus, const CorpusOptions& options) {
    nlohmann::ordered_json j;
    j["seed"] = options.seed;
    j["commits"] = options.commits;
    j["noise_lines"] = corpus.lines.size() - options.commits;
    j["years"] = std::to_string(options.years.first) + ":" + std::to_string(options.years.last);
    j["threshold"] = options.author_threshold;
    j["dip"] = options.dip;
    j["dip_regions"] = nlohmann::ordered_json::array();
    for (auto r : corpus.ledger.dip_regions) j["dip_regions"].push_back(region_name(r));
    j["expected_ingest"] = corpus.ledger.expected_ingest.to_json();
    j["authors"] = corpus.authors.size();

    std::map<std::pair<std::int32_t, int>, std::array<std::uint64_t, 4>> fm;  // Fc Mc Fa Ma
    for (const auto& c : corpus.ledger.cells) {
        if (c.grouping != Grouping::ByRegion) continue;
        auto& t = fm[{c.group, c.year}];
        if (c.gender == AuthorGender::Female) t[0] += c.commit_count, t[2] += c.author_count;
        if (c.gender == AuthorGender::Male) t[1] += c.commit_count, t[3] += c.author_count;
    }
    auto& ratios = j["region_ratios"];
    ratios = nlohmann::ordered_json::object();
    for (const auto& [key, t] : fm) {
        auto& e = ratios[std::string(region_name(static_cast<Region>(key.first)))][std::to_string(key.second)];
        auto fc = female_ratio(t[0], t[1]);
        auto fa = female_ratio(t[2], t[3]);
        e["commits"] = fc ? nlohmann::ordered_json(*fc) : nlohmann::ordered_json(nullptr);
        e["authors"] = fa ? nlohmann::ordered_json(*fa) : nlohmann::ordered_json(nullptr);
    }
    auto& tzz = j["tzz_share"];
    tzz = nlohmann::ordered_json::object();
    for (const auto& [y, z] : corpus.ledger.tzz)
        tzz[std::to_string(y)] = static_cast<double>(z.first) / static_cast<double>(z.second);
    return j;
}

void write_corpus(const std::filesystem::path& dir, const GeneratedCorpus& corpus, const CorpusOptions& options) {
    std::filesystem::create_directories(dir);
    auto open = [&](const std::string& name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw InputError("corpus", "cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open(corpus_file_name(options.format));
        for (const auto& line : corpus.lines) out << line << '\n';
    }
    {
        auto out = open("ledger_cells.csv");
        write_cells_csv(out, corpus.ledger.cells);
    }
    {
        auto out = open("ledger.json");
        out << ledger_json(corpus, options).dump(2) << '\n';
    }
    {
        auto out = open("truth.tsv");
        out << "email\tname\tgender\tregion\tplace_id\n";
        for (const auto& a : corpus.authors)
            out << a.email << '\t' << a.name << '\t' << author_gender_name(a.gender) << '\t' << region_name(a.region)
                << '\t' << a.place_id << '\n';
    }
}

}  // namespace gendergap
