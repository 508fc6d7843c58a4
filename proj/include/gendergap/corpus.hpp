#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gendergap/aggregate.hpp"
#include "gendergap/ingest.hpp"
#include "gendergap/refdata.hpp"

namespace gendergap {

/// Synthetic commit corpora with embedded ground truth.
///
/// Every generated author has a home place and draws name tokens that only
/// occur in the home region's name tables, so the expected outcome of each
/// commit follows from the construction alone: gender from the forename's
/// label, region from the home place for non-zero offsets and from the
/// email ccTLD (or nothing) for offset-zero commits. The ledger tallies
/// those expectations directly, without going through the pipeline code.
struct CorpusOptions {
    std::uint64_t commits = 50000;  // well-formed, in-window commits
    std::uint64_t seed = 20201231;
    YearRange years{2000, 2020};
    /// Lower the female share in the last year in every region.
    bool dip = true;
    /// Extra lines that ingest must reject, as a fraction of `commits`.
    double noise_fraction = 0.01;
    InputFormat format = InputFormat::Ndjson;
    std::uint32_t author_threshold = 5;
};

struct TruthAuthor {
    std::string name;
    std::string email;
    AuthorGender gender = AuthorGender::Unknown;
    Region region = Region::Africa;
    std::string place_id;
};

struct CorpusLedger {
    /// Expected cells for both groupings, in CellAccumulator order.
    std::vector<AggregateCell> cells;
    IngestStats expected_ingest;
    std::vector<Region> dip_regions;
    /// Offset-zero commits and all commits per year.
    std::map<int, std::pair<std::uint64_t, std::uint64_t>> tzz;
};

struct GeneratedCorpus {
    std::vector<std::string> lines;  // without trailing newlines
    std::vector<TruthAuthor> authors;
    CorpusLedger ledger;
};

/// Throws ConfigError when the reference data cannot supply name pools
/// for every region.
GeneratedCorpus generate_corpus(const RefData& refs, const CorpusOptions& options);

std::string corpus_file_name(InputFormat format);

nlohmann::ordered_json ledger_json(const GeneratedCorpus& corpus, const CorpusOptions& options);

/// Writes corpus.<fmt>, ledger_cells.csv, ledger.json and truth.tsv.
void write_corpus(const std::filesystem::path& dir, const GeneratedCorpus& corpus, const CorpusOptions& options);

}  // namespace gendergap
