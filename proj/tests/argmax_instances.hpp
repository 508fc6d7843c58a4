#pragma once

#include <algorithm>
#include <random>
#include <tuple>
#include <string>
#include <vector>

#include "gendergap/geo.hpp"
#include "gendergap/refdata.hpp"

namespace testing {

/// A random geolocation problem: places in random regions sharing one
/// fixed offset, random populations and sparse name incidences. Some
/// instances duplicate a place's data into a second region to force ties.
struct ArgmaxInstance {
    std::vector<gendergap::Place> places;
    std::vector<std::tuple<std::string, std::string, double, bool>> incidences;  // name, place, value, is_surname
    std::vector<std::string> tokens;
};

inline ArgmaxInstance random_instance(std::mt19937_64& rng) {
    using namespace gendergap;
    ArgmaxInstance inst;
    const int n_places = 1 + static_cast<int>(rng() % 8);
    const std::vector<std::string> vocab{"ana", "li", "omar", "kim", "ivan", "sato", "silva", "nur"};
    for (int p = 0; p < n_places; ++p) {
        const auto region = kAllRegions[rng() % kRegionCount];
        const std::uint64_t pop = 2 * (1 + rng() % 5'000'000);  // even, so halving is exact
        inst.places.push_back(Place{"Zone/P" + std::to_string(p), region, pop});
    }
    for (const auto& pl : inst.places)
        for (const auto& name : vocab)
            for (bool surname : {false, true})
                if (rng() % 4 == 0)
                    inst.incidences.emplace_back(name, pl.place_id, std::uniform_real_distribution<double>(0, 0.05)(rng),
                                                 surname);
    if (n_places >= 2 && rng() % 4 == 0) {
        // exact tie: clone place 0 into a different region
        auto clone = inst.places[0];
        clone.place_id = "Zone/Clone";
        clone.region = kAllRegions[(static_cast<std::size_t>(clone.region) + 1 + rng() % (kRegionCount - 1)) % kRegionCount];
        inst.places.push_back(clone);
        const auto n = inst.incidences.size();
        for (std::size_t i = 0; i < n; ++i)
            if (std::get<1>(inst.incidences[i]) == inst.places[0].place_id) {
                auto row = inst.incidences[i];
                std::get<1>(row) = clone.place_id;
                inst.incidences.push_back(row);
            }
    }
    const int n_tokens = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < n_tokens; ++t) inst.tokens.push_back(rng() % 5 == 0 ? "unlisted" : vocab[rng() % vocab.size()]);
    return inst;
}

/// Materializes an instance with every population multiplied by `c`.
inline gendergap::RefData instance_refs(const ArgmaxInstance& inst, double c) {
    using namespace gendergap;
    RefData refs;
    std::vector<Place> places = inst.places;
    for (auto& p : places) p.population = static_cast<std::uint64_t>(static_cast<double>(p.population) * c);
    refs.places = PlaceTable(std::move(places));
    for (const auto& [name, place, value, surname] : inst.incidences) {
        const auto idx = static_cast<std::uint32_t>(*refs.places.index_of(place));
        (surname ? refs.surnames : refs.forenames).set(name, idx, value);
    }
    for (const auto& p : inst.places) refs.tz.add(p.place_id, ZoneRules(3600, {}, {}));
    return refs;
}

/// Number of (instance, c) pairs whose tz-name resolution changes when
/// populations are scaled by c.
inline std::size_t argmax_violations(std::size_t instances, const std::vector<double>& factors, std::uint64_t seed,
                                     std::size_t* ties = nullptr, std::size_t* zeros = nullptr) {
    using namespace gendergap;
    std::mt19937_64 rng(seed);
    std::size_t violations = 0;
    const CommitRecord commit{"", "", "", 1'300'000'000, 60};
    for (std::size_t i = 0; i < instances; ++i) {
        const auto inst = random_instance(rng);
        const auto base_refs = instance_refs(inst, 1.0);
        const auto base = geolocate_tzname(commit, inst.tokens, base_refs);
        if (!base.region && base.region_scores) {
            const auto& s = *base.region_scores;
            const double mx = *std::max_element(s.begin(), s.end());
            if (mx > 0 && ties) ++*ties;
            if (mx == 0 && zeros) ++*zeros;
        }
        for (double c : factors) {
            const auto scaled = geolocate_tzname(commit, inst.tokens, instance_refs(inst, c));
            if (scaled.region != base.region || scaled.method != base.method) ++violations;
        }
    }
    return violations;
}

}  // namespace testing
