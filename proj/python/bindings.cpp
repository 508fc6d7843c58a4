// Python bindings: a thin layer over the C++ core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gendergap/corpus.hpp"
#include "gendergap/error.hpp"
#include "gendergap/gender.hpp"
#include "gendergap/geo.hpp"
#include "gendergap/ingest.hpp"
#include "gendergap/pipeline.hpp"
#include "gendergap/refdata.hpp"

namespace py = pybind11;
using namespace gendergap;

namespace {

template <typename T, typename F>
T parse_or_throw(const std::string& s, const char* what, F parse) {
    auto v = parse(s);
    if (!v) throw ConfigError("python", std::string("invalid ") + what + ": " + s);
    return *v;
}

py::dict resolution_dict(const GeoResolution& r) {
    py::dict d;
    d["region"] = r.region ? py::object(py::str(std::string(region_name(*r.region)))) : py::object(py::none());
    d["method"] = std::string(geo_method_name(r.method));
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Commit-metadata gender-gap analysis core";

    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            PyErr_SetString(input_error.ptr(), e.what());
        } catch (const ConfigError& e) {
            PyErr_SetString(config_error.ptr(), e.what());
        }
    });

    m.def("sanitize_author_name", [](py::bytes raw) { return sanitize_author_name(std::string(raw)); },
          "Decoded, trimmed name, or None when a plausibility rule rejects it.");
    m.def("rejection_rule", [](py::bytes raw) -> std::optional<std::string> {
        auto c = check_author_name(std::string(raw));
        if (!c.rejected_by) return std::nullopt;
        return std::string(name_rule_name(*c.rejected_by));
    });
    m.def("in_study_window", &in_study_window);
    m.def("tokenize_name", &tokenize_name);
    m.def("majority", [](const std::vector<std::string>& classes, const std::string& variant) {
        std::vector<GenderClass> cs;
        for (const auto& c : classes) cs.push_back(parse_or_throw<GenderClass>(c, "gender class", parse_gender_class));
        return std::string(author_gender_name(
            infer_author_gender(cs, parse_or_throw<MajorityVariant>(variant, "majority", parse_majority_variant))));
    }, py::arg("classes"), py::arg("variant") = "gendered");

    py::class_<RefData, std::shared_ptr<RefData>>(m, "RefData")
        .def(py::init([](const std::filesystem::path& dir) { return std::make_shared<RefData>(load_refdata(dir)); }))
        .def("gender_class", [](const RefData& r, const std::string& token) {
            return std::string(gender_class_name(r.gender.lookup(token)));
        })
        .def("author_gender", [](const RefData& r, const std::string& name, const std::string& variant) {
            return std::string(author_gender_name(infer_author_gender(
                tokenize_name(name), r.gender, parse_or_throw<MajorityVariant>(variant, "majority", parse_majority_variant))));
        }, py::arg("name"), py::arg("variant") = "gendered")
        .def("compatible_places", [](const RefData& r, std::int64_t utc, std::int32_t offset) {
            return compatible_places(utc, offset, r.tz);
        })
        .def("offset_minutes", [](const RefData& r, const std::string& place, std::int64_t utc) {
            if (!r.tz.contains(place)) throw ConfigError("python", "unknown place " + place);
            return r.tz.offset_minutes(place, utc);
        })
        .def("geolocate", [](const RefData& r, const std::string& name, const std::string& email, std::int64_t utc,
                             std::int32_t offset, const std::string& strategy) {
            const CommitRecord rec{"", name, email, utc, offset};
            const auto tokens = tokenize_name(name);
            switch (parse_or_throw<GeoStrategy>(strategy, "strategy", parse_geo_strategy)) {
                case GeoStrategy::Email: return resolution_dict(geolocate_email(rec, r.cctld));
                case GeoStrategy::TzName: return resolution_dict(geolocate_tzname(rec, tokens, r));
                case GeoStrategy::Mixed: break;
            }
            return resolution_dict(geolocate_mixed(rec, tokens, r));
        }, py::arg("name"), py::arg("email"), py::arg("utc"), py::arg("offset"), py::arg("strategy") = "mixed");

    m.def("loess_smooth", [](const std::vector<double>& x, const std::vector<double>& y, double span, int degree) {
        return loess_smooth(x, y, span, degree);
    }, py::arg("x"), py::arg("y"), py::arg("span") = 0.75, py::arg("degree") = 1);
    m.def("exp_fit", [](const std::map<int, double>& totals, int first, int last) {
        const auto f = exp_fit(totals, YearRange{first, last});
        return py::make_tuple(f.a, f.b, f.residual);
    }, py::arg("totals"), py::arg("first") = 1971, py::arg("last") = 2019);

    m.def("gen_corpus", [](const std::filesystem::path& refdata, const std::filesystem::path& out,
                           std::uint64_t commits, std::uint64_t seed, int first, int last, bool dip,
                           const std::string& format) {
        const auto refs = load_refdata(refdata);
        CorpusOptions o;
        o.commits = commits;
        o.seed = seed;
        o.years = {first, last};
        o.dip = dip;
        o.format = parse_or_throw<InputFormat>(format, "format", parse_input_format);
        write_corpus(out, generate_corpus(refs, o), o);
        return out / corpus_file_name(o.format);
    }, py::arg("refdata"), py::arg("out"), py::arg("commits") = 50000, py::arg("seed") = CorpusOptions{}.seed,
       py::arg("first") = 2000, py::arg("last") = 2020, py::arg("dip") = true, py::arg("format") = "ndjson");

    m.def("run_pipeline", [](const std::filesystem::path& input, const std::filesystem::path& refdata,
                             const std::filesystem::path& out, const std::string& format, const std::string& strategy,
                             std::uint32_t threshold, const std::string& majority, double span, unsigned threads) {
        PipelineConfig c;
        c.input = input;
        c.refdata_dir = refdata;
        c.out_dir = out;
        c.format = parse_or_throw<InputFormat>(format, "format", parse_input_format);
        c.strategy = parse_or_throw<GeoStrategy>(strategy, "strategy", parse_geo_strategy);
        c.author_threshold = threshold;
        c.majority = parse_or_throw<MajorityVariant>(majority, "majority", parse_majority_variant);
        c.span = span;
        c.threads = threads;
        PipelineResult r;
        {
            py::gil_scoped_release release;
            r = run_pipeline(c);
        }
        return py::module_::import("json").attr("loads")(r.coverage.dump());
    }, py::arg("input"), py::arg("refdata"), py::arg("out"), py::arg("format") = "ndjson",
       py::arg("strategy") = "mixed", py::arg("threshold") = 5, py::arg("majority") = "gendered",
       py::arg("span") = 0.75, py::arg("threads") = 0);
}
