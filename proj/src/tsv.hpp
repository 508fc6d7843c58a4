#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gendergap/error.hpp"

namespace gendergap::detail {

/// Iterates the data rows of a tab-separated reference file. Lines starting
/// with '#' and blank lines are skipped, as is a first row equal to `header`.
/// The callback receives the 1-based line number and the split fields.
inline void for_each_tsv_row(const std::filesystem::path& path, std::span<const std::string_view> header,
                             const std::function<void(std::size_t, std::span<const std::string_view>)>& row) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("refdata", "cannot open " + path.string());
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        fields.clear();
        std::string_view rest = line;
        while (true) {
            auto tab = rest.find('\t');
            fields.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        if (first_data) {
            first_data = false;
            if (fields.size() == header.size() && std::equal(fields.begin(), fields.end(), header.begin())) continue;
        }
        if (fields.size() != header.size())
            throw ConfigError("refdata", path.filename().string() + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(header.size()) + " columns, got " +
                                             std::to_string(fields.size()));
        row(line_no, fields);
    }
    if (in.bad()) throw ConfigError("refdata", "read failure in " + path.string());
}

inline std::string where(const std::filesystem::path& path, std::size_t line_no) {
    return path.filename().string() + ":" + std::to_string(line_no);
}

}  // namespace gendergap::detail
