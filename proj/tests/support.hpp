#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gendergap/refdata.hpp"
#include "gendergap/tz.hpp"

namespace testing {

inline std::filesystem::path refdata_dir() { return GENDERGAP_REFDATA; }

inline const gendergap::RefData& fixture_refs() {
    static const gendergap::RefData refs = gendergap::load_refdata(refdata_dir());
    return refs;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    static const auto stamp = std::to_string(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() / ("gendergap-" + stamp) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// UTC instant from calendar fields.
inline std::int64_t utc(int y, unsigned mo, unsigned d, int h = 0, int mi = 0, int s = 0) {
    return gendergap::days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

}  // namespace testing
