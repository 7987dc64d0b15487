#pragma once

#include <filesystem>

namespace test_paths {

inline std::filesystem::path data() { return NKGOV_DATA_DIR; }
inline std::filesystem::path corpus() { return data() / "policies" / "corpus.json"; }
inline std::filesystem::path urllc() { return data() / "scenarios" / "urllc"; }

}  // namespace test_paths
