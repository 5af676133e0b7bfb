#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pmtol {

// Shortest round-trip decimal form (std::to_chars), so exported numbers
// re-import bit-for-bit.
std::string num_str(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Minimal CSV line splitter for the simple comma-separated schemas used
// here (no quoting).
std::vector<std::string> split_csv_line(const std::string& line);

// FNV-1a 64-bit over a file's bytes, as "fnv1a64:<hex>"; used in run
// manifests to fingerprint inputs.
std::string file_fingerprint(const std::string& path);

}  // namespace pmtol
