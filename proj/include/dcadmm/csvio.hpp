#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dcadmm {

// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);
std::string file_hash_hex(const std::string& path);  // throws if unreadable

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Minimal CSV splitting; fields in this project never contain commas.
std::vector<std::vector<std::string>> parse_csv(const std::string& content);

}  // namespace dcadmm
