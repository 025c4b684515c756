#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace molliclt {

// Write to a sibling temp file, then rename over the target.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace molliclt
