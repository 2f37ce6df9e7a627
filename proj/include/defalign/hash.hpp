#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace defalign {

// FNV-1a, 64 bit. Stable across platforms and processes; used for cache file
// names and manifest input digests.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(std::uint64_t value);
std::string fnv1a64_hex(std::string_view data);

// Streaming digest over a file's bytes. Throws IoError if unreadable.
std::string file_digest_hex(const std::filesystem::path& path);

}  // namespace defalign
