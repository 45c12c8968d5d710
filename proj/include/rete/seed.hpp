#pragma once

#include <cstdint>
#include <string_view>

namespace rete {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over a component tag.
constexpr std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for one RNG stream: root seed, component tag, then any number of
/// integer coordinates (user, step, sampler index, ...), each folded in with mix64.
template <class... Ints>
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, Ints... coords) {
  std::uint64_t s = mix64(root ^ tag_hash(tag));
  ((s = mix64(s ^ static_cast<std::uint64_t>(coords))), ...);
  return s;
}

}  // namespace rete
