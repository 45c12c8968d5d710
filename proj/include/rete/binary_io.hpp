#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <type_traits>

#include "rete/error.hpp"

namespace rete {

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes, sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  static_assert(std::is_unsigned_v<T>);
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorCode::kFormat, "unexpected end of binary file");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

inline void put_f64(std::ostream& out, double value) {
  put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(value));
}

inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace rete
