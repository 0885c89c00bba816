#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace jurisrank {

/// Incremental 64-bit FNV-1a. Used for stable identifiers, per-instance
/// seeds and file digests; the values are part of the on-disk formats and
/// must not change between releases.
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  Fnv1a64& update_u64(std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) {
      state_ ^= static_cast<unsigned char>(v >> (8 * i));
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  // Field separator so that ("ab","c") and ("a","bc") differ.
  Fnv1a64& field(std::string_view bytes) noexcept {
    update(bytes);
    return update(std::string_view("\x1f", 1));
  }

  std::uint64_t value() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  return Fnv1a64{}.update(bytes).value();
}

std::string to_hex(std::uint64_t v);

}  // namespace jurisrank
