#pragma once

#include <cstdint>
#include <cstring>
#include <string>

namespace dtwx {

// 64-bit FNV-1a, used for result digests that must be bit-stable across
// optimization variants, worker counts, and runs.
class Digest {
public:
  void bytes(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ull;
    }
  }
  void u64(uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  uint64_t value() const { return state_; }

private:
  uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace dtwx
