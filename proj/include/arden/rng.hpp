#pragma once

#include <array>
#include <cstdint>

namespace arden {

/// xoshiro256** seeded through splitmix64, with Box-Muller normals.
///
/// Both algorithms are fully specified integer recipes, so a seed yields the
/// same stream on every platform (up to libm differences in log/sin/cos).
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::array<std::uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace arden
