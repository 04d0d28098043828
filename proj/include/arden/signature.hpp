#pragma once

#include <cstddef>
#include <span>

#include "arden/numerics.hpp"

namespace arden {

/// Sample points of a piecewise-linear path in R^k, one point per row.
class GeometricPath {
 public:
  explicit GeometricPath(Matrix points);

  std::size_t num_points() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  const Matrix& points() const noexcept { return points_; }

 private:
  Matrix points_;
};

/// Truncated signature, graded by word length and lexicographic within a
/// level (letters 1..k). coefficients[0] is the empty word and always 1.
struct SignatureVector {
  std::size_t depth = 0;
  std::size_t alphabet = 0;
  Vector coefficients;

  // Start of the block of words of the given length.
  std::size_t level_offset(std::size_t length) const;
  std::size_t level_size(std::size_t length) const;
};

/// (k^(d+1) - 1) / (k - 1), or d + 1 when k == 1.
std::size_t signature_dimension(std::size_t alphabet, std::size_t depth);

/// Position of a word (0-based letters) inside the coefficient vector.
std::size_t word_index(std::span<const std::size_t> word, std::size_t alphabet);

/// Truncated tensor exponential of a single linear segment.
SignatureVector segment_signature(const Vector& increment, std::size_t depth);

/// Truncated tensor product; Chen's identity glues path signatures with it.
SignatureVector chen_product(const SignatureVector& left, const SignatureVector& right);

SignatureVector signature(const GeometricPath& path, std::size_t depth);

/// Two-column path: the window values (oldest first) and their running sum.
GeometricPath embed_to_path(const Vector& window);

/// Same path built from a newest-first delay vector (y_t, ..., y_{t-r+1}).
GeometricPath delay_to_path(const Vector& delay_embedding);

}  // namespace arden
