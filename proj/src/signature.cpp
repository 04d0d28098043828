#include "arden/signature.hpp"

#include "arden/error.hpp"

namespace arden {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

SignatureVector unit_signature(std::size_t alphabet, std::size_t depth) {
  SignatureVector s{depth, alphabet, Vector::Zero(static_cast<Eigen::Index>(signature_dimension(alphabet, depth)))};
  s.coefficients[0] = 1.0;
  return s;
}

}  // namespace

GeometricPath::GeometricPath(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 2) fail(ErrorKind::PathTooShort, "a path needs at least two points");
  require(points_.cols() >= 1, ErrorKind::InvalidArgument, "path dimension must be >= 1");
  if (!points_.allFinite()) fail(ErrorKind::NonFinite, "path contains NaN or Inf");
}

std::size_t signature_dimension(std::size_t alphabet, std::size_t depth) {
  require(alphabet >= 1, ErrorKind::InvalidArgument, "alphabet must be >= 1");
  if (alphabet == 1) return depth + 1;
  return (ipow(alphabet, depth + 1) - 1) / (alphabet - 1);
}

std::size_t SignatureVector::level_offset(std::size_t length) const {
  return length == 0 ? 0 : signature_dimension(alphabet, length - 1);
}

std::size_t SignatureVector::level_size(std::size_t length) const { return ipow(alphabet, length); }

std::size_t word_index(std::span<const std::size_t> word, std::size_t alphabet) {
  std::size_t within = 0;
  for (std::size_t letter : word) {
    if (letter >= alphabet) fail(ErrorKind::IndexOutOfRange, "letter outside alphabet");
    within = within * alphabet + letter;
  }
  const std::size_t offset = word.empty() ? 0 : signature_dimension(alphabet, word.size() - 1);
  return offset + within;
}

SignatureVector segment_signature(const Vector& increment, std::size_t depth) {
  const auto k = static_cast<std::size_t>(increment.size());
  require(k >= 1, ErrorKind::InvalidArgument, "increment must be non-empty");
  SignatureVector s = unit_signature(k, depth);
  // Level m is Delta^{(x) m} / m!, built as level(m-1) (x) Delta / m.
  for (std::size_t m = 1; m <= depth; ++m) {
    const std::size_t prev = s.level_offset(m - 1);
    const std::size_t cur = s.level_offset(m);
    const std::size_t prev_size = s.level_size(m - 1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t w = 0; w < prev_size; ++w) {
      const double base = s.coefficients[static_cast<Eigen::Index>(prev + w)] * inv_m;
      for (std::size_t a = 0; a < k; ++a) {
        s.coefficients[static_cast<Eigen::Index>(cur + w * k + a)] = base * increment[static_cast<Eigen::Index>(a)];
      }
    }
  }
  return s;
}

SignatureVector chen_product(const SignatureVector& left, const SignatureVector& right) {
  require(left.alphabet == right.alphabet && left.depth == right.depth,
          ErrorKind::InvalidArgument, "signatures differ in alphabet or depth");
  const std::size_t k = left.alphabet;
  SignatureVector out = unit_signature(k, left.depth);
  out.coefficients[0] = left.coefficients[0] * right.coefficients[0];
  for (std::size_t m = 1; m <= left.depth; ++m) {
    const std::size_t out_off = out.level_offset(m);
    for (std::size_t i = 0; i <= m; ++i) {
      const std::size_t j = m - i;
      const std::size_t l_off = left.level_offset(i), l_size = left.level_size(i);
      const std::size_t r_off = right.level_offset(j), r_size = right.level_size(j);
      for (std::size_t u = 0; u < l_size; ++u) {
        const double lu = left.coefficients[static_cast<Eigen::Index>(l_off + u)];
        if (lu == 0.0) continue;
        for (std::size_t v = 0; v < r_size; ++v) {
          out.coefficients[static_cast<Eigen::Index>(out_off + u * r_size + v)] +=
              lu * right.coefficients[static_cast<Eigen::Index>(r_off + v)];
        }
      }
    }
  }
  return out;
}

SignatureVector signature(const GeometricPath& path, std::size_t depth) {
  require(depth >= 1, ErrorKind::InvalidArgument, "signature depth must be >= 1");
  const Matrix& pts = path.points();
  SignatureVector s = unit_signature(path.dimension(), depth);
  for (Eigen::Index i = 0; i + 1 < pts.rows(); ++i) {
    const Vector increment = (pts.row(i + 1) - pts.row(i)).transpose();
    s = chen_product(s, segment_signature(increment, depth));
  }
  return s;
}

GeometricPath embed_to_path(const Vector& window) {
  if (window.size() < 2) fail(ErrorKind::EmbeddingTooShort, "path construction needs r >= 2");
  Matrix points(window.size(), 2);
  double running = 0.0;
  for (Eigen::Index i = 0; i < window.size(); ++i) {
    running += window[i];
    points(i, 0) = window[i];
    points(i, 1) = running;
  }
  return GeometricPath(std::move(points));
}

GeometricPath delay_to_path(const Vector& delay_embedding) {
  return embed_to_path(delay_embedding.reverse());
}

}  // namespace arden
