#include "doctest.h"

#include <cmath>

#include "arden/error.hpp"
#include "arden/signature.hpp"
#include "support/oracles.hpp"

using namespace arden;

namespace {

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Vector level(const SignatureVector& s, std::size_t m) {
  return s.coefficients.segment(static_cast<Eigen::Index>(s.level_offset(m)),
                                static_cast<Eigen::Index>(s.level_size(m)));
}

}  // namespace

TEST_CASE("dimension formula") {
  for (std::size_t k : {2u, 3u}) {
    for (std::size_t d = 1; d <= 4; ++d) {
      std::size_t expected = 0, power = 1;
      for (std::size_t m = 0; m <= d; ++m, power *= k) expected += power;
      CHECK(signature_dimension(k, d) == expected);
      CHECK(signature_dimension(k, d) == (static_cast<std::size_t>(std::pow(k, d + 1)) - 1) / (k - 1));
    }
  }
  CHECK(signature_dimension(2, 2) == 7);
  CHECK(signature_dimension(1, 3) == 4);
}

TEST_CASE("word order is grade then lexicographic") {
  const auto words = oracle::all_words(3, 3);
  for (std::size_t i = 0; i < words.size(); ++i) {
    CHECK(word_index(words[i], 3) == i);
  }
  const std::size_t bad[] = {0, 3};
  CHECK_THROWS_AS(word_index(bad, 3), Error);
}

TEST_CASE("constant path has trivial signature") {
  const Matrix pts = Matrix::Constant(2, 3, 1.5);
  const SignatureVector s = signature(GeometricPath(pts), 3);
  CHECK(s.coefficients[0] == 1.0);
  CHECK(max_abs(s.coefficients.tail(s.coefficients.size() - 1)) == 0.0);
}

TEST_CASE("single segment is the truncated tensor exponential") {
  Matrix pts(2, 2);
  pts << 0.5, -1.0, 2.0, 1.5;
  const Vector delta = (pts.row(1) - pts.row(0)).transpose();
  const SignatureVector s = signature(GeometricPath(pts), 3);
  CHECK(s.coefficients.size() == 15);
  CHECK(max_abs(level(s, 1) - delta) < 1e-15);
  const Vector l2 = level(s, 2);
  CHECK(std::abs(l2[0] - delta[0] * delta[0] / 2) < 1e-12);  // word 11
  CHECK(std::abs(l2[1] - delta[0] * delta[1] / 2) < 1e-12);  // word 12
  CHECK(std::abs(l2[2] - delta[1] * delta[0] / 2) < 1e-12);  // word 21
  CHECK(std::abs(l2[3] - delta[1] * delta[1] / 2) < 1e-12);  // word 22
  const Vector l3 = level(s, 3);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c) {
        const std::size_t w[] = {a, b, c};
        const double want = delta[a] * delta[b] * delta[c] / 6;
        CHECK(std::abs(s.coefficients[word_index(w, 2)] - want) < 1e-12);
        CHECK(std::abs(l3[a * 4 + b * 2 + c] - want) < 1e-12);
      }
}

TEST_CASE("two-segment path against the iterated-integral oracle") {
  Matrix pts(3, 2);
  pts << 0, 0, 1, 2, -0.5, 3;
  const Vector got = signature(GeometricPath(pts), 3).coefficients;
  const Vector want = oracle::brute_force_signature(pts, 3);
  CHECK(max_abs(got - want) < 1e-12);
}

TEST_CASE("random paths against the iterated-integral oracle") {
  oracle::Gen g(51);
  for (int trial = 0; trial < 60; ++trial) {
    const auto k = static_cast<Eigen::Index>(g.index(1, 3));
    const auto m = static_cast<Eigen::Index>(g.index(2, 7));
    const std::size_t d = g.index(1, 4);
    const Matrix pts = g.normal_matrix(m, k);
    const Vector got = signature(GeometricPath(pts), d).coefficients;
    const Vector want = oracle::brute_force_signature(pts, d);
    CHECK(max_abs(got - want) < 1e-12 * std::max(1.0, max_abs(want)));
  }
}

TEST_CASE("signature identities on random paths") {
  oracle::Gen g(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto k = static_cast<Eigen::Index>(g.index(2, 3));
    const auto m = static_cast<Eigen::Index>(g.index(3, 8));
    const std::size_t d = g.index(2, 4);
    const Matrix pts = g.normal_matrix(m, k);
    const SignatureVector s = signature(GeometricPath(pts), d);
    CHECK(s.coefficients[0] == 1.0);
    CHECK(static_cast<std::size_t>(s.coefficients.size()) == signature_dimension(static_cast<std::size_t>(k), d));

    // Level 1 is the total displacement.
    const Vector disp = (pts.row(m - 1) - pts.row(0)).transpose();
    CHECK(max_abs(level(s, 1) - disp) < 1e-13 * std::max(1.0, max_abs(disp)));

    // Symmetric part of level 2 is outer(S1, S1) / 2.
    const Vector l2 = level(s, 2);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) {
        const double sym = 0.5 * (l2[a * k + b] + l2[b * k + a]);
        CHECK(std::abs(sym - 0.5 * disp[a] * disp[b]) < 1e-12 * std::max(1.0, disp.squaredNorm()));
      }
    }

    // Chen: splitting at any interior point and multiplying reproduces the whole.
    const auto cut = static_cast<Eigen::Index>(g.index(1, static_cast<std::size_t>(m - 2)));
    const SignatureVector left = signature(GeometricPath(pts.topRows(cut + 1)), d);
    const SignatureVector right = signature(GeometricPath(pts.bottomRows(m - cut)), d);
    const Vector glued = chen_product(left, right).coefficients;
    CHECK(max_abs(glued - s.coefficients) < 1e-12 * std::max(1.0, max_abs(s.coefficients)));

    // Scaling multiplies words of length n by c^n.
    const double c = g.uniform(0.5, 2.0);
    const SignatureVector scaled = signature(GeometricPath(c * pts), d);
    for (std::size_t n = 0; n <= d; ++n) {
      const Vector want = std::pow(c, static_cast<double>(n)) * level(s, n);
      CHECK(max_abs(level(scaled, n) - want) < 1e-12 * std::max(1.0, max_abs(want)));
    }

    // A collinear midpoint changes nothing.
    Matrix refined(m + 1, k);
    refined.topRows(cut + 1) = pts.topRows(cut + 1);
    refined.row(cut + 1) = 0.3 * pts.row(cut) + 0.7 * pts.row(cut + 1);
    refined.bottomRows(m - cut - 1) = pts.bottomRows(m - cut - 1);
    const Vector mid = signature(GeometricPath(refined), d).coefficients;
    CHECK(max_abs(mid - s.coefficients) < 1e-12 * std::max(1.0, max_abs(s.coefficients)));
  }
}

TEST_CASE("path validation") {
  try {
    GeometricPath p(Matrix::Zero(1, 2));
    FAIL("single point accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PathTooShort);
  }
}

TEST_CASE("window to path construction") {
  const GeometricPath ones = embed_to_path(Vector::Ones(4));
  CHECK(ones.points().col(1) == Vector::LinSpaced(4, 1, 4));
  CHECK(ones.points().col(0) == Vector::Ones(4));

  const GeometricPath two = embed_to_path((Vector(2) << 2, -2).finished());
  CHECK(two.points() == (Matrix(2, 2) << 2, 2, -2, 0).finished());

  try {
    embed_to_path(Vector::Ones(1));
    FAIL("r = 1 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmbeddingTooShort);
  }

  oracle::Gen g(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector window = g.normal_vector(static_cast<Eigen::Index>(g.index(2, 8)));
    const SignatureVector s = signature(embed_to_path(window), 2);
    // Letter 2 follows the running sum, whose displacement omits the first value.
    CHECK(std::abs(s.coefficients[2] - (window.sum() - window[0])) < 1e-12 * std::max(1.0, window.cwiseAbs().sum()));
    CHECK(std::abs(s.coefficients[1] - (window[window.size() - 1] - window[0])) < 1e-13 * std::max(1.0, window.cwiseAbs().maxCoeff()));

    const Vector newest_first = window.reverse();
    CHECK(delay_to_path(newest_first).points() == embed_to_path(window).points());
  }
}
