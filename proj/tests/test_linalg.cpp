#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "detperm/errors.hpp"
#include "detperm/linalg.hpp"
#include "detperm/matrix.hpp"
#include "detperm/rng.hpp"
#include "detperm/sampling.hpp"

using namespace detperm;

TEST_CASE("lu determinant on hand-checked matrices") {
  const auto id = log_det_lu(DenseMatrix::identity(3));
  CHECK(id.sign == 1);
  CHECK(id.log_abs == doctest::Approx(0.0).epsilon(1e-15));

  // det [[1,2],[3,4]] = -2
  const auto d = log_det_lu(DenseMatrix(2, 2, {1, 2, 3, 4}));
  CHECK(d.sign == -1);
  CHECK(d.log_abs == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  const auto diag = log_det_lu(DenseMatrix::diagonal({2, -3, 4}));
  CHECK(diag.sign == -1);
  CHECK(diag.log_abs == doctest::Approx(std::log(24.0)).epsilon(1e-14));

  CHECK(log_det_lu(DenseMatrix::constant(2, 2, 1.0)).is_zero());
  CHECK(log_det_lu(DenseMatrix::constant(3, 3, 0.0)).is_zero());
  CHECK_THROWS_AS(log_det_lu(DenseMatrix(2, 3)), DomainError);
}

TEST_CASE("lu sign follows row swaps") {
  // Permutation matrix for (0 1): det = -1.
  const DenseMatrix swap(2, 2, {0, 1, 1, 0});
  const auto d = log_det_lu(swap);
  CHECK(d.sign == -1);
  CHECK(d.log_abs == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("row distances on orthogonal and diagonal input") {
  const auto id = log_det_distances(DenseMatrix::identity(3));
  REQUIRE(id.distances.d.size() == 3);
  for (double di : id.distances.d) CHECK(di == doctest::Approx(1.0));
  CHECK(id.det.sign == 1);

  const auto diag = log_det_distances(DenseMatrix::diagonal({2, 3}));
  CHECK(diag.distances.d[0] == doctest::Approx(2.0));
  CHECK(diag.distances.d[1] == doctest::Approx(3.0));
  CHECK(diag.det.log_abs == doctest::Approx(std::log(6.0)).epsilon(1e-14));

  CHECK(log_det_distances(DenseMatrix::constant(2, 2, 1.0)).det.is_zero());
}

TEST_CASE("rectangular distances need rows <= cols") {
  const DenseMatrix wide(2, 3, {1, 0, 0, 0, 2, 0});
  const auto r = log_det_distances(wide);
  CHECK(r.distances.d[0] == doctest::Approx(1.0));
  CHECK(r.distances.d[1] == doctest::Approx(2.0));
  CHECK_THROWS_AS(log_det_distances(wide.transposed()), DomainError);
}

TEST_CASE("lu and distance routes agree on random square matrices") {
  auto engine = PhiloxEngine(SeededSource{2024, 0});
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> entries(50 * 50);
    for (double& v : entries) v = engine.next_normal();
    const DenseMatrix a(50, 50, entries);
    const auto lu = log_det_lu(a);
    const auto dist = log_det_distances(a);
    REQUIRE(lu.sign != 0);
    CHECK(dist.det.sign == lu.sign);
    CHECK(dist.det.log_abs ==
          doctest::Approx(lu.log_abs).epsilon(1e-8));
  }
}

TEST_CASE("singular values on known matrices") {
  const auto id = singular_values(DenseMatrix::identity(3));
  REQUIRE(id.size() == 3);
  for (double s : id) CHECK(s == doctest::Approx(1.0));

  const auto diag = singular_values(DenseMatrix::diagonal({3, -4}));
  CHECK(diag[0] == doctest::Approx(3.0));
  CHECK(diag[1] == doctest::Approx(4.0));
  CHECK(std::is_sorted(diag.begin(), diag.end()));

  // Product of singular values equals |det| = 2.
  const auto sv = singular_values(DenseMatrix(2, 2, {1, 2, 3, 4}));
  CHECK(sv[0] * sv[1] == doctest::Approx(2.0).epsilon(1e-10));

  const auto rank1 = singular_values(DenseMatrix::constant(3, 3, 1.0));
  CHECK(rank1[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rank1[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rank1[2] == doctest::Approx(3.0));
}

TEST_CASE("singular values are invariant under row permutation") {
  auto engine = PhiloxEngine(SeededSource{7, 0});
  std::vector<double> entries(6 * 6);
  for (double& v : entries) v = engine.next_normal();
  const DenseMatrix a(6, 6, entries);
  DenseMatrix b = a;
  for (std::size_t j = 0; j < 6; ++j) std::swap(b(0, j), b(3, j));
  const auto sa = singular_values(a);
  const auto sb = singular_values(b);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(sa[i] == doctest::Approx(sb[i]).epsilon(1e-12));
  }
}

TEST_CASE("inverse-square sums match between distances and spectrum") {
  const auto id3 = distance_identity_check(DenseMatrix::identity(3));
  CHECK(id3.first == doctest::Approx(3.0));
  CHECK(id3.second == doctest::Approx(3.0));

  const auto diag = distance_identity_check(DenseMatrix::diagonal({2, 5}));
  CHECK(diag.first == doctest::Approx(0.25 + 0.04));
  CHECK(diag.second == doctest::Approx(diag.first).epsilon(1e-12));

  // Random sign matrices: the identity holds to rounding error even
  // though individual d_i and sigma_i differ.
  const auto source = SeededSource{99, 5};
  const DenseMatrix square = sample_matrix(EntryModel::rademacher(), 30, source);
  const auto sq = distance_identity_check(square);
  CHECK(sq.first == doctest::Approx(sq.second).epsilon(1e-8));

  auto engine = PhiloxEngine(SeededSource{99, 6});
  std::vector<double> entries(30 * 60);
  for (double& v : entries) v = engine.next_sign();
  const DenseMatrix rect(30, 60, entries);
  const auto rel = distance_identity_check(rect);
  CHECK(rel.first == doctest::Approx(rel.second).epsilon(1e-8));
}

TEST_CASE("identity check rejects rank-deficient input") {
  CHECK_THROWS_AS(distance_identity_check(DenseMatrix::constant(2, 2, 1.0)),
                  DomainError);
  CHECK_THROWS_AS(distance_identity_check(DenseMatrix(3, 2)), DomainError);
}

TEST_CASE("rank tolerance scales with entries and size") {
  const DenseMatrix small = DenseMatrix::identity(3);
  const DenseMatrix big = DenseMatrix::constant(3, 3, 1e6);
  CHECK(rank_tolerance(big) == doctest::Approx(1e6 * rank_tolerance(small)));
  CHECK(rank_tolerance(small) > 0.0);
}
