#pragma once

#include <utility>
#include <vector>

#include "detperm/log_signed.hpp"
#include "detperm/matrix.hpp"

namespace detperm {

/// d[i] is the Euclidean distance from row i to the span of rows 0..i-1
/// (d[0] is the norm of row 0). For square A, the product of the d[i]
/// equals |det A|.
struct RowDistances {
  std::vector<double> d;
};

struct DistanceDeterminant {
  LogSignedValue det;
  RowDistances distances;
};

/// Distances or pivots below 1e-12 * max|entry| * n are treated as exact
/// zeros (standard backward-error scale).
double rank_tolerance(const DenseMatrix& a);

/// log|det A| with exact sign tracking, via row-pivoted Gaussian
/// elimination. Singular input returns the canonical zero.
LogSignedValue log_det_lu(const DenseMatrix& a);

/// log|det A| as the sum of log row distances, computed by twice-passed
/// modified Gram-Schmidt (one-pass Gram-Schmidt loses orthogonality and
/// corrupts the d_i). The sign comes from log_det_lu since distances are
/// unsigned. Works on rectangular m x n input with m <= n as well, where
/// it returns the m distances and an unsigned log-product.
DistanceDeterminant log_det_distances(const DenseMatrix& a);

/// Singular values sorted ascending; backward-stable SVD.
std::vector<double> singular_values(const DenseMatrix& a);

/// For full-row-rank m x n input with m <= n, returns
/// (sum d_i^{-2}, sum sigma_i^{-2}) where d_i is the distance from row i to
/// the span of the other m-1 rows. The two sides are equal in exact
/// arithmetic (both equal the squared Frobenius norm of the pseudo-inverse).
/// Rank-deficient input throws DomainError.
std::pair<double, double> distance_identity_check(const DenseMatrix& a);

}  // namespace detperm
