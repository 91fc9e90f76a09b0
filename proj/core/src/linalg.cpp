#include "detperm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "detperm/errors.hpp"
#include "detperm/stats.hpp"

namespace detperm {

double rank_tolerance(const DenseMatrix& a) {
  return 1e-12 * a.max_abs() *
         static_cast<double>(std::max(a.rows(), a.cols()));
}

LogSignedValue log_det_lu(const DenseMatrix& a) {
  if (!a.is_square()) {
    throw DomainError("determinant requires a square matrix");
  }
  const std::size_t n = a.rows();
  const double tol = rank_tolerance(a);
  std::vector<double> w(a.entries());
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return w[i * n + j];
  };

  int sign = 1;
  NeumaierSum log_abs;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::fabs(at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::fabs(at(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (best <= tol) return LogSignedValue::zero();
    if (pivot != k) {
      for (std::size_t j = k; j < n; ++j) {
        std::swap(at(k, j), at(pivot, j));
      }
      sign = -sign;
    }
    const double p = at(k, k);
    if (p < 0.0) sign = -sign;
    log_abs.add(std::log(std::fabs(p)));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = at(i, k) / p;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) {
        at(i, j) -= factor * at(k, j);
      }
    }
  }
  return LogSignedValue::from_log(sign, log_abs.value());
}

namespace {

// Strips the components of `work` along every basis vector, twice (the
// second pass removes what rounding left behind), and returns the residual
// norm.
double mgs_residual_norm(std::vector<double>& work,
                         const std::vector<std::vector<double>>& basis) {
  const std::size_t n = work.size();
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      NeumaierSum dot;
      for (std::size_t j = 0; j < n; ++j) dot.add(q[j] * work[j]);
      const double c = dot.value();
      for (std::size_t j = 0; j < n; ++j) work[j] -= c * q[j];
    }
  }
  NeumaierSum norm2;
  for (double v : work) norm2.add(v * v);
  return std::sqrt(norm2.value());
}

}  // namespace

DistanceDeterminant log_det_distances(const DenseMatrix& a) {
  if (a.rows() > a.cols()) {
    throw DomainError("row distances require rows <= cols");
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double tol = rank_tolerance(a);

  std::vector<std::vector<double>> basis;  // orthonormal, spans prior rows
  basis.reserve(m);
  std::vector<double> d(m, 0.0);
  std::vector<double> work(n);

  for (std::size_t i = 0; i < m; ++i) {
    auto row = a.row(i);
    std::copy(row.begin(), row.end(), work.begin());
    const double dist = mgs_residual_norm(work, basis);
    d[i] = dist;
    if (dist > tol) {
      std::vector<double> q(n);
      for (std::size_t j = 0; j < n; ++j) q[j] = work[j] / dist;
      basis.push_back(std::move(q));
    }
  }

  bool singular = false;
  NeumaierSum log_prod;
  for (double dist : d) {
    if (dist <= tol) {
      singular = true;
      break;
    }
    log_prod.add(std::log(dist));
  }

  DistanceDeterminant result{LogSignedValue::zero(), RowDistances{std::move(d)}};
  if (singular) return result;

  int sign = 1;
  if (a.is_square()) {
    sign = log_det_lu(a).sign;
    if (sign == 0) {
      // The LU route saw a pivot collapse the distance route survived;
      // trust the distances for magnitude and keep an unsigned value.
      sign = 1;
    }
  }
  result.det = LogSignedValue::from_log(sign, log_prod.value());
  return result;
}

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    }
  }
  return m;
}

}  // namespace

std::vector<double> singular_values(const DenseMatrix& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const auto& sv = svd.singularValues();  // descending
  std::vector<double> out(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    out[static_cast<std::size_t>(sv.size() - 1 - i)] = sv(i);
  }
  return out;
}

std::pair<double, double> distance_identity_check(const DenseMatrix& a) {
  if (a.rows() > a.cols()) {
    throw DomainError("identity check requires rows <= cols");
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double tol = rank_tolerance(a);

  // d_i here is the distance from row i to the span of all the *other*
  // rows, not the preceding ones.  1/d_i equals the norm of column i of the
  // pseudo-inverse, which is what ties the sum to the singular values; the
  // sequential Gram-Schmidt distances satisfy a different (product)
  // identity and would not match.
  NeumaierSum lhs;
  std::vector<double> work(n);
  for (std::size_t target = 0; target < m; ++target) {
    std::vector<std::vector<double>> basis;
    basis.reserve(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == target) continue;
      auto row = a.row(i);
      std::copy(row.begin(), row.end(), work.begin());
      const double dist = mgs_residual_norm(work, basis);
      if (dist <= tol) {
        throw DomainError("matrix must have full row rank");
      }
      std::vector<double> q(n);
      for (std::size_t j = 0; j < n; ++j) q[j] = work[j] / dist;
      basis.push_back(std::move(q));
    }
    auto row = a.row(target);
    std::copy(row.begin(), row.end(), work.begin());
    const double d = mgs_residual_norm(work, basis);
    if (d <= tol) {
      throw DomainError("matrix must have full row rank");
    }
    lhs.add(1.0 / (d * d));
  }

  NeumaierSum rhs;
  for (double sigma : singular_values(a)) {
    if (sigma <= tol) {
      throw DomainError("matrix must have full row rank");
    }
    rhs.add(1.0 / (sigma * sigma));
  }
  return {lhs.value(), rhs.value()};
}

}  // namespace detperm
