// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/match/assignment.hpp"

#include "shapekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace shapekit::match {

namespace {

void require_rows_nonzero(const FeatureMatrix& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      fail(ErrorCode::DegenerateFeature,
           std::string(what) + " row " + std::to_string(i) + " has zero or non-finite norm");
    }
  }
}

void require_same_shape(const FeatureMatrix& views, const FeatureMatrix& queries) {
  if (views.rows() != queries.rows() || views.cols() != queries.cols()) {
    fail(ErrorCode::InvalidConfig, "view and query matrices differ in shape");
  }
}

// Shortest augmenting path with row/column potentials (1-based internally).
// Leaves u, v as an optimal dual: cost(i,j) - u[i] - v[j] >= 0.
void solve_potentials(const CostMatrix& cost, std::vector<std::size_t>& row_to_col,
                      std::vector<double>& u, std::vector<double>& v) {
  const std::size_t n = static_cast<std::size_t>(cost.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();
  u.assign(n + 1, 0.0);
  v.assign(n + 1, 0.0);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = col_owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur =
            cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] -
            v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[col_owner[j] - 1] = j - 1;
}

// Kuhn's augmenting search restricted to allowed edges and unlocked rows/cols.
bool augment(std::size_t row, const std::vector<std::vector<char>>& allowed,
             std::vector<std::size_t>& col_match, std::vector<char>& seen,
             const std::vector<char>& col_locked) {
  const std::size_t n = allowed.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (!allowed[row][j] || seen[j] || col_locked[j]) continue;
    seen[j] = 1;
    if (col_match[j] == n || augment(col_match[j], allowed, col_match, seen, col_locked)) {
      col_match[j] = row;
      return true;
    }
  }
  return false;
}

bool completes(std::size_t first_free_row, const std::vector<std::vector<char>>& allowed,
               const std::vector<char>& col_locked) {
  const std::size_t n = allowed.size();
  std::vector<std::size_t> col_match(n, n);
  for (std::size_t r = first_free_row; r < n; ++r) {
    std::vector<char> seen(n, 0);
    if (!augment(r, allowed, col_match, seen, col_locked)) return false;
  }
  return true;
}

}  // namespace

CostMatrix cosine_cost(const FeatureMatrix& views, const FeatureMatrix& queries) {
  require_same_shape(views, queries);
  require_rows_nonzero(views, "view");
  require_rows_nonzero(queries, "query");
  const Eigen::VectorXd vn = views.rowwise().norm();
  const Eigen::VectorXd qn = queries.rowwise().norm();
  CostMatrix cost(views.rows(), queries.rows());
  for (Eigen::Index i = 0; i < views.rows(); ++i) {
    for (Eigen::Index j = 0; j < queries.rows(); ++j) {
      cost(i, j) = 0.0 - views.row(i).dot(queries.row(j)) / (vn[i] * qn[j]);
    }
  }
  return cost;
}

Assignment hungarian(const CostMatrix& cost) {
  if (cost.rows() != cost.cols()) {
    fail(ErrorCode::InvalidCost, "cost matrix is not square");
  }
  if (!cost.allFinite()) fail(ErrorCode::InvalidCost, "cost matrix has non-finite entries");

  const std::size_t n = static_cast<std::size_t>(cost.rows());
  Assignment result;
  if (n == 0) return result;

  std::vector<std::size_t> raw;
  std::vector<double> u, v;
  solve_potentials(cost, raw, u, v);

  // Every optimal permutation uses only edges with zero reduced cost under an
  // optimal dual, so the lexicographic minimum is searched in that subgraph.
  const double scale = 1.0 + cost.cwiseAbs().maxCoeff();
  const double tol = 1e-10 * scale * static_cast<double>(n);
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double reduced =
          cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - u[i + 1] - v[j + 1];
      tight[i][j] = reduced <= tol ? 1 : 0;
    }
    tight[i][raw[i]] = 1;
  }

  std::vector<char> col_locked(n, 0);
  result.sigma.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (std::size_t j = 0; j < n && !placed; ++j) {
      if (!tight[i][j] || col_locked[j]) continue;
      col_locked[j] = 1;
      if (completes(i + 1, tight, col_locked)) {
        result.sigma[i] = j;
        placed = true;
      } else {
        col_locked[j] = 0;
      }
    }
    if (!placed) {  // unreachable: raw is a perfect matching of tight edges
      result.sigma = raw;
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    result.total_cost +=
        cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(result.sigma[i]));
  }
  return result;
}

AlignmentLoss alignment_loss(const FeatureMatrix& views, const FeatureMatrix& queries,
                             std::span<const std::size_t> sigma) {
  require_same_shape(views, queries);
  const std::size_t n = static_cast<std::size_t>(views.rows());
  if (sigma.size() != n) fail(ErrorCode::InvalidConfig, "sigma length differs from view count");
  std::vector<char> hit(n, 0);
  for (std::size_t j : sigma) {
    if (j >= n || hit[j]) fail(ErrorCode::InvalidConfig, "sigma is not a permutation");
    hit[j] = 1;
  }
  require_rows_nonzero(views, "view");
  require_rows_nonzero(queries, "query");

  AlignmentLoss out;
  out.grad_queries = FeatureMatrix::Zero(queries.rows(), queries.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = views.row(static_cast<Eigen::Index>(i));
    const auto q = queries.row(static_cast<Eigen::Index>(sigma[i]));
    const double na = a.norm();
    const double nq = q.norm();
    const double cos = a.dot(q) / (na * nq);
    out.loss += 1.0 - cos;
    // d(-cos)/dq = -(a/|a| - cos * q/|q|) / |q|
    out.grad_queries.row(static_cast<Eigen::Index>(sigma[i])) = -(a / na - cos * q / nq) / nq;
  }
  return out;
}

}  // namespace shapekit::match
