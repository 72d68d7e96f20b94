#pragma once

#include "cstar/algebra.hpp"

namespace cstar {

/// Numeric rank with a threshold relative to the largest singular value.
int numeric_rank(const Mat& m, double rank_tol);

/// Orthonormal basis of the column space (dim x rank).
Mat column_space_basis(const Mat& m, double rank_tol);

/// Orthonormal basis of the null space (dim x nullity).
Mat null_space_basis(const Mat& m, double rank_tol);

/// Largest distance from a column of b to the column space of a,
/// relative to the column's norm.
double containment_residual(const Mat& a, const Mat& b, double rank_tol);

/// col(a) == col(b) as subspaces, by stacked rank test.
bool same_column_space(const Mat& a, const Mat& b, double rank_tol);

}   // namespace cstar
