#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hroot {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

/// Backward identity (standard involutionary permutation) of order n.
Matrix sip(int n);

/// Upper bidiagonal Jordan block J_n(lambda).
Matrix jordan_block(int n, Complex lambda);

Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix direct_sum(const std::vector<Matrix>& blocks);

/// Repeated squaring; m >= 0.
Matrix matrix_power(const Matrix& a, int m);

double frobenius(const Matrix& a);

/// ||num|| / ||den||, falling back to the absolute value of ||num|| when den is zero.
double relative(double num, double den);

bool is_finite(const Matrix& a);

/// True when every entry strictly below the diagonal is exactly zero.
bool is_upper_triangular(const Matrix& a);

/// Orthonormal basis of the numerical null space of a: right singular vectors
/// whose singular value is <= threshold.
Matrix null_space(const Matrix& a, double threshold);

/// Orthonormal basis of the column span of a, using singular values > threshold.
Matrix range_basis(const Matrix& a, double threshold);

}  // namespace hroot
