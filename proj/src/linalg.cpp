#include "hroot/linalg.hpp"

#include <cmath>

namespace hroot {

Matrix sip(int n) {
    Matrix q = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) q(i, n - 1 - i) = 1.0;
    return q;
}

Matrix jordan_block(int n, Complex lambda) {
    Matrix j = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        j(i, i) = lambda;
        if (i + 1 < n) j(i, i + 1) = 1.0;
    }
    return j;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

Matrix direct_sum(const std::vector<Matrix>& blocks) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out = Matrix::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

Matrix matrix_power(const Matrix& a, int m) {
    Matrix result = Matrix::Identity(a.rows(), a.cols());
    Matrix base = a;
    while (m > 0) {
        if (m & 1) result = result * base;
        m >>= 1;
        if (m > 0) base = base * base;
    }
    return result;
}

double frobenius(const Matrix& a) { return a.norm(); }

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

bool is_finite(const Matrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

bool is_upper_triangular(const Matrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = j + 1; i < a.rows(); ++i)
            if (a(i, j) != Complex(0.0)) return false;
    return true;
}

Matrix null_space(const Matrix& a, double threshold) {
    const Eigen::Index n = a.cols();
    if (a.rows() == 0) return Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

Matrix range_basis(const Matrix& a, double threshold) {
    if (a.cols() == 0) return Matrix(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++rank;
    return svd.matrixU().leftCols(rank);
}

}  // namespace hroot
