#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bm {

// Dense row-major matrix for the small (m <= 4 channels, Gram checks <= 24x24)
// matrices this project needs. Not a general linear-algebra library.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, fill) {}

    static Mat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }
    std::span<const double> data() const { return a_; }
    std::span<double> data() { return a_; }

    Mat transposed() const;
    double max_abs() const;
    bool all_finite() const;

    friend Mat operator*(const Mat& a, const Mat& b);
    Mat& operator+=(const Mat& o);
    Mat& operator*=(double c);

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

// Symmetric eigendecomposition by cyclic Jacobi sweeps. Returns eigenvalues in
// ascending order; columns of `vectors` are the matching eigenvectors.
struct EigenSym {
    std::vector<double> values;
    Mat vectors;
};
EigenSym eigh(const Mat& sym);

double min_eigenvalue(const Mat& sym);

// Symmetric square root / inverse square root via eigh. Eigenvalues below
// `floor_value` are clamped (inverse root) or floored at zero (root).
Mat sym_sqrt(const Mat& sym);
Mat sym_inv_sqrt(const Mat& sym, double floor_value = 1e-14);

// 2-norm condition number of a symmetric PSD matrix.
double sym_cond(const Mat& sym);

// Cholesky factor L (lower) of a PSD matrix; pivots below -tol throw, pivots in
// [-tol, 0] are treated as zero so rank-deficient PSD inputs are accepted.
Mat cholesky_psd(const Mat& sym, double tol = 1e-10);

Mat mat_vec_outer(std::span<const double> u, std::span<const double> v);
void mat_vec_mul(const Mat& a, std::span<const double> x, std::span<double> out);

std::string format_matrix(const Mat& m);

}  // namespace bm
