#include "bmfield/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "bmfield/errors.hpp"

namespace bm {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Mat::max_abs() const {
    double v = 0.0;
    for (double x : a_) v = std::max(v, std::abs(x));
    return v;
}

bool Mat::all_finite() const {
    for (double x : a_)
        if (!std::isfinite(x)) return false;
    return true;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Mat& Mat::operator*=(double c) {
    for (double& x : a_) x *= c;
    return *this;
}

EigenSym eigh(const Mat& sym) {
    const int n = sym.rows();
    if (n != sym.cols()) throw DimensionMismatch("eigh needs a square matrix");
    Mat a = sym;
    Mat v = Mat::identity(n);
    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    const double tol = (scale > 0 ? scale : 1.0) * 1e-15 * n;
    for (int sweep = 0; sweep < 64 && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= tol * 1e-2) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    EigenSym out;
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = a(i, i);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return out.values[x] < out.values[y]; });
    EigenSym sorted;
    sorted.values.resize(n);
    sorted.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        sorted.values[j] = out.values[order[j]];
        for (int i = 0; i < n; ++i) sorted.vectors(i, j) = v(i, order[j]);
    }
    return sorted;
}

double min_eigenvalue(const Mat& sym) { return eigh(sym).values.front(); }

namespace {
Mat apply_spectral(const Mat& sym, double (*fn)(double, double), double param) {
    const EigenSym e = eigh(sym);
    const int n = sym.rows();
    Mat out(n, n);
    for (int k = 0; k < n; ++k) {
        const double f = fn(e.values[k], param);
        if (f == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) += f * e.vectors(i, k) * e.vectors(j, k);
    }
    return out;
}
}  // namespace

Mat sym_sqrt(const Mat& sym) {
    return apply_spectral(
        sym, [](double lambda, double) { return lambda > 0 ? std::sqrt(lambda) : 0.0; }, 0.0);
}

Mat sym_inv_sqrt(const Mat& sym, double floor_value) {
    return apply_spectral(
        sym,
        [](double lambda, double floor_v) {
            return 1.0 / std::sqrt(std::max(lambda, floor_v));
        },
        floor_value);
}

double sym_cond(const Mat& sym) {
    const EigenSym e = eigh(sym);
    const double lo = e.values.front(), hi = e.values.back();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

Mat cholesky_psd(const Mat& sym, double tol) {
    const int n = sym.rows();
    Mat l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = sym(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d < -tol) throw ModelError("matrix is not positive semidefinite (pivot " +
                                       std::to_string(d) + ")");
        d = std::max(d, 0.0);
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = sym(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = l(j, j) > 0 ? s / l(j, j) : 0.0;
        }
    }
    return l;
}

Mat mat_vec_outer(std::span<const double> u, std::span<const double> v) {
    Mat m(int(u.size()), int(v.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(int(i), int(j)) = u[i] * v[j];
    return m;
}

void mat_vec_mul(const Mat& a, std::span<const double> x, std::span<double> out) {
    if (int(x.size()) != a.cols() || int(out.size()) != a.rows())
        throw DimensionMismatch("mat_vec_mul shape mismatch");
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        out[i] = s;
    }
}

std::string format_matrix(const Mat& m) {
    std::string out;
    char buf[64];
    for (int i = 0; i < m.rows(); ++i) {
        out += i == 0 ? "[" : " ";
        for (int j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "% .6g", m(i, j));
            out += buf;
            if (j + 1 < m.cols()) out += ", ";
        }
        out += i + 1 < m.rows() ? "\n" : "]";
    }
    return out;
}

}  // namespace bm
