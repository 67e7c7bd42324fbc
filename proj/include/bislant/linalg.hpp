#pragma once

// Small dense linear algebra and finite-difference differentiation.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace bislant {

/// Dense real vector (ambient vectors have length 2n, parameter vectors length m).
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t n, double fill = 0.0) : data_(n, fill) {}
    Vec(std::initializer_list<double> values) : data_(values) {}
    explicit Vec(std::vector<double> values) : data_(std::move(values)) {}

    static Vec unit(std::size_t n, std::size_t k);

    std::size_t size() const noexcept { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }
    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    Vec& operator+=(const Vec& o);
    Vec& operator-=(const Vec& o);
    Vec& operator*=(double s);

    /// Euclidean norm.
    double norm() const;
    double max_abs() const;

    friend bool operator==(const Vec&, const Vec&) = default;

private:
    std::vector<double> data_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator-(Vec a);
Vec operator*(double s, Vec a);
Vec operator*(Vec a, double s);
double dot(const Vec& a, const Vec& b);

/// Row-major dense matrix.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n);
    /// Matrix whose columns are the given vectors.
    static Mat from_columns(std::span<const Vec> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec column(std::size_t j) const;
    Mat transpose() const;
    double frobenius() const;
    double max_abs() const;

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Vec operator*(const Mat& a, const Vec& v);

/// A symmetric positive-definite bilinear form at a fixed point.
/// Conformal forms (s times Euclidean) are stored as a scalar.
class InnerProduct {
public:
    static InnerProduct euclidean(std::size_t dim) { return conformal(dim, 1.0); }
    static InnerProduct conformal(std::size_t dim, double scale);
    static InnerProduct from_gram(Mat gram);

    double operator()(const Vec& u, const Vec& v) const;
    double norm(const Vec& u) const;
    std::size_t dim() const noexcept { return dim_; }
    /// Conformal factor; meaningful only when is_conformal().
    double scale() const noexcept { return scale_; }
    bool is_conformal() const noexcept { return gram_.rows() == 0; }

private:
    std::size_t dim_ = 0;
    double scale_ = 1.0;
    Mat gram_;
};

/// Tolerances threaded through every check.
struct ToleranceProfile {
    double tol_first = 1e-6;   // identities using at most first derivatives
    double tol_second = 1e-4;  // identities using second derivatives
    double tol_eig = 1e-6;     // eigenvalue spread for pointwise slant
    double fd_step = 1e-5;     // relative finite-difference step

    /// Throws NumericalError unless all values are positive and tol_second >= tol_first.
    void validate() const;
};

using FieldSampler = std::function<Vec(const Vec&)>;

/// Modified Gram-Schmidt with one reorthogonalization pass.
std::vector<Vec> gram_schmidt(std::span<const Vec> vectors, const InnerProduct& ip);

/// Gram-Schmidt that also returns R (upper triangular) with input_k = sum_j R(j,k) basis_j.
struct Orthonormalization {
    std::vector<Vec> basis;
    Mat r;
};
Orthonormalization orthonormalize(std::span<const Vec> vectors, const InnerProduct& ip);

/// Inverse of an upper-triangular matrix.
Mat invert_upper(const Mat& r);

struct SymEigen {
    std::vector<double> values;  // ascending
    Mat vectors;                 // eigenvectors as columns
};

/// Cyclic Jacobi eigensolver for symmetric matrices up to 16x16.
SymEigen sym_eigen(const Mat& a);

/// Orthogonal projection onto the span of an ip-orthonormal basis.
Vec project(const Vec& v, std::span<const Vec> basis, const InnerProduct& ip);

/// Central difference along `dir` with one Richardson step (h and h/2),
/// h = fd_step * (1 + |at|).
Vec fd_directional(const FieldSampler& field, const Vec& at, const Vec& dir,
                   const ToleranceProfile& profile);

/// Max deviation of the ip-Gram matrix of `basis` from the identity.
double gram_residual(std::span<const Vec> basis, const InnerProduct& ip);

std::string to_string(const Vec& v);

} // namespace bislant
