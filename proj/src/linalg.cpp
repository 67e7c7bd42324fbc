#include "bislant/linalg.hpp"

#include "bislant/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace bislant {

Vec Vec::unit(std::size_t n, std::size_t k)
{
    Vec v(n);
    v[k] = 1.0;
    return v;
}

Vec& Vec::operator+=(const Vec& o)
{
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

Vec& Vec::operator-=(const Vec& o)
{
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

Vec& Vec::operator*=(double s)
{
    for (auto& x : data_) {
        x *= s;
    }
    return *this;
}

double Vec::norm() const { return std::sqrt(dot(*this, *this)); }

double Vec::max_abs() const
{
    double m = 0.0;
    for (double x : data_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator-(Vec a) { return a *= -1.0; }
Vec operator*(double s, Vec a) { return a *= s; }
Vec operator*(Vec a, double s) { return a *= s; }

double dot(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

Mat Mat::identity(std::size_t n)
{
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Mat Mat::from_columns(std::span<const Vec> columns)
{
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    Mat m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            m(i, j) = columns[j][i];
        }
    }
    return m;
}

Vec Mat::column(std::size_t j) const
{
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        v[i] = (*this)(i, j);
    }
    return v;
}

Mat Mat::transpose() const
{
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double Mat::frobenius() const
{
    double s = 0.0;
    for (double x : data_) {
        s += x * x;
    }
    return std::sqrt(s);
}

double Mat::max_abs() const
{
    double m = 0.0;
    for (double x : data_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

Mat operator*(const Mat& a, const Mat& b)
{
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Mat operator+(const Mat& a, const Mat& b)
{
    Mat c = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) += b(i, j);
        }
    }
    return c;
}

Mat operator-(const Mat& a, const Mat& b) { return a + (-1.0) * b; }

Mat operator*(double s, const Mat& a)
{
    Mat c = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) *= s;
        }
    }
    return c;
}

Vec operator*(const Mat& a, const Vec& v)
{
    Vec r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * v[j];
        }
        r[i] = s;
    }
    return r;
}

InnerProduct InnerProduct::conformal(std::size_t dim, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw NumericalError("conformal inner product needs a positive finite scale");
    }
    InnerProduct ip;
    ip.dim_ = dim;
    ip.scale_ = scale;
    return ip;
}

InnerProduct InnerProduct::from_gram(Mat gram)
{
    if (gram.rows() != gram.cols() || gram.rows() == 0) {
        throw NumericalError("inner product Gram matrix must be square and non-empty");
    }
    InnerProduct ip;
    ip.dim_ = gram.rows();
    ip.gram_ = std::move(gram);
    return ip;
}

double InnerProduct::operator()(const Vec& u, const Vec& v) const
{
    if (is_conformal()) {
        return scale_ * dot(u, v);
    }
    return dot(u, gram_ * v);
}

double InnerProduct::norm(const Vec& u) const { return std::sqrt((*this)(u, u)); }

void ToleranceProfile::validate() const
{
    if (!(tol_first > 0.0 && tol_second > 0.0 && tol_eig > 0.0 && fd_step > 0.0)) {
        throw NumericalError("tolerances must be positive");
    }
    if (tol_second < tol_first) {
        throw NumericalError("tol_second must be >= tol_first");
    }
}

Orthonormalization orthonormalize(std::span<const Vec> vectors, const InnerProduct& ip)
{
    Orthonormalization out;
    out.r = Mat(vectors.size(), vectors.size());
    out.basis.reserve(vectors.size());
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const double input_norm = ip.norm(vectors[k]);
        Vec w = vectors[k];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < out.basis.size(); ++j) {
                const double c = ip(out.basis[j], w);
                out.r(j, k) += c;
                w -= c * out.basis[j];
            }
        }
        const double pivot = ip.norm(w);
        if (!(pivot >= 1e-12 * input_norm) || pivot == 0.0) {
            throw RankError("gram_schmidt: rank deficiency at index " + std::to_string(k + 1), k + 1);
        }
        out.r(k, k) = pivot;
        out.basis.push_back((1.0 / pivot) * w);
    }
    return out;
}

std::vector<Vec> gram_schmidt(std::span<const Vec> vectors, const InnerProduct& ip)
{
    return orthonormalize(vectors, ip).basis;
}

Mat invert_upper(const Mat& r)
{
    const std::size_t n = r.rows();
    Mat inv(n, n);
    for (std::size_t j = n; j-- > 0;) {
        inv(j, j) = 1.0 / r(j, j);
        for (std::size_t i = j; i-- > 0;) {
            double s = 0.0;
            for (std::size_t k = i + 1; k <= j; ++k) {
                s += r(i, k) * inv(k, j);
            }
            inv(i, j) = -s / r(i, i);
        }
    }
    return inv;
}

SymEigen sym_eigen(const Mat& input)
{
    const std::size_t n = input.rows();
    if (input.cols() != n) {
        throw NumericalError("sym_eigen: matrix is not square");
    }
    if (n > 16) {
        throw NumericalError("sym_eigen: dimension above 16");
    }
    const double scale = std::max(1.0, input.max_abs());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(input(i, j) - input(j, i)) > 1e-10 * scale) {
                throw NumericalError("sym_eigen: asymmetric input");
            }
        }
    }

    Mat a = input;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = a(j, i) = 0.5 * (input(i, j) + input(j, i));
        }
    }
    Mat q = Mat::identity(n);

    auto off = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s += a(i, j) * a(i, j);
            }
        }
        return std::sqrt(s);
    };

    const double norm = std::max(a.frobenius(), 1e-300);
    bool converged = off() <= 1e-15 * norm;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (apr == 0.0) {
                    continue;
                }
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(k, r) = s * akp + c * akr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double ark = a(r, k);
                    a(p, k) = c * apk - s * ark;
                    a(r, k) = s * apk + c * ark;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double qkp = q(k, p);
                    const double qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
        converged = off() <= 1e-15 * norm;
    }
    if (!converged) {
        throw NumericalError("sym_eigen: no convergence in 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    SymEigen out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = q(i, order[k]);
        }
    }
    return out;
}

double gram_residual(std::span<const Vec> basis, const InnerProduct& ip)
{
    double r = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i; j < basis.size(); ++j) {
            const double target = i == j ? 1.0 : 0.0;
            r = std::max(r, std::abs(ip(basis[i], basis[j]) - target));
        }
    }
    return r;
}

Vec project(const Vec& v, std::span<const Vec> basis, const InnerProduct& ip)
{
    if (gram_residual(basis, ip) > 1e-8) {
        throw NumericalError("project: basis is not orthonormal");
    }
    Vec out(v.size());
    for (const auto& b : basis) {
        out += ip(v, b) * b;
    }
    return out;
}

Vec fd_directional(const FieldSampler& field, const Vec& at, const Vec& dir,
                   const ToleranceProfile& profile)
{
    const double h = profile.fd_step * (1.0 + at.norm());
    auto sample = [&](double offset) {
        Vec p = at + offset * dir;
        try {
            return field(p);
        } catch (const Error& e) {
            throw NumericalError("stencil failure at " + to_string(p) + ": " + e.what());
        }
    };
    auto central = [&](double step) {
        Vec d = sample(step) - sample(-step);
        return (1.0 / (2.0 * step)) * d;
    };
    const Vec coarse = central(h);
    const Vec fine = central(0.5 * h);
    return (1.0 / 3.0) * (4.0 * fine - coarse);
}

std::string to_string(const Vec& v)
{
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", v[i]);
        s += buf;
        if (i + 1 < v.size()) {
            s += ", ";
        }
    }
    return s + ")";
}

} // namespace bislant
