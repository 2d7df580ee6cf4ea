#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace emomine {

// Dense row-major double matrix. Just enough linear algebra for the
// recurrent model; everything stays in plain loops so the arithmetic is
// easy to audit against the finite-difference checks.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::size_t size() const { return data.size(); }
    void fill(double v) { data.assign(data.size(), v); }
};

using Vec = std::vector<double>;

// out = x * A, with x a row vector of length A.rows.
inline void mul_row(std::span<const double> x, const Mat& a, Vec& out) {
    assert(x.size() == a.rows);
    out.assign(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = &a.data[i * a.cols];
        for (std::size_t j = 0; j < a.cols; ++j) out[j] += xi * row[j];
    }
}

// out = x * A^T, with x a row vector of length A.cols.
inline void mul_row_transposed(std::span<const double> x, const Mat& a, Vec& out) {
    assert(x.size() == a.cols);
    out.assign(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* row = &a.data[i * a.cols];
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) acc += x[j] * row[j];
        out[i] = acc;
    }
}

// A += u^T v (outer product of two row vectors).
inline void add_outer(Mat& a, std::span<const double> u, std::span<const double> v) {
    assert(u.size() == a.rows && v.size() == a.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double ui = u[i];
        if (ui == 0.0) continue;
        double* row = &a.data[i * a.cols];
        for (std::size_t j = 0; j < a.cols; ++j) row[j] += ui * v[j];
    }
}

}  // namespace emomine
