#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace torsionfield {

// Small fixed-size types for chart computations. Everything here is 2-D.

struct Vec2 {
    double v[2]{0.0, 0.0};

    Vec2() = default;
    Vec2(double a, double b) : v{a, b} {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    Vec2 operator+(const Vec2& o) const { return {v[0] + o.v[0], v[1] + o.v[1]}; }
    Vec2 operator-(const Vec2& o) const { return {v[0] - o.v[0], v[1] - o.v[1]}; }
    Vec2 operator*(double s) const { return {v[0] * s, v[1] * s}; }
    Vec2 operator/(double s) const { return {v[0] / s, v[1] / s}; }
    Vec2 operator-() const { return {-v[0], -v[1]}; }
    Vec2& operator+=(const Vec2& o) {
        v[0] += o.v[0];
        v[1] += o.v[1];
        return *this;
    }

    double norm2() const { return v[0] * v[0] + v[1] * v[1]; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& a) { return a * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

struct Mat2 {
    double m[2][2]{{0.0, 0.0}, {0.0, 0.0}};

    Mat2() = default;
    Mat2(double a00, double a01, double a10, double a11) : m{{a00, a01}, {a10, a11}} {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    Mat2 operator+(const Mat2& o) const {
        return {m[0][0] + o.m[0][0], m[0][1] + o.m[0][1], m[1][0] + o.m[1][0], m[1][1] + o.m[1][1]};
    }
    Mat2 operator-(const Mat2& o) const {
        return {m[0][0] - o.m[0][0], m[0][1] - o.m[0][1], m[1][0] - o.m[1][0], m[1][1] - o.m[1][1]};
    }
    Mat2 operator*(double s) const {
        return {m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s};
    }

    Vec2 operator*(const Vec2& x) const {
        return {m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]};
    }

    Mat2 matmul(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r(i, j) = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
        return r;
    }

    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    double trace() const { return m[0][0] + m[1][1]; }

    Mat2 inverse() const {
        const double d = det();
        if (d == 0.0) throw std::runtime_error("Mat2::inverse: singular matrix");
        return {m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d};
    }

    double max_abs() const {
        double r = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r = std::max(r, std::abs(m[i][j]));
        return r;
    }
};

inline Mat2 operator*(double s, const Mat2& a) { return a * s; }

// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& a) {
    const double tr = a.trace();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * a.det()));
    return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

// Symmetric square root of an SPD 2x2 matrix.
inline Mat2 sym_sqrt(const Mat2& a) {
    const double d = a.det();
    if (d <= 0.0) throw std::runtime_error("sym_sqrt: matrix not positive definite");
    const double s = std::sqrt(d);
    const double t = std::sqrt(a.trace() + 2.0 * s);
    Mat2 r = a;
    r(0, 0) += s;
    r(1, 1) += s;
    return r * (1.0 / t);
}

// Christoffel symbols: gamma(k, i, j) = Gamma^k_{ij}.
struct Christoffel {
    double g[2][2][2]{};
    double& operator()(int k, int i, int j) { return g[k][i][j]; }
    double operator()(int k, int i, int j) const { return g[k][i][j]; }

    // Gamma^k_{ij} u^i w^j summed over i, j for each k.
    Vec2 contract(const Vec2& u, const Vec2& w) const {
        Vec2 r;
        for (int k = 0; k < 2; ++k) {
            double s = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) s += g[k][i][j] * u[i] * w[j];
            r[k] = s;
        }
        return r;
    }

    double max_abs() const {
        double r = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) r = std::max(r, std::abs(g[k][i][j]));
        return r;
    }
};

// Stochastic Christoffel symbols are not symmetric in the lower pair, so they
// share the same storage layout but are kept as a distinct alias for clarity.
using ChristoffelGeneral = Christoffel;

// (1,3) curvature tensor: up(l, k, i, j) = R^l_{kij}, the l-th component of
// R(e_i, e_j) e_k.
struct RiemannUp {
    double r[2][2][2][2]{};
    double& operator()(int l, int k, int i, int j) { return r[l][k][i][j]; }
    double operator()(int l, int k, int i, int j) const { return r[l][k][i][j]; }

    RiemannUp operator*(double s) const {
        RiemannUp out;
        for (int l = 0; l < 2; ++l)
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) out.r[l][k][i][j] = r[l][k][i][j] * s;
        return out;
    }

    double max_abs_diff(const RiemannUp& o) const {
        double d = 0.0;
        for (int l = 0; l < 2; ++l)
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        d = std::max(d, std::abs(r[l][k][i][j] - o.r[l][k][i][j]));
        return d;
    }

    double max_abs() const {
        double d = 0.0;
        for (int l = 0; l < 2; ++l)
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(r[l][k][i][j]));
        return d;
    }
};

// (0,4) curvature tensor: low(i, j, k, l) = < R(e_i, e_j) e_k , e_l >.
struct RiemannLow {
    double r[2][2][2][2]{};
    double& operator()(int i, int j, int k, int l) { return r[i][j][k][l]; }
    double operator()(int i, int j, int k, int l) const { return r[i][j][k][l]; }

    RiemannLow operator*(double s) const {
        RiemannLow out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) out.r[i][j][k][l] = r[i][j][k][l] * s;
        return out;
    }

    // Multilinear evaluation on tangent vectors.
    double evaluate(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) const {
        double s = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) s += r[i][j][k][l] * a[i] * b[j] * c[k] * d[l];
        return s;
    }

    double max_abs_diff(const RiemannLow& o) const {
        double d = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        d = std::max(d, std::abs(r[i][j][k][l] - o.r[i][j][k][l]));
        return d;
    }

    double max_abs() const {
        double d = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) d = std::max(d, std::abs(r[i][j][k][l]));
        return d;
    }
};

}  // namespace torsionfield
