#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "torsionfield/linalg.hpp"

namespace torsionfield {

// Values of the first n basis functions at a point, with analytic first and
// second partials. grad[i][a] = d psi_i / d x^a, hess[i](a,b) = d2 psi_i.
struct BasisEval {
    std::vector<double> value;
    std::vector<Vec2> grad;
    std::vector<Mat2> hess;

    void resize(std::size_t n) {
        value.assign(n, 0.0);
        grad.assign(n, Vec2{});
        hess.assign(n, Mat2{});
    }
};

// Orthonormal family of smooth functions on a chart, enumerated 1-based in a
// fixed order. The enumeration is part of the reproducibility contract: it
// decides which variance sigma_i^2 lands on which function.
class Eigenbasis {
public:
    virtual ~Eigenbasis() = default;
    virtual std::string name() const = 0;
    virtual std::size_t max_size() const = 0;
    virtual void evaluate(const Vec2& p, std::size_t n, BasisEval& out) const = 0;

    // Values only; hot loops (validation grids, Monte Carlo) use this to skip
    // the derivative work. out must have size >= n.
    virtual void evaluate_values(const Vec2& p, std::size_t n, double* out) const {
        BasisEval e;
        evaluate(p, n, e);
        for (std::size_t i = 0; i < n; ++i) out[i] = e.value[i];
    }

    // Upper bound on psi_i^2 over the whole manifold (1-based), used to bound
    // truncated-cap quadrature errors. Infinity when no cheap bound exists.
    virtual double sup_square_bound(std::size_t) const {
        return std::numeric_limits<double>::infinity();
    }

    BasisEval evaluate(const Vec2& p, std::size_t n) const {
        BasisEval e;
        evaluate(p, n, e);
        return e;
    }
};

using BasisPtr = std::shared_ptr<const Eigenbasis>;

// ---------------------------------------------------------------------------
// Flat torus: Fourier modes on [0, 2pi)^2, orthonormal under dA = dx dy.
// Ordering: increasing Laplace eigenvalue k^2 + l^2, ties broken
// lexicographically by (k, l, type) with type order {cos*cos, cos*sin,
// sin*cos, sin*sin}; degenerate members (sin of a zero frequency) are
// skipped. The constant mode is excluded.
// ---------------------------------------------------------------------------
class TorusFourierBasis final : public Eigenbasis {
public:
    explicit TorusFourierBasis(int max_frequency = 24) {
        struct Key {
            int lambda, k, l, type;
        };
        std::vector<Key> keys;
        for (int k = 0; k <= max_frequency; ++k)
            for (int l = 0; l <= max_frequency; ++l) {
                if (k == 0 && l == 0) continue;
                for (int type = 0; type < 4; ++type) {
                    const bool use_sin_x = (type >= 2);
                    const bool use_sin_y = (type % 2 == 1);
                    if (use_sin_x && k == 0) continue;
                    if (use_sin_y && l == 0) continue;
                    keys.push_back({k * k + l * l, k, l, type});
                }
            }
        std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
            return std::tie(a.lambda, a.k, a.l, a.type) < std::tie(b.lambda, b.k, b.l, b.type);
        });
        modes_.reserve(keys.size());
        for (const auto& key : keys) {
            Mode m;
            m.k = key.k;
            m.l = key.l;
            m.sin_x = (key.type >= 2);
            m.sin_y = (key.type % 2 == 1);
            const double ix = (m.k == 0) ? 2.0 * std::numbers::pi : std::numbers::pi;
            const double iy = (m.l == 0) ? 2.0 * std::numbers::pi : std::numbers::pi;
            m.norm = 1.0 / std::sqrt(ix * iy);
            modes_.push_back(m);
        }
    }

    std::string name() const override { return "torus-fourier"; }
    std::size_t max_size() const override { return modes_.size(); }

    void evaluate_values(const Vec2& p, std::size_t n, double* out) const override {
        if (n > modes_.size()) throw std::invalid_argument("TorusFourierBasis: truncation too large");
        for (std::size_t i = 0; i < n; ++i) {
            const Mode& m = modes_[i];
            const double tx = m.sin_x ? std::sin(m.k * p[0]) : std::cos(m.k * p[0]);
            const double ty = m.sin_y ? std::sin(m.l * p[1]) : std::cos(m.l * p[1]);
            out[i] = m.norm * tx * ty;
        }
    }

    double sup_square_bound(std::size_t i) const override {
        const double n = modes_.at(i - 1).norm;
        return n * n;
    }

    void evaluate(const Vec2& p, std::size_t n, BasisEval& out) const override {
        if (n > modes_.size()) throw std::invalid_argument("TorusFourierBasis: truncation too large");
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Mode& m = modes_[i];
            const double ax = m.k * p[0], ay = m.l * p[1];
            const double tx = m.sin_x ? std::sin(ax) : std::cos(ax);
            const double ty = m.sin_y ? std::sin(ay) : std::cos(ay);
            const double dtx = m.k * (m.sin_x ? std::cos(ax) : -std::sin(ax));
            const double dty = m.l * (m.sin_y ? std::cos(ay) : -std::sin(ay));
            const double ddtx = -double(m.k) * m.k * tx;
            const double ddty = -double(m.l) * m.l * ty;
            out.value[i] = m.norm * tx * ty;
            out.grad[i] = Vec2{m.norm * dtx * ty, m.norm * tx * dty};
            out.hess[i](0, 0) = m.norm * ddtx * ty;
            out.hess[i](0, 1) = m.norm * dtx * dty;
            out.hess[i](1, 0) = out.hess[i](0, 1);
            out.hess[i](1, 1) = m.norm * tx * ddty;
        }
    }

private:
    struct Mode {
        int k = 0, l = 0;
        bool sin_x = false, sin_y = false;
        double norm = 1.0;
    };
    std::vector<Mode> modes_;
};

// ---------------------------------------------------------------------------
// Real spherical harmonics on the radius-R sphere, orthonormal under
// dA = R^2 sin(theta) dtheta dphi. Ordering: (l, m) with l = 1, 2, ... and m
// ascending from -l to l; l = 0 (the constant) is excluded.
//
// Y_{l0}    = c_{l0} P_l(cos theta)
// Y_{lm}    = sqrt(2) c_{lm} P_l^m(cos theta) cos(m phi)      (m > 0)
// Y_{l,-m}  = sqrt(2) c_{lm} P_l^m(cos theta) sin(m phi)      (m > 0)
// with c_{lm} = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) / R and P_l^m without the
// Condon-Shortley phase. Valid away from the poles for derivatives; values
// are fine everywhere.
// ---------------------------------------------------------------------------
class SphereHarmonicBasis final : public Eigenbasis {
public:
    explicit SphereHarmonicBasis(double radius = 1.0, int lmax = 12) : radius_(radius), lmax_(lmax) {
        for (int l = 1; l <= lmax; ++l)
            for (int m = -l; m <= l; ++m) entries_.push_back({l, m});
    }

    std::string name() const override { return "sphere-harmonics"; }
    std::size_t max_size() const override { return entries_.size(); }

    void evaluate_values(const Vec2& p, std::size_t n, double* out) const override {
        if (n > entries_.size()) throw std::invalid_argument("SphereHarmonicBasis: truncation too large");
        const double x = std::cos(p[0]);
        for (std::size_t i = 0; i < n; ++i) {
            const int l = entries_[i].l;
            const int am = std::abs(entries_[i].m);
            double norm =
                std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * factorial_ratio(l, am)) / radius_;
            double az = 1.0;
            if (entries_[i].m > 0) {
                norm *= std::numbers::sqrt2;
                az = std::cos(am * p[1]);
            } else if (entries_[i].m < 0) {
                norm *= std::numbers::sqrt2;
                az = std::sin(am * p[1]);
            }
            out[i] = norm * assoc_legendre(l, am, x) * az;
        }
    }

    // addition theorem: sum_m Y_lm^2 = (2l+1)/(4 pi R^2), so each term is below it
    double sup_square_bound(std::size_t i) const override {
        const int l = entries_.at(i - 1).l;
        return (2.0 * l + 1.0) / (4.0 * std::numbers::pi * radius_ * radius_);
    }

    void evaluate(const Vec2& p, std::size_t n, BasisEval& out) const override {
        if (n > entries_.size()) throw std::invalid_argument("SphereHarmonicBasis: truncation too large");
        out.resize(n);
        const double theta = p[0], phi = p[1];
        const double x = std::cos(theta), s = std::sin(theta);
        for (std::size_t i = 0; i < n; ++i) {
            const int l = entries_[i].l;
            const int am = std::abs(entries_[i].m);
            // u(theta) = P_l^m(cos theta) and theta-derivatives
            const double plm = assoc_legendre(l, am, x);
            const double plm_prev = (am <= l - 1) ? assoc_legendre(l - 1, am, x) : 0.0;
            const double du = (l * x * plm - (l + am) * plm_prev) / s;
            // associated Legendre ODE: u'' + cot(theta) u' + [l(l+1) - m^2/sin^2] u = 0
            const double ddu = -(x / s) * du - (l * (l + 1.0) - am * am / (s * s)) * plm;

            double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * factorial_ratio(l, am)) /
                          radius_;
            double az, daz, ddaz;  // azimuthal part and phi-derivatives
            if (entries_[i].m == 0) {
                az = 1.0;
                daz = 0.0;
                ddaz = 0.0;
            } else if (entries_[i].m > 0) {
                norm *= std::numbers::sqrt2;
                az = std::cos(am * phi);
                daz = -am * std::sin(am * phi);
                ddaz = -double(am) * am * az;
            } else {
                norm *= std::numbers::sqrt2;
                az = std::sin(am * phi);
                daz = am * std::cos(am * phi);
                ddaz = -double(am) * am * az;
            }
            out.value[i] = norm * plm * az;
            out.grad[i] = Vec2{norm * du * az, norm * plm * daz};
            out.hess[i](0, 0) = norm * ddu * az;
            out.hess[i](0, 1) = norm * du * daz;
            out.hess[i](1, 0) = out.hess[i](0, 1);
            out.hess[i](1, 1) = norm * plm * ddaz;
        }
    }

private:
    struct Entry {
        int l, m;
    };

    // P_l^m(x), no Condon-Shortley phase; stable upward recurrence in l.
    static double assoc_legendre(int l, int m, double x) {
        const double somx2 = std::sqrt(std::max(0.0, 1.0 - x * x));
        double pmm = 1.0;
        for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * somx2;
        if (l == m) return pmm;
        double pmmp1 = x * (2.0 * m + 1.0) * pmm;
        if (l == m + 1) return pmmp1;
        double pll = 0.0;
        for (int ll = m + 2; ll <= l; ++ll) {
            pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
            pmm = pmmp1;
            pmmp1 = pll;
        }
        return pll;
    }

    // (l-m)!/(l+m)!
    static double factorial_ratio(int l, int m) {
        double r = 1.0;
        for (int j = l - m + 1; j <= l + m; ++j) r /= j;
        return r;
    }

    double radius_;
    int lmax_;
    std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// User-supplied basis: closures for value, gradient and hessian per function.
// ---------------------------------------------------------------------------
struct CustomBasisFunction {
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> gradient;
    std::function<Mat2(const Vec2&)> hessian;
};

class CustomBasis final : public Eigenbasis {
public:
    CustomBasis(std::string name, std::vector<CustomBasisFunction> funcs)
        : name_(std::move(name)), funcs_(std::move(funcs)) {}

    std::string name() const override { return name_; }
    std::size_t max_size() const override { return funcs_.size(); }

    void evaluate_values(const Vec2& p, std::size_t n, double* out) const override {
        if (n > funcs_.size()) throw std::invalid_argument("CustomBasis: truncation too large");
        for (std::size_t i = 0; i < n; ++i) out[i] = funcs_[i].value(p);
    }

    void evaluate(const Vec2& p, std::size_t n, BasisEval& out) const override {
        if (n > funcs_.size()) throw std::invalid_argument("CustomBasis: truncation too large");
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.value[i] = funcs_[i].value(p);
            out.grad[i] = funcs_[i].gradient(p);
            out.hess[i] = funcs_[i].hessian(p);
        }
    }

private:
    std::string name_;
    std::vector<CustomBasisFunction> funcs_;
};

// ---------------------------------------------------------------------------
// Smooth orthonormal family for the half-plane chart, built from a custom
// basis: Fourier modes in x (orthonormal under dx on the chart width) times
// Legendre polynomials in s = -1/y, which are orthonormal under the
// hyperbolic weight dy / y^2. Not a Laplace eigenbasis; the half-plane only
// needs a smooth orthonormal family.
// ---------------------------------------------------------------------------
namespace detail {

// P_n(z), P_n'(z), P_n''(z) by the Bonnet recurrence.
inline void legendre_with_derivs(int n, double z, double& p, double& dp, double& ddp) {
    double p0 = 1.0, dp0 = 0.0, ddp0 = 0.0;
    double p1 = z, dp1 = 1.0, ddp1 = 0.0;
    if (n == 0) {
        p = p0;
        dp = dp0;
        ddp = ddp0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double a = (2.0 * k - 1.0) / k, b = (k - 1.0) / k;
        const double p2 = a * z * p1 - b * p0;
        const double dp2 = a * (p1 + z * dp1) - b * dp0;
        const double ddp2 = a * (2.0 * dp1 + z * ddp1) - b * ddp0;
        p0 = p1;
        dp0 = dp1;
        ddp0 = ddp1;
        p1 = p2;
        dp1 = dp2;
        ddp1 = ddp2;
    }
    p = p1;
    dp = dp1;
    ddp = ddp1;
}

}  // namespace detail

inline BasisPtr make_half_plane_basis(double x_lo = -10.0, double x_hi = 10.0, double y_lo = 0.1,
                                      double y_hi = 10.0, int max_degree = 8) {
    const double width = x_hi - x_lo;
    const double s_lo = -1.0 / y_lo, s_hi = -1.0 / y_hi;
    const double s_span = s_hi - s_lo;

    struct XMode {
        int freq;
        bool use_sin;
        double norm;
    };
    auto x_mode = [&](int idx) {  // idx 0 = const, then cos/sin pairs
        if (idx == 0) return XMode{0, false, 1.0 / std::sqrt(width)};
        const int freq = (idx + 1) / 2;
        return XMode{freq, idx % 2 == 0, std::sqrt(2.0 / width)};
    };
    auto x_degree = [](int idx) { return (idx + 1) / 2; };

    struct Key {
        int deg, ix, iy;
    };
    std::vector<Key> keys;
    for (int ix = 0; ix <= 2 * max_degree; ++ix)
        for (int iy = 0; iy <= max_degree; ++iy) {
            if (ix == 0 && iy == 0) continue;  // exclude the constant
            const int dx = x_degree(ix);
            keys.push_back({dx * dx + iy * iy, ix, iy});
        }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return std::tie(a.deg, a.ix, a.iy) < std::tie(b.deg, b.ix, b.iy);
    });

    std::vector<CustomBasisFunction> funcs;
    funcs.reserve(keys.size());
    for (const auto& key : keys) {
        const XMode xm = x_mode(key.ix);
        const int ny = key.iy;
        const double ynorm = std::sqrt((2.0 * ny + 1.0) / s_span);
        const double omega = 2.0 * std::numbers::pi * xm.freq / width;

        auto eval_parts = [=](const Vec2& p, double& ux, double& dux, double& ddux, double& vy,
                              double& dvy, double& ddvy) {
            const double ax = omega * (p[0] - x_lo);
            ux = xm.norm * (xm.use_sin ? std::sin(ax) : std::cos(ax));
            dux = xm.norm * omega * (xm.use_sin ? std::cos(ax) : -std::sin(ax));
            ddux = -omega * omega * ux;
            const double s = -1.0 / p[1];
            const double z = (2.0 * s - s_lo - s_hi) / s_span;
            double pv, dpv, ddpv;
            detail::legendre_with_derivs(ny, z, pv, dpv, ddpv);
            const double dz_ds = 2.0 / s_span;
            // v(y) = ynorm * P(z(s(y))), s = -1/y
            const double ds_dy = 1.0 / (p[1] * p[1]);
            const double d2s_dy2 = -2.0 / (p[1] * p[1] * p[1]);
            const double dv_ds = ynorm * dpv * dz_ds;
            const double d2v_ds2 = ynorm * ddpv * dz_ds * dz_ds;
            vy = ynorm * pv;
            dvy = dv_ds * ds_dy;
            ddvy = d2v_ds2 * ds_dy * ds_dy + dv_ds * d2s_dy2;
        };

        CustomBasisFunction f;
        f.value = [=](const Vec2& p) {
            double ux, dux, ddux, vy, dvy, ddvy;
            eval_parts(p, ux, dux, ddux, vy, dvy, ddvy);
            return ux * vy;
        };
        f.gradient = [=](const Vec2& p) {
            double ux, dux, ddux, vy, dvy, ddvy;
            eval_parts(p, ux, dux, ddux, vy, dvy, ddvy);
            return Vec2{dux * vy, ux * dvy};
        };
        f.hessian = [=](const Vec2& p) {
            double ux, dux, ddux, vy, dvy, ddvy;
            eval_parts(p, ux, dux, ddux, vy, dvy, ddvy);
            Mat2 h;
            h(0, 0) = ddux * vy;
            h(0, 1) = dux * dvy;
            h(1, 0) = h(0, 1);
            h(1, 1) = ux * ddvy;
            return h;
        };
        funcs.push_back(std::move(f));
    }
    return std::make_shared<CustomBasis>("halfplane-legendre", std::move(funcs));
}

inline BasisPtr make_basis(const std::string& name, double sphere_radius = 1.0) {
    if (name == "torus-fourier") return std::make_shared<TorusFourierBasis>();
    if (name == "sphere-harmonics") return std::make_shared<SphereHarmonicBasis>(sphere_radius);
    if (name == "halfplane-legendre") return make_half_plane_basis();
    throw std::invalid_argument("unknown basis name: " + name);
}

}  // namespace torsionfield
