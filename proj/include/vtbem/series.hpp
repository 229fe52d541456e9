#ifndef VTBEM_SERIES_HPP
#define VTBEM_SERIES_HPP

#include <array>
#include <cmath>

#include "vtbem/types.hpp"

namespace vtbem {

// Truncated Taylor series in one variable, fixed capacity. Coefficient-level
// arithmetic keeps the exact cancellations that coordinate-level evaluation
// of near-diagonal kernel factors destroys.
struct Series {
    static constexpr int CAP = 10; // degree cap (inclusive)
    std::array<double, CAP + 1> c{};

    static Series constant(double v) {
        Series s;
        s.c[0] = v;
        return s;
    }

    double eval(double u) const {
        double v = c[CAP];
        for (int j = CAP - 1; j >= 0; --j) v = std::fma(v, u, c[j]);
        return v;
    }

    Series operator+(const Series& o) const {
        Series r;
        for (int j = 0; j <= CAP; ++j) r.c[j] = c[j] + o.c[j];
        return r;
    }
    Series operator-(const Series& o) const {
        Series r;
        for (int j = 0; j <= CAP; ++j) r.c[j] = c[j] - o.c[j];
        return r;
    }
    Series operator*(double a) const {
        Series r;
        for (int j = 0; j <= CAP; ++j) r.c[j] = a * c[j];
        return r;
    }
    Series operator*(const Series& o) const {
        Series r;
        for (int j = 0; j <= CAP; ++j)
            for (int i = 0; i <= j; ++i) r.c[j] += c[i] * o.c[j - i];
        return r;
    }

    // reciprocal, requires c[0] != 0
    Series recip() const {
        Series r;
        r.c[0] = 1.0 / c[0];
        for (int j = 1; j <= CAP; ++j) {
            double acc = 0.0;
            for (int i = 1; i <= j; ++i) acc += c[i] * r.c[j - i];
            r.c[j] = -acc / c[0];
        }
        return r;
    }

    // sqrt, requires c[0] > 0
    Series sqrt() const {
        Series r;
        r.c[0] = std::sqrt(c[0]);
        for (int j = 1; j <= CAP; ++j) {
            double acc = 0.0;
            for (int i = 1; i < j; ++i) acc += r.c[i] * r.c[j - i];
            r.c[j] = (c[j] - acc) / (2.0 * r.c[0]);
        }
        return r;
    }

    // substitute u -> a*u (scales coefficient j by a^j)
    Series scale_arg(double a) const {
        Series r;
        double p = 1.0;
        for (int j = 0; j <= CAP; ++j) {
            r.c[j] = c[j] * p;
            p *= a;
        }
        return r;
    }

    // odd/even parts: series of (f(u) -+ f(-u))/1, restricted terms
    Series odd_part() const {
        Series r;
        for (int j = 1; j <= CAP; j += 2) r.c[j] = c[j];
        return r;
    }
    Series even_part() const {
        Series r;
        for (int j = 0; j <= CAP; j += 2) r.c[j] = c[j];
        return r;
    }
};

struct Vec2Series {
    Series x, y;

    Vec2Series operator+(const Vec2Series& o) const { return {x + o.x, y + o.y}; }
    Vec2Series operator-(const Vec2Series& o) const { return {x - o.x, y - o.y}; }
    Vec2Series operator*(const Series& s) const { return {x * s, y * s}; }
    Vec2Series operator*(double a) const { return {x * a, y * a}; }
    Vec2 eval(double u) const { return {x.eval(u), y.eval(u)}; }
    Vec2Series scale_arg(double a) const { return {x.scale_arg(a), y.scale_arg(a)}; }
    Vec2Series rot_minus90() const { return {y, x * (-1.0)}; }
    Vec2Series odd_part() const { return {x.odd_part(), y.odd_part()}; }
    Vec2Series even_part() const { return {x.even_part(), y.even_part()}; }

    // compensated dot: every coefficient accumulates exact fma residuals so
    // analytically-zero coefficients cancel to ~eps^2 instead of eps
    Series dot(const Vec2Series& o) const {
        Series r;
        for (int j = 0; j <= Series::CAP; ++j) {
            double s = 0.0, comp = 0.0;
            auto acc = [&](double a, double b) {
                double p = a * b;
                double e = std::fma(a, b, -p);
                double t = s + p;
                comp += (std::abs(s) >= std::abs(p)) ? (s - t) + p : (p - t) + s;
                s = t;
                comp += e;
            };
            for (int i = 0; i <= j; ++i) {
                acc(x.c[size_t(i)], o.x.c[size_t(j - i)]);
                acc(y.c[size_t(i)], o.y.c[size_t(j - i)]);
            }
            r.c[size_t(j)] = s + comp;
        }
        return r;
    }
};

} // namespace vtbem

#endif
