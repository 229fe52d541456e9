#include "vtbem/special.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace vtbem {

namespace {

constexpr double EULER_GAMMA = 0.577215664901532860606512090082402431;

// ---------------------------------------------------------------------------
// Double-double helpers, used only when building the mid-range Chebyshev
// tables. The ascending series suffers cancellation up to ~e^z there, which
// plain double cannot absorb.
// ---------------------------------------------------------------------------
struct DD {
    double hi = 0.0, lo = 0.0;
};

DD dd_two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD dd_norm(double hi, double lo) {
    double s = hi + lo;
    return {s, lo - (s - hi)};
}

DD dd_add(const DD& a, const DD& b) {
    DD s = dd_two_sum(a.hi, b.hi);
    return dd_norm(s.hi, s.lo + a.lo + b.lo);
}

DD dd_mul(const DD& a, const DD& b) {
    double p = a.hi * b.hi;
    double e = std::fma(a.hi, b.hi, -p);
    return dd_norm(p, e + a.hi * b.lo + a.lo * b.hi);
}

DD dd_div(const DD& a, const DD& b) {
    double q1 = a.hi / b.hi;
    DD r = dd_add(a, dd_mul({-q1, 0.0}, b));
    double q2 = r.hi / b.hi;
    DD r2 = dd_add(r, dd_mul({-q2, 0.0}, b));
    double q3 = r2.hi / b.hi;
    DD q = dd_two_sum(q1, q2);
    return dd_norm(q.hi, q.lo + q3);
}

DD dd_from(double x) { return {x, 0.0}; }
DD dd_neg(const DD& a) { return {-a.hi, -a.lo}; }

// J0,J1 and the companion log-free sums of Y0,Y1 by the ascending series in
// double-double. Valid for moderate z (used on [5.9, 17.5]).
struct BesselSumsDD {
    DD j0, j1, y0s, y1s; // y0s = sum H_m (-q)^m/(m!)^2, y1s = sum (H_m+H_{m+1})(-q)^m/(m!(m+1)!)
};

BesselSumsDD ascending_sums_dd(double z) {
    DD q = dd_mul(dd_from(z * 0.5), dd_from(z * 0.5));
    DD t0 = dd_from(1.0); // (-q)^m / (m!)^2
    DD t1 = dd_from(1.0); // (-q)^m / (m!(m+1)!)
    DD h = dd_from(0.0);  // H_m
    DD j0 = t0, j1 = t1, y0s = dd_from(0.0);
    DD y1s = dd_from(1.0); // m=0 term: (H_0 + H_1) * 1 = 1
    for (int m = 1; m <= 80; ++m) {
        t0 = dd_div(dd_mul(dd_neg(q), t0), dd_from(double(m) * m));
        t1 = dd_div(dd_mul(dd_neg(q), t1), dd_from(double(m) * (m + 1)));
        h = dd_add(h, dd_div(dd_from(1.0), dd_from(double(m))));
        DD h1 = dd_add(h, dd_div(dd_from(1.0), dd_from(double(m + 1))));
        j0 = dd_add(j0, t0);
        j1 = dd_add(j1, t1);
        y0s = dd_add(y0s, dd_mul(h, t0));
        y1s = dd_add(y1s, dd_mul(dd_add(h, h1), t1));
        if (std::abs(t0.hi) < 1e-40 && std::abs(t1.hi) < 1e-40) break;
    }
    return {j0, j1, y0s, y1s};
}

Hankel01 hankel_dd(double z) {
    BesselSumsDD s = ascending_sums_dd(z);
    double L = std::log(0.5 * z) + EULER_GAMMA;
    double j0 = s.j0.hi + s.j0.lo;
    double j1v = 0.5 * z * (s.j1.hi + s.j1.lo);
    double y0 = (2.0 / PI) * (L * j0 - (s.y0s.hi + s.y0s.lo));
    double y1 = (2.0 / PI) * (L * j1v - 1.0 / z) - z / (2.0 * PI) * (s.y1s.hi + s.y1s.lo);
    return {{j0, y0}, {j1v, y1}};
}

// ---------------------------------------------------------------------------
// Ascending series in compensated double arithmetic (z <= 6).
// ---------------------------------------------------------------------------
struct KahanAcc {
    double s = 0.0, c = 0.0;
    void add(double t) {
        double y = t - c;
        double u = s + y;
        c = (u - s) - y;
        s = u;
    }
};

Hankel01 hankel_series(double z) {
    double q = 0.25 * z * z;
    double t0 = 1.0, t1 = 1.0, h = 0.0;
    KahanAcc j0, j1s, y0s, y1s;
    j0.add(1.0);
    j1s.add(1.0);
    y1s.add(1.0);
    for (int m = 1; m <= 40; ++m) {
        t0 *= -q / (double(m) * m);
        t1 *= -q / (double(m) * (m + 1));
        h += 1.0 / m;
        double hn = h + 1.0 / (m + 1);
        j0.add(t0);
        j1s.add(t1);
        y0s.add(h * t0);
        y1s.add((h + hn) * t1);
        if (std::abs(t0) < 1e-20 && std::abs(t1) < 1e-20) break;
    }
    double L = std::log(0.5 * z) + EULER_GAMMA;
    double j0v = j0.s;
    double j1v = 0.5 * z * j1s.s;
    double y0 = (2.0 / PI) * (L * j0v - y0s.s);
    double y1 = (2.0 / PI) * (L * j1v - 1.0 / z) - z / (2.0 * PI) * y1s.s;
    return {{j0v, y0}, {j1v, y1}};
}

// ---------------------------------------------------------------------------
// Poincare asymptotic expansion (z >= 17): optimal truncation error ~ e^{-2z}.
// ---------------------------------------------------------------------------
Complex asym_factor(double nu, double z) {
    Complex sum = 1.0, term = 1.0;
    double prev = 1.0;
    for (int m = 1; m <= 30; ++m) {
        double num = 4.0 * nu * nu - (2.0 * m - 1.0) * (2.0 * m - 1.0);
        term *= Complex(0.0, 1.0) * (num / (8.0 * m * z));
        double mag = std::abs(term);
        if (mag > prev) break; // divergent tail reached
        sum += term;
        prev = mag;
        if (mag < 1e-18) break;
    }
    return sum;
}

// exp(i z) * exp(-i nu pi/2 - i pi/4): the fused phase z - (2nu+1)pi/4 loses
// absolute accuracy once z is large, the split form does not
const Complex PHASE0 = std::polar(1.0, -0.25 * PI);
const Complex PHASE1 = std::polar(1.0, -0.75 * PI);

Complex cis(double z) { return {std::cos(z), std::sin(z)}; }

Hankel01 hankel_asym(double z) {
    double amp = std::sqrt(2.0 / (PI * z));
    Complex ez = cis(z) * amp;
    return {ez * PHASE0 * asym_factor(0.0, z), ez * PHASE1 * asym_factor(1.0, z)};
}

// ---------------------------------------------------------------------------
// Chebyshev tables on the mid band 6 < z < 17, fitted to
//   F_nu(1/z) = H_nu(z) * sqrt(pi z / 2) * exp(-i(z - nu pi/2 - pi/4)),
// which is smooth in u = 1/z away from u = 0.
// ---------------------------------------------------------------------------
constexpr int CHEB_N = 56;
constexpr double CHEB_ULO = 1.0 / 17.5;
constexpr double CHEB_UHI = 1.0 / 5.9;

struct ChebTable {
    std::array<Complex, CHEB_N> f0{}, f1{};

    ChebTable() {
        std::array<Complex, CHEB_N> v0, v1;
        for (int j = 0; j < CHEB_N; ++j) {
            double t = std::cos(PI * (j + 0.5) / CHEB_N);
            double u = 0.5 * (CHEB_ULO + CHEB_UHI) + 0.5 * (CHEB_UHI - CHEB_ULO) * t;
            double z = 1.0 / u;
            Hankel01 h = hankel_dd(z);
            double amp = std::sqrt(PI * z / 2.0);
            Complex emz = std::conj(cis(z)) * amp;
            v0[j] = h.h0 * emz * std::conj(PHASE0);
            v1[j] = h.h1 * emz * std::conj(PHASE1);
        }
        for (int m = 0; m < CHEB_N; ++m) {
            Complex a0 = 0.0, a1 = 0.0;
            for (int j = 0; j < CHEB_N; ++j) {
                double w = std::cos(PI * m * (j + 0.5) / CHEB_N);
                a0 += w * v0[j];
                a1 += w * v1[j];
            }
            f0[m] = a0 * (2.0 / CHEB_N);
            f1[m] = a1 * (2.0 / CHEB_N);
        }
        f0[0] *= 0.5;
        f1[0] *= 0.5;
    }

    static Complex clenshaw(const std::array<Complex, CHEB_N>& c, double t) {
        Complex b1 = 0.0, b2 = 0.0;
        for (int m = CHEB_N - 1; m >= 1; --m) {
            Complex b = 2.0 * t * b1 - b2 + c[m];
            b2 = b1;
            b1 = b;
        }
        return t * b1 - b2 + c[0];
    }

    Hankel01 eval(double z) const {
        double u = 1.0 / z;
        double t = (2.0 * u - (CHEB_ULO + CHEB_UHI)) / (CHEB_UHI - CHEB_ULO);
        double amp = std::sqrt(2.0 / (PI * z));
        Complex ez = cis(z) * amp;
        return {clenshaw(f0, t) * ez * PHASE0, clenshaw(f1, t) * ez * PHASE1};
    }
};

const ChebTable& cheb_table() {
    static const ChebTable table;
    return table;
}

} // namespace

Hankel01 hankel01(double z) {
    if (!(z > 0.0)) fail(Err::DomainError, "hankel01: argument must be positive");
    if (z <= 6.0) return hankel_series(z);
    if (z < 17.0) return cheb_table().eval(z);
    return hankel_asym(z);
}

Complex hankel_h1reg(double z) {
    if (!(z > 0.0)) fail(Err::DomainError, "hankel_h1reg: argument must be positive");
    if (z > 2.0) {
        Complex h1 = hankel01(z).h1;
        return h1 / z + Complex(0.0, 2.0 / (PI * z * z));
    }
    double q = 0.25 * z * z;
    double t = 1.0, h = 0.0;
    double s1 = 1.0, s2 = 1.0; // s1 = sum (-q)^m/(m!(m+1)!), s2 = sum (H_m+H_{m+1}) ditto
    for (int m = 1; m <= 30; ++m) {
        t *= -q / (double(m) * (m + 1));
        h += 1.0 / m;
        double hn = h + 1.0 / (m + 1);
        s1 += t;
        s2 += (h + hn) * t;
        if (std::abs(t) < 1e-20) break;
    }
    double L = std::log(0.5 * z) + EULER_GAMMA;
    return Complex(0.5 * s1, (L * s1 - 0.5 * s2) / PI);
}

std::vector<double> bessel_jn(int nmax, double x) {
    std::vector<double> j(nmax + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    int start = std::max(nmax, int(std::ceil(std::abs(x)))) + 22;
    double jp = 0.0, jc = 1e-300, norm = 0.0;
    for (int n = start; n >= 1; --n) {
        double jm = (2.0 * n / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (std::abs(jc) > 1e250) { // rescale to avoid overflow
            jc *= 1e-250;
            jp *= 1e-250;
            for (auto& v : j) v *= 1e-250;
            norm *= 1e-250;
        }
        if (n - 1 <= nmax) j[n - 1] = jc;
        if (n - 1 >= 2 && (n - 1) % 2 == 0) norm += 2.0 * jc;
    }
    norm += j[0];
    for (auto& v : j) v /= norm;
    return j;
}

std::vector<double> bessel_yn(int nmax, double x) {
    Hankel01 h = hankel01(x);
    std::vector<double> y(nmax + 1);
    y[0] = h.h0.imag();
    if (nmax >= 1) y[1] = h.h1.imag();
    for (int n = 1; n < nmax; ++n) y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
    return y;
}

Complex greens(double k, const Vec2& x, const Vec2& y) {
    double r = norm(x - y);
    if (r == 0.0) fail(Err::DomainError, "greens: coincident points");
    return 0.25 * I * hankel01(k * r).h0;
}

Complex greens_grad_dot(double k, const Vec2& x, const Vec2& y, const Vec2& dir) {
    Vec2 d = x - y;
    double r = norm(d);
    if (r == 0.0) fail(Err::DomainError, "greens_grad_dot: coincident points");
    Complex h1 = hankel01(k * r).h1;
    return -0.25 * I * k * h1 * (dot(dir, d) / r);
}

Complex greens_hess_quad(double k, const Vec2& x, const Vec2& y, const Vec2& dirA, const Vec2& dirB) {
    Vec2 d = x - y;
    double r = norm(d);
    if (r == 0.0) fail(Err::DomainError, "greens_hess_quad: coincident points");
    Hankel01 h = hankel01(k * r);
    double a = dot(dirA, d) / r, b = dot(dirB, d) / r;
    Complex rad = (2.0 * k / r) * h.h1 - k * k * h.h0;
    return 0.25 * I * (rad * a * b - (k / r) * h.h1 * dot(dirA, dirB));
}

} // namespace vtbem
