#ifndef VTBEM_TYPES_HPP
#define VTBEM_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace vtbem {

using Complex = std::complex<double>;
inline constexpr Complex I{0.0, 1.0};
inline constexpr double PI = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double a, const Vec2& v) { return {a * v.x, a * v.y}; }

// a*b + c*d with one rounding of each partial product (Kahan's algorithm).
// Near-diagonal kernel factors are differences of nearly equal products;
// the naive form loses most of its relative accuracy there.
inline double dot2(double a, double b, double c, double d) {
    double w = c * d;
    double e = std::fma(c, d, -w);
    return std::fma(a, b, w) + e;
}

inline double dot(const Vec2& u, const Vec2& v) { return dot2(u.x, v.x, u.y, v.y); }
inline double cross(const Vec2& u, const Vec2& v) { return dot2(u.x, v.y, -u.y, v.x); }
inline double norm2(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::sqrt(norm2(v)); }
// tangent -> outward normal for positively oriented boundaries (rotate by -pi/2)
inline Vec2 rot_minus90(const Vec2& v) { return {v.y, -v.x}; }
inline Vec2 rot_plus90(const Vec2& v) { return {-v.y, v.x}; }

enum class Err {
    NonPhysical,
    BranchDegenerate,
    DivisionByZero,
    DegenerateCurve,
    FinTooLong,
    GeometryViolation,
    AdaptiveFailure,
    FinitePartKernel,
    ClosedCurve,
    OpenCurve,
    MissingFins,
    ParityMismatch,
    NonzeroStarData,
    SingularStarBlock,
    SingularSystem,
    SingularReducedSystem,
    InterfaceMismatch,
    IllConditionedCoupling,
    ModeResonance,
    SourceInsideDomain,
    DomainError,
    SchemaError,
    UnknownKey,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

} // namespace vtbem

#endif
