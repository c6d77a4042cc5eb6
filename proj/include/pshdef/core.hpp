#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pshdef {

using cplx = std::complex<double>;

/// A point of C^2. Coordinates z = x1 + i*y1, w = x2 + i*y2.
struct Point {
    cplx z{0.0, 0.0};
    cplx w{0.0, 0.0};

    double x1() const { return z.real(); }
    double y1() const { return z.imag(); }
    double x2() const { return w.real(); }
    double y2() const { return w.imag(); }

    static Point from_reals(double x1, double y1, double x2, double y2) {
        return Point{cplx{x1, y1}, cplx{x2, y2}};
    }
};

inline Point operator+(const Point& a, const Point& b) { return {a.z + b.z, a.w + b.w}; }
inline Point operator-(const Point& a, const Point& b) { return {a.z - b.z, a.w - b.w}; }

inline double dist(const Point& a, const Point& b) {
    return std::sqrt(std::norm(a.z - b.z) + std::norm(a.w - b.w));
}

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& msg)
        : Error("parse error at position " + std::to_string(pos) + ": " + msg), position(pos) {}
};

struct DomainError : Error {
    using Error::Error;
};

}  // namespace pshdef
