#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace fluxlab {

// Complex scalar stored as (log|z|, arg z).  The tunneling quantities here
// scale like exp(-S/h) and underflow doubles well inside the physically
// interesting h range, so all products and two-term sums are carried in log
// magnitude and converted to plain doubles only at reporting boundaries.
struct LogComplex {
    double log_mag = -std::numeric_limits<double>::infinity();
    double phase = 0.0; // radians

    LogComplex() = default;
    LogComplex(double lm, double ph) : log_mag(lm), phase(ph) {}

    static LogComplex zero() { return {}; }

    static LogComplex from_real(double x) {
        if (x == 0.0) return zero();
        return {std::log(std::abs(x)), x > 0.0 ? 0.0 : M_PI};
    }

    static LogComplex from_complex(std::complex<double> z) {
        if (z == std::complex<double>(0.0, 0.0)) return zero();
        return {std::log(std::abs(z)), std::arg(z)};
    }

    bool is_zero() const { return std::isinf(log_mag) && log_mag < 0; }

    // Plain value; underflows to 0 / overflows to inf outside double range.
    std::complex<double> value() const {
        if (is_zero()) return {0.0, 0.0};
        const double m = std::exp(log_mag);
        return {m * std::cos(phase), m * std::sin(phase)};
    }

    double abs() const { return is_zero() ? 0.0 : std::exp(log_mag); }
    double log10_abs() const { return log_mag / std::log(10.0); }

    LogComplex conj() const { return {log_mag, -phase}; }

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return {a.log_mag + b.log_mag, a.phase + b.phase};
    }

    friend LogComplex operator*(const LogComplex& a, double c) {
        return a * from_real(c);
    }

    // Two-term sum: rescale by the larger magnitude so the mantissa
    // arithmetic happens on O(1) numbers.
    friend LogComplex operator+(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const double m = std::max(a.log_mag, b.log_mag);
        const std::complex<double> w =
            std::polar(std::exp(a.log_mag - m), a.phase) +
            std::polar(std::exp(b.log_mag - m), b.phase);
        if (w == std::complex<double>(0.0, 0.0)) return zero();
        return {m + std::log(std::abs(w)), std::arg(w)};
    }

    friend LogComplex operator-(const LogComplex& a, const LogComplex& b) {
        return a + LogComplex{b.log_mag, b.phase + M_PI};
    }
};

} // namespace fluxlab
