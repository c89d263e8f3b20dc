#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <stdexcept>
#include <string>

namespace stab3 {

// Exact scalar used throughout the lattice-side computations.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& x) { return x.template convert_to<double>(); }

// Serialized form is "p" for integers and otherwise "p/q" with q > 0.
inline std::string to_string(const Rational& x)
{
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

inline Rational parse_rational(const std::string& s)
{
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: '" + s + "'");
    }
}

// Complex numbers with exact rational real and imaginary parts.
// std::complex requires a floating-point type, hence a dedicated struct.
struct CRat {
    Rational re{0};
    Rational im{0};

    CRat() = default;
    CRat(int v) : re(v) {}
    CRat(Rational r) : re(std::move(r)) {}
    CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static CRat i(const Rational& v = 1) { return CRat(Rational(0), v); }

    bool is_zero() const { return re == 0 && im == 0; }
    CRat conj() const { return CRat(re, -im); }
    Rational norm2() const { return re * re + im * im; }

    CRat operator-() const { return CRat(-re, -im); }
    CRat& operator+=(const CRat& o) { re += o.re; im += o.im; return *this; }
    CRat& operator-=(const CRat& o) { re -= o.re; im -= o.im; return *this; }
    CRat& operator*=(const CRat& o)
    {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    CRat& operator/=(const CRat& o)
    {
        Rational n = o.norm2();
        if (n == 0) throw std::domain_error("division by zero");
        Rational r = (re * o.re + im * o.im) / n;
        im = (im * o.re - re * o.im) / n;
        re = std::move(r);
        return *this;
    }

    friend CRat operator+(CRat a, const CRat& b) { return a += b; }
    friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
    friend CRat operator*(CRat a, const CRat& b) { return a *= b; }
    friend CRat operator/(CRat a, const CRat& b) { return a /= b; }
    friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
};

inline std::complex<double> to_complex(const CRat& z)
{
    return {to_double(z.re), to_double(z.im)};
}

} // namespace stab3
