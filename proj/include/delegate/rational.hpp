#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace delegate {

/// Exact rational scalar used for every probability, reward, cost and payment.
using Rational = mpq_class;
using Vector = std::vector<Rational>;

/// Thrown when a textual rational cannot be parsed.
class RationalParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector column(std::size_t c) const {
        Vector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Canonical num/den. Prefer this over the two-argument mpq_class constructor, which does not reduce.
inline Rational frac(long num, long den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q", "p", or a finite decimal such as "0.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto fail = [&](const char* why) {
        throw RationalParseError("invalid rational \"" + s + "\": " + why);
    };
    if (s.empty()) fail("empty");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos) fail("mixed decimal and fraction");
        std::string sign;
        std::string body = s;
        if (body[0] == '-' || body[0] == '+') {
            if (body[0] == '-') sign = "-";
            body = body.substr(1);
            dot -= 1;
        }
        std::string whole = body.substr(0, dot);
        std::string frac = body.substr(dot + 1);
        if (whole.empty() && frac.empty()) fail("no digits");
        for (char ch : whole + frac)
            if (ch < '0' || ch > '9') fail("non-digit character");
        mpz_class num(sign + (whole.empty() ? "0" : whole) + frac, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    auto slash = s.find('/');
    std::string num_s = s.substr(0, slash);
    std::string den_s = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto check_int = [&](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size()) fail("missing digits");
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') fail("non-digit character");
    };
    check_int(num_s);
    check_int(den_s);
    if (num_s[0] == '+') num_s = num_s.substr(1);
    if (den_s[0] == '+') den_s = den_s.substr(1);
    mpz_class num(num_s, 10);
    mpz_class den(den_s, 10);
    if (den == 0) fail("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Canonical "p/q" text, or "p" for integers.
inline std::string format_rational(const Rational& r) { return r.get_str(10); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// Decimal approximation with `digits` significant figures (reporting only).
inline std::string format_approx(const Rational& r, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, r.get_d());
    return buf;
}

inline Rational pow_rational(const Rational& base, long exponent) {
    Rational result = 1;
    Rational b = exponent >= 0 ? base : Rational(1) / base;
    for (long e = exponent >= 0 ? exponent : -exponent; e > 0; --e) result *= b;
    return result;
}

namespace detail {

// floor(sqrt(x) * 2^bits) / 2^bits together with an exactness flag.
inline std::pair<Rational, bool> sqrt_floor(const Rational& x, unsigned bits) {
    if (x < 0) throw std::domain_error("square root of a negative rational");
    mpz_class num = x.get_num();
    mpz_class den = x.get_den();
    mpz_class pq = num * den;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), pq.get_mpz_t());
    if (root * root == pq) {
        Rational exact(root, den);
        exact.canonicalize();
        return {exact, true};
    }
    mpz_class scaled = pq << (2 * bits);
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    Rational r(root, den << bits);
    r.canonicalize();
    return {r, false};
}

}  // namespace detail

/// Largest rational of the form k / (den * 2^bits) not above sqrt(x); exact for perfect squares.
inline Rational sqrt_lower(const Rational& x, unsigned bits = 48) { return detail::sqrt_floor(x, bits).first; }

/// Rational upper bound on sqrt(x) within 2^-bits / den of the true value.
inline Rational sqrt_upper(const Rational& x, unsigned bits = 48) {
    auto [low, exact] = detail::sqrt_floor(x, bits);
    if (exact) return low;
    Rational step(mpz_class(1), mpz_class(x.get_den()) << bits);
    step.canonicalize();
    return low + step;
}

inline Rational dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace delegate
