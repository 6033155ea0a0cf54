#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kgroth {

using i128 = __int128;

namespace detail {

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational: 128-bit overflow in addition");
    return r;
}

inline i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("rational: 128-bit overflow in subtraction");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational: 128-bit overflow in multiplication");
    return r;
}

inline i128 abs128(i128 a) { return a < 0 ? -a : a; }

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::string to_string128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // the most negative value never occurs: all operations are overflow-checked
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

inline i128 parse128(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("bad integer literal: " + std::string(s));
    i128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + std::string(s));
        v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? -v : v;
}

}  // namespace detail

// Exact rational with 128-bit numerator and denominator. Every operation is
// overflow-checked; the integer case (den == 1) avoids gcd work entirely.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(i128 n, i128 d) : num_(n), den_(d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        normalize();
    }
    static Rational from_i128(i128 n) {
        Rational r;
        r.num_ = n;
        return r;
    }

    i128 num() const { return num_; }
    i128 den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }

    Rational& operator+=(const Rational& o) {
        if (den_ == 1 && o.den_ == 1) {
            num_ = detail::checked_add(num_, o.num_);
            return *this;
        }
        i128 g = detail::gcd128(den_, o.den_);
        i128 a = detail::checked_mul(num_, o.den_ / g);
        i128 b = detail::checked_mul(o.num_, den_ / g);
        num_ = detail::checked_add(a, b);
        den_ = detail::checked_mul(den_, o.den_ / g);
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        if (den_ == 1 && o.den_ == 1) {
            num_ = detail::checked_mul(num_, o.num_);
            return *this;
        }
        i128 g1 = detail::gcd128(num_, o.den_);
        i128 g2 = detail::gcd128(o.num_, den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        num_ = detail::checked_mul(num_ / g1, o.num_ / g2);
        den_ = detail::checked_mul(den_ / g2, o.den_ / g1);
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("rational: division by zero");
        Rational inv;
        inv.num_ = o.den_;
        inv.den_ = o.num_;
        inv.normalize();
        return *this *= inv;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return detail::checked_mul(a.num_, b.den_) < detail::checked_mul(b.num_, a.den_);
    }

    std::string str() const {
        if (den_ == 1) return detail::to_string128(num_);
        return detail::to_string128(num_) + "/" + detail::to_string128(den_);
    }

    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return from_i128(detail::parse128(s));
        return Rational(detail::parse128(s.substr(0, slash)), detail::parse128(s.substr(slash + 1)));
    }

    // Used by hashing and debugging; exact only for values that fit.
    long long to_ll() const {
        if (den_ != 1) throw std::domain_error("rational: not an integer: " + str());
        if (num_ > INT64_MAX || num_ < INT64_MIN) throw std::overflow_error("rational: does not fit in 64 bits");
        return static_cast<long long>(num_);
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (den_ == 1) return;
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        i128 g = detail::gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    i128 num_ = 0;
    i128 den_ = 1;
};

inline Rational binomial(long long n, long long k) {
    // Generalized binomial: n may be negative.
    if (k < 0) return Rational(0);
    Rational r(1);
    for (long long i = 0; i < k; ++i) {
        r *= Rational(n - i);
        r /= Rational(i + 1);
    }
    return r;
}

inline Rational factorial(long long n) {
    Rational r(1);
    for (long long i = 2; i <= n; ++i) r *= Rational(i);
    return r;
}

}  // namespace kgroth
