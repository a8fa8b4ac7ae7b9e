#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace algd {

using BigRat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Always reduced: gcd(|num|, den) = 1, den > 0.
// Values whose numerator and denominator fit in int64 are stored inline;
// anything larger spills to an immutable heap cpp_rational. All arithmetic
// is exact and total except division by zero.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(long long n, long long d) { *this = make128(n, d); }

    static Rational from_big(const BigRat& b) {
        Rational r;
        r.assign_big(b);
        return r;
    }

    // Parses "p", "-p", "p/q". Arbitrary precision.
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos)
                return from_big(BigRat(BigInt(s)));
            BigInt p(s.substr(0, slash));
            BigInt q(s.substr(slash + 1));
            if (q == 0) throw std::domain_error("rational parse: zero denominator");
            return from_big(BigRat(p, q));
        } catch (const std::domain_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::domain_error("rational parse: bad literal '" + s + "'");
        }
    }

    bool is_zero() const { return small() ? num_ == 0 : false; }  // big is never 0
    bool is_one() const { return small() && num_ == 1 && den_ == 1; }
    int sign() const {
        if (small()) return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1);
        return big_->sign();
    }

    Rational operator-() const {
        if (small()) {
            Rational r;
            r.num_ = -num_;
            r.den_ = den_;
            return r;
        }
        return from_big(BigRat(-*big_));
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.small() && b.small()) {
            if (a.num_ == 0) return b;
            if (b.num_ == 0) return a;
            i128 n = (i128)a.num_ * b.den_ + (i128)b.num_ * a.den_;
            i128 d = (i128)a.den_ * b.den_;
            return make128(n, d);
        }
        return from_big(a.to_big() + b.to_big());
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.small() && b.small()) {
            if (a.num_ == 0 || b.num_ == 0) return Rational();
            i128 n = (i128)a.num_ * b.num_;
            i128 d = (i128)a.den_ * b.den_;
            return make128(n, d);
        }
        return from_big(a.to_big() * b.to_big());
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero_value()) throw std::domain_error("rational division by zero");
        if (a.small() && b.small()) {
            if (a.num_ == 0) return Rational();
            i128 n = (i128)a.num_ * b.den_;
            i128 d = (i128)a.den_ * b.num_;
            return make128(n, d);
        }
        return from_big(a.to_big() / b.to_big());
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (a.small() && b.small()) return a.num_ == b.num_ && a.den_ == b.den_;
        return a.to_big() == b.to_big();
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        if (a.small() && b.small())
            return (i128)a.num_ * b.den_ < (i128)b.num_ * a.den_;
        return a.to_big() < b.to_big();
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational inv() const { return Rational(1) / *this; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    // "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (small()) {
            std::string s = std::to_string(num_);
            if (den_ != 1) s += "/" + std::to_string(den_);
            return s;
        }
        std::string s = boost::multiprecision::numerator(*big_).str();
        if (boost::multiprecision::denominator(*big_) != 1)
            s += "/" + boost::multiprecision::denominator(*big_).str();
        return s;
    }

    BigRat to_big() const {
        if (small()) return BigRat(BigInt(num_), BigInt(den_));
        return *big_;
    }

    bool fits_small() const { return small(); }

private:
    using i128 = __int128;

    // den_ == 0 marks the big representation.
    long long num_;
    long long den_;
    std::shared_ptr<const BigRat> big_;

    bool small() const { return den_ != 0; }
    bool is_zero_value() const { return small() ? num_ == 0 : (*big_ == 0); }

    static i128 gcd128(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    // Reduce n/d (d != 0 required) and pick the storage.
    static Rational make128(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) return Rational();
        i128 g = gcd128(n, d);
        n /= g;
        d /= g;
        constexpr i128 lo = std::numeric_limits<long long>::min();
        constexpr i128 hi = std::numeric_limits<long long>::max();
        Rational r;
        if (n >= lo && n <= hi && d <= hi) {
            r.num_ = (long long)n;
            r.den_ = (long long)d;
        } else {
            BigInt bn = to_bigint(n), bd = to_bigint(d);
            r.num_ = 0;
            r.den_ = 0;
            r.big_ = std::make_shared<const BigRat>(bn, bd);
        }
        return r;
    }

    static BigInt to_bigint(i128 v) {
        bool neg = v < 0;
        unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
        BigInt b = (unsigned long long)(u >> 64);
        b <<= 64;
        b += (unsigned long long)(u & ~0ULL);
        return neg ? BigInt(-b) : b;
    }

    void assign_big(const BigRat& b) {
        BigInt n = boost::multiprecision::numerator(b);
        BigInt d = boost::multiprecision::denominator(b);
        constexpr long long lo = std::numeric_limits<long long>::min();
        constexpr long long hi = std::numeric_limits<long long>::max();
        if (n >= lo && n <= hi && d <= hi) {
            num_ = (long long)n;
            den_ = (long long)d;
            big_.reset();
        } else {
            num_ = 0;
            den_ = 0;
            big_ = std::make_shared<const BigRat>(b);
        }
    }
};

inline Rational frac(long long n, long long d) { return Rational(n, d); }

}  // namespace algd
