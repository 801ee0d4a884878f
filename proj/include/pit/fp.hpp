#pragma once

#include <cassert>
#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <string>

#include "pit/errors.hpp"
#include "pit/rng.hpp"

namespace pit {

// Default prime: 2^61 - 1 (Mersenne). Large enough that no degree or exponent
// of a desk-scale run collides with the characteristic.
inline constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;

// Element of F_p for a runtime prime p < 2^62. The modulus travels with the
// value; mixed-modulus arithmetic is a programming error.
class Fp {
  public:
    Fp() : v_(0), p_(0) {}
    Fp(std::uint64_t value, std::uint64_t p) : v_(value % p), p_(p) { assert(p >= 2); }

    static Fp from_int(std::int64_t value, std::uint64_t p) {
        if (value >= 0) return Fp(static_cast<std::uint64_t>(value) % p, p);
        std::uint64_t m = static_cast<std::uint64_t>(-(value + 1)) + 1;  // |value| without UB
        std::uint64_t r = m % p;
        return Fp(r == 0 ? 0 : p - r, p);
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }

    Fp& operator+=(const Fp& o) {
        assert(compatible(o));
        v_ += o.v_;
        if (v_ >= p_) v_ -= p_;
        return *this;
    }
    Fp& operator-=(const Fp& o) {
        assert(compatible(o));
        v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
        return *this;
    }
    Fp& operator*=(const Fp& o) {
        assert(compatible(o));
        v_ = mulmod(v_, o.v_, p_);
        return *this;
    }
    Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }

    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
    Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_); }

    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return a.v_ != b.v_; }

    Fp pow(std::uint64_t e) const {
        Fp r(1, p_), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    Fp inverse() const {
        if (v_ == 0) throw SingularMatrix("inverse of zero in F_p");
        return pow(p_ - 2);  // p prime
    }

    static Fp zero(std::uint64_t p) { return Fp(0, p); }
    static Fp one(std::uint64_t p) { return Fp(1, p); }
    static Fp random(Rng& rng, std::uint64_t p) { return Fp(rng.below(p), p); }

    static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
    }

    friend std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.v_; }

  private:
    bool compatible(const Fp& o) const { return p_ == o.p_; }

    std::uint64_t v_;
    std::uint64_t p_;
};

// C(a, b) mod p with the conventions C(a, b) = 0 for a < b and C(a, 0) = 1.
// Requires p > b (holds whenever p exceeds all degrees in play).
inline Fp binomial(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    if (b > a) return Fp::zero(p);
    if (b == 0 || b == a) return Fp::one(p);
    if (b > a - b) b = a - b;
    Fp num = Fp::one(p), den = Fp::one(p);
    for (std::uint64_t i = 0; i < b; ++i) {
        num *= Fp(a - i, p);
        den *= Fp(i + 1, p);
    }
    return num / den;
}

}  // namespace pit
