#pragma once

#include <cassert>
#include <ostream>
#include <utility>

#include "pit/unipoly.hpp"

namespace pit {

// Element of F_p(y): numerator / denominator in canonical form
// (denominator monic and nonzero, gcd(num, den) = 1; zero is 0/1).
class RatFunc {
  public:
    RatFunc() : num_(kDefaultPrime), den_(UniPoly::one(kDefaultPrime)) {}
    explicit RatFunc(std::uint64_t p) : num_(p), den_(UniPoly::one(p)) {}
    explicit RatFunc(const Fp& a) : num_(UniPoly::constant(a)), den_(UniPoly::one(a.modulus())) {}
    explicit RatFunc(const UniPoly& f) : num_(f), den_(UniPoly::one(f.modulus())) {}
    RatFunc(UniPoly num, UniPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RatFunc zero(std::uint64_t p) { return RatFunc(p); }
    static RatFunc one(std::uint64_t p) { return RatFunc(UniPoly::one(p)); }

    const UniPoly& num() const { return num_; }
    const UniPoly& den() const { return den_; }
    std::uint64_t modulus() const { return num_.modulus(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw SingularMatrix("division by zero in F_p(y)");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc inverse() const {
        if (is_zero()) throw SingularMatrix("inverse of zero in F_p(y)");
        return RatFunc(den_, num_);
    }

    // canonical form makes structural equality semantic equality
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    // evaluation at y = x; denominator must not vanish there
    Fp eval(const Fp& x) const {
        Fp d = den_.eval(x);
        if (d.is_zero()) throw SingularMatrix("RatFunc::eval: denominator vanishes");
        return num_.eval(x) / d;
    }
    bool eval_ok(const Fp& x) const { return !den_.eval(x).is_zero(); }

    friend std::ostream& operator<<(std::ostream& os, const RatFunc& f) {
        os << "(" << f.num_ << ")";
        if (!f.den_.is_one()) os << "/(" << f.den_ << ")";
        return os;
    }

  private:
    void normalize() {
        assert(num_.modulus() == den_.modulus());
        if (den_.is_zero()) throw SingularMatrix("RatFunc with zero denominator");
        if (num_.is_zero()) {
            den_ = UniPoly::one(num_.modulus());
            return;
        }
        UniPoly g = UniPoly::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = UniPoly::exact_div(num_, g);
            den_ = UniPoly::exact_div(den_, g);
        }
        if (!den_.is_monic()) {
            Fp inv = den_.leading().inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    UniPoly num_;
    UniPoly den_;
};

}  // namespace pit
