#pragma once

#include <cassert>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pit/errors.hpp"
#include "pit/fp.hpp"

namespace pit {

// Univariate polynomial over F_p, coefficients lowest degree first, trailing
// (leading) coefficient nonzero unless zero polynomial (empty coefficient list).
class UniPoly {
  public:
    UniPoly() : p_(kDefaultPrime) {}
    explicit UniPoly(std::uint64_t p) : p_(p) {}
    UniPoly(std::vector<std::uint64_t> coeffs, std::uint64_t p) : c_(std::move(coeffs)), p_(p) {
        for (auto& x : c_) x %= p_;
        trim();
    }

    static UniPoly zero(std::uint64_t p) { return UniPoly(p); }
    static UniPoly constant(const Fp& a) {
        if (a.is_zero()) return UniPoly(a.modulus());
        return UniPoly({a.value()}, a.modulus());
    }
    static UniPoly one(std::uint64_t p) { return UniPoly({1}, p); }
    // c * y^k
    static UniPoly monomial(const Fp& c, std::uint64_t k) {
        if (c.is_zero()) return UniPoly(c.modulus());
        std::vector<std::uint64_t> v(k + 1, 0);
        v[k] = c.value();
        return UniPoly(std::move(v), c.modulus());
    }

    std::uint64_t modulus() const { return p_; }
    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1 by convention
    std::int64_t degree() const { return static_cast<std::int64_t>(c_.size()) - 1; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }

    Fp coeff(std::size_t i) const { return Fp(i < c_.size() ? c_[i] : 0, p_); }
    Fp leading() const {
        if (c_.empty()) throw EmptyPolynomial("leading coefficient of zero polynomial");
        return Fp(c_.back(), p_);
    }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

    Fp eval(const Fp& x) const {
        Fp r = Fp::zero(p_);
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + Fp(c_[i], p_);
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        assert(a.p_ == b.p_);
        std::vector<std::uint64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::uint64_t s = (i < a.c_.size() ? a.c_[i] : 0);
            std::uint64_t t = (i < b.c_.size() ? b.c_[i] : 0);
            s += t;
            if (s >= a.p_) s -= a.p_;
            r[i] = s;
        }
        UniPoly out(a.p_);
        out.c_ = std::move(r);
        out.trim();
        return out;
    }

    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        assert(a.p_ == b.p_);
        std::vector<std::uint64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::uint64_t s = (i < a.c_.size() ? a.c_[i] : 0);
            std::uint64_t t = (i < b.c_.size() ? b.c_[i] : 0);
            r[i] = s >= t ? s - t : s + a.p_ - t;
        }
        UniPoly out(a.p_);
        out.c_ = std::move(r);
        out.trim();
        return out;
    }

    UniPoly operator-() const { return UniPoly::zero(p_) - *this; }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        assert(a.p_ == b.p_);
        if (a.is_zero() || b.is_zero()) return UniPoly(a.p_);
        const std::uint64_t p = a.p_;
        std::vector<std::uint64_t> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                std::uint64_t m = Fp::mulmod(a.c_[i], b.c_[j], p);
                std::uint64_t s = r[i + j] + m;
                if (s >= p) s -= p;
                r[i + j] = s;
            }
        }
        UniPoly out(p);
        out.c_ = std::move(r);
        out.trim();
        return out;
    }

    UniPoly scaled(const Fp& s) const {
        if (s.is_zero()) return UniPoly(p_);
        UniPoly out(p_);
        out.c_.resize(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = Fp::mulmod(c_[i], s.value(), p_);
        out.trim();
        return out;
    }

    // multiply by y^k
    UniPoly shifted_up(std::uint64_t k) const {
        if (is_zero() || k == 0) {
            UniPoly out = *this;
            return out;
        }
        UniPoly out(p_);
        out.c_.assign(k, 0);
        out.c_.insert(out.c_.end(), c_.begin(), c_.end());
        return out;
    }

    // in-place: this += b * s * y^k  (the workhorse of the transfer verifiers)
    void add_scaled_shifted(const UniPoly& b, const Fp& s, std::uint64_t k) {
        assert(p_ == b.p_);
        if (b.is_zero() || s.is_zero()) return;
        if (c_.size() < b.c_.size() + k) c_.resize(b.c_.size() + k, 0);
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j] == 0) continue;
            std::uint64_t m = Fp::mulmod(b.c_[j], s.value(), p_);
            std::uint64_t t = c_[j + k] + m;
            if (t >= p_) t -= p_;
            c_[j + k] = t;
        }
        trim();
    }

    static void divrem(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r) {
        assert(a.p_ == b.p_);
        if (b.is_zero()) throw SingularMatrix("division by zero polynomial");
        const std::uint64_t p = a.p_;
        q = UniPoly(p);
        r = a;
        if (a.degree() < b.degree()) return;
        Fp inv_lead = b.leading().inverse();
        q.c_.assign(a.c_.size() - b.c_.size() + 1, 0);
        while (!r.is_zero() && r.degree() >= b.degree()) {
            std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
            Fp f = r.leading() * inv_lead;
            q.c_[shift] = f.value();
            // r -= f * y^shift * b
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                std::uint64_t m = Fp::mulmod(b.c_[j], f.value(), p);
                std::uint64_t& slot = r.c_[j + shift];
                slot = slot >= m ? slot - m : slot + p - m;
            }
            r.trim();
        }
        q.trim();
    }

    friend UniPoly operator/(const UniPoly& a, const UniPoly& b) {
        UniPoly q, r;
        divrem(a, b, q, r);
        return q;
    }
    friend UniPoly operator%(const UniPoly& a, const UniPoly& b) {
        UniPoly q, r;
        divrem(a, b, q, r);
        return r;
    }

    // exact division; throws if the remainder is nonzero
    static UniPoly exact_div(const UniPoly& a, const UniPoly& b) {
        UniPoly q, r;
        divrem(a, b, q, r);
        if (!r.is_zero()) throw PitError("exact_div: nonzero remainder");
        return q;
    }

    // monic gcd; gcd(0, 0) = 0
    static UniPoly gcd(UniPoly a, UniPoly b) {
        while (!b.is_zero()) {
            UniPoly q, r;
            divrem(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.is_zero() && !a.is_monic()) a = a.scaled(a.leading().inverse());
        return a;
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return a.c_ != b.c_; }

    friend std::ostream& operator<<(std::ostream& os, const UniPoly& f) {
        if (f.is_zero()) return os << "0";
        bool first = true;
        for (std::size_t i = 0; i < f.c_.size(); ++i) {
            if (f.c_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << f.c_[i];
            if (i > 0) os << "*y^" << i;
        }
        return os;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<std::uint64_t> c_;
    std::uint64_t p_;
};

}  // namespace pit
