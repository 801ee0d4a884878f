#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "pit/errors.hpp"
#include "pit/fp.hpp"
#include "pit/ratfunc.hpp"
#include "pit/unipoly.hpp"

namespace pit {

// Dense matrix over an exact scalar (Fp, UniPoly, RatFunc). Index sets of the
// transfer machinery (supports, cones) live next to the matrix as ordered
// exponent lists; the matrix itself is plain rows x cols.
template <class T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix zero(std::size_t rows, std::size_t cols, std::uint64_t p) {
        return Matrix(rows, cols, T::zero(p));
    }
    static Matrix identity(std::size_t n, std::uint64_t p) {
        Matrix m = zero(n, n, p);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T::one(p);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix without_column(std::size_t j) const {
        Matrix m(rows_, cols_ - 1, T{});
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t c = 0, cc = 0; c < cols_; ++c)
                if (c != j) m(i, cc++) = (*this)(i, c);
        return m;
    }

    Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
        Matrix m(rs.size(), cs.size(), T{});
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape");
        assert(a.rows_ * b.cols_ == 0 || !a.data_.empty() || !b.data_.empty());
        std::uint64_t p = a.data_.empty() ? b.data_[0].modulus() : a.data_[0].modulus();
        Matrix r = Matrix::zero(a.rows_, b.cols_, p);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference");
        Matrix r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = r.data_[i] - b.data_[i];
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

// ---- elimination over a field (Fp or RatFunc) ----

template <class T>
std::size_t rank(Matrix<T> m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        T inv = m(r, c).inverse();
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c).is_zero()) continue;
            T f = m(i, c) * inv;
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(r, j);
        }
        ++r;
    }
    return r;
}

template <class T>
T det(Matrix<T> m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("det of non-square matrix");
    if (m.rows() == 0) throw DimensionMismatch("det of empty matrix");
    std::uint64_t p = m(0, 0).modulus();
    T d = T::one(p);
    bool neg = false;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        std::size_t piv = c;
        while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
        if (piv == m.rows()) return T::zero(p);
        if (piv != c) {
            neg = !neg;
            for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(piv, j), m(c, j));
        }
        d = d * m(c, c);
        T inv = m(c, c).inverse();
        for (std::size_t i = c + 1; i < m.rows(); ++i) {
            if (m(i, c).is_zero()) continue;
            T f = m(i, c) * inv;
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(c, j);
        }
    }
    return neg ? -d : d;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix");
    std::size_t n = a.rows();
    if (n == 0) throw DimensionMismatch("inverse of empty matrix");
    std::uint64_t p = a(0, 0).modulus();
    Matrix<T> m = a, inv = Matrix<T>::identity(n, p);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c).is_zero()) ++piv;
        if (piv == n) throw SingularMatrix("matrix is singular");
        if (piv != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        T pi = m(c, c).inverse();
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = m(c, j) * pi;
            inv(c, j) = inv(c, j) * pi;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c).is_zero()) continue;
            T f = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = m(i, j) - f * m(c, j);
                inv(i, j) = inv(i, j) - f * inv(c, j);
            }
        }
    }
    return inv;
}

// basis of { v : M v = 0 }, one vector per free column
template <class T>
std::vector<std::vector<T>> nullspace_basis(Matrix<T> m) {
    std::size_t nr = m.rows(), nc = m.cols();
    if (nr == 0 || nc == 0) {
        // every standard basis vector is in the nullspace of an empty map
        std::vector<std::vector<T>> basis;
        return basis;
    }
    std::uint64_t p = m(0, 0).modulus();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = r;
        while (piv < nr && m(piv, c).is_zero()) ++piv;
        if (piv == nr) continue;
        if (piv != r)
            for (std::size_t j = 0; j < nc; ++j) std::swap(m(piv, j), m(r, j));
        T pi = m(r, c).inverse();
        for (std::size_t j = 0; j < nc; ++j) m(r, j) = m(r, j) * pi;
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            T f = m(i, c);
            for (std::size_t j = 0; j < nc; ++j) m(i, j) = m(i, j) - f * m(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(nc, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t free = 0; free < nc; ++free) {
        if (is_pivot[free]) continue;
        std::vector<T> v(nc, T::zero(p));
        v[free] = T::one(p);
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// strongly full: |rows| = |cols| - 1 and every column-deleted square minor invertible
template <class T>
bool is_strongly_full(const Matrix<T>& m) {
    if (m.rows() + 1 != m.cols()) throw DimensionMismatch("strongly full needs |I| = |J| - 1");
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m.rows() == 0) continue;  // 0x1: deleting the column leaves an empty invertible map
        if (det(m.without_column(j)).is_zero()) return false;
    }
    return true;
}

// ---- Kronecker and Hadamard-tensor products ----

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols(), T{});
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
            for (std::size_t j1 = 0; j1 < a.cols(); ++j1)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    r(i1 * b.rows() + i2, j1 * b.cols() + j2) = a(i1, j1) * b(i2, j2);
    return r;
}

// column (j1, j2) is the coordinatewise product of column j1 of a and column j2 of b
template <class T>
Matrix<T> had_tensor(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("had_tensor needs equal row index sets");
    Matrix<T> r(a.rows(), a.cols() * b.cols(), T{});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1)
            for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                r(i, j1 * b.cols() + j2) = a(i, j1) * b(i, j2);
    return r;
}

// v star M: Hadamard product of v with each column
template <class T>
Matrix<T> had_scale(const std::vector<T>& v, const Matrix<T>& m) {
    if (v.size() != m.rows()) throw DimensionMismatch("had_scale shape");
    Matrix<T> r = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = v[i] * m(i, j);
    return r;
}

// ---- fraction-free elimination over F_p[y] (Bareiss) ----

inline std::size_t bareiss_rank(Matrix<UniPoly> m) {
    std::size_t nr = m.rows(), nc = m.cols();
    if (nr == 0 || nc == 0) return 0;
    std::uint64_t p = m(0, 0).modulus();
    UniPoly prev = UniPoly::one(p);
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = r;
        while (piv < nr && m(piv, c).is_zero()) ++piv;
        if (piv == nr) continue;
        if (piv != r)
            for (std::size_t j = c; j < nc; ++j) std::swap(m(piv, j), m(r, j));
        for (std::size_t i = r + 1; i < nr; ++i) {
            for (std::size_t j = c + 1; j < nc; ++j)
                m(i, j) = UniPoly::exact_div(m(r, c) * m(i, j) - m(i, c) * m(r, j), prev);
            m(i, c) = UniPoly::zero(p);
        }
        prev = m(r, c);
        ++r;
    }
    return r;
}

inline UniPoly bareiss_det(Matrix<UniPoly> m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("det of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) throw DimensionMismatch("det of empty matrix");
    std::uint64_t p = m(0, 0).modulus();
    UniPoly prev = UniPoly::one(p);
    bool neg = false;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c).is_zero()) ++piv;
        if (piv == n) return UniPoly::zero(p);
        if (piv != c) {
            neg = !neg;
            for (std::size_t j = c; j < n; ++j) std::swap(m(piv, j), m(c, j));
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < n; ++j)
                m(i, j) = UniPoly::exact_div(m(c, c) * m(i, j) - m(i, c) * m(c, j), prev);
            m(i, c) = UniPoly::zero(p);
        }
        prev = m(c, c);
    }
    UniPoly d = m(n - 1, n - 1);
    return neg ? -d : d;
}

// Clear denominators column by column (column scaling preserves rank):
// entry num_i / den_i becomes num_i * (L / den_i) with L the lcm of the column.
inline Matrix<UniPoly> clear_denominators(const Matrix<RatFunc>& m) {
    std::uint64_t p = kDefaultPrime;
    if (m.rows() > 0 && m.cols() > 0) p = m(0, 0).modulus();
    Matrix<UniPoly> r(m.rows(), m.cols(), UniPoly::zero(p));
    for (std::size_t j = 0; j < m.cols(); ++j) {
        UniPoly lcm = UniPoly::one(p);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const UniPoly& d = m(i, j).den();
            lcm = UniPoly::exact_div(lcm * d, UniPoly::gcd(lcm, d));
        }
        for (std::size_t i = 0; i < m.rows(); ++i)
            r(i, j) = m(i, j).num() * UniPoly::exact_div(lcm, m(i, j).den());
    }
    return r;
}

// Exact rank over F_p(y): the spec's fraction-free route.
inline std::size_t rank(const Matrix<RatFunc>& m) { return bareiss_rank(clear_denominators(m)); }

// Exact rank of a polynomial matrix by certified evaluation: rank(M(x)) never
// exceeds the symbolic rank, and some r-minor (degree <= r * maxdeg) survives
// at one of maxdeg * min(nr, nc) + 1 distinct points. Early exit once the rank
// cannot grow. Requires p > the scan bound.
inline std::size_t rank_eval_certified(const Matrix<UniPoly>& m) {
    std::size_t nr = m.rows(), nc = m.cols();
    if (nr == 0 || nc == 0) return 0;
    std::uint64_t p = m(0, 0).modulus();
    std::int64_t maxdeg = 0;
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) maxdeg = std::max(maxdeg, m(i, j).degree());
    std::size_t cap = std::min(nr, nc);
    std::uint64_t bound = static_cast<std::uint64_t>(maxdeg) * cap;  // minor degree bound
    if (bound + 1 > p) throw FieldTooSmall("rank_eval_certified: scan bound exceeds p");
    std::size_t best = 0;
    for (std::uint64_t x = 0; x <= bound; ++x) {
        Fp pt(x, p);
        Matrix<Fp> ev = Matrix<Fp>::zero(nr, nc, p);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) ev(i, j) = m(i, j).eval(pt);
        best = std::max(best, rank(ev));
        if (best == cap) break;
    }
    return best;
}

}  // namespace pit
