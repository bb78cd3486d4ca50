#pragma once

// Exact arithmetic in the group of (d+1)x(d+1) unipotent upper-triangular
// matrices: closed-form powers, inverses, Frobenius norms, exp/log between
// the group and its nilpotent Lie algebra, a low-order CBH product, and
// reduction modulo the integer-entry lattice to the fundamental-domain
// representative with all entries in (-1/2, 1/2].
//
// A matrix is stored by superdiagonals: entry (i, k) sits on the k-th
// superdiagonal, row i, for 1 <= k <= d, 1 <= i <= d-k+1 (d(d+1)/2 entries;
// the diagonal is implicitly 1 for group elements, 0 for algebra elements).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace nilbracket::unipotent {

namespace detail {

inline std::size_t entry_count(unsigned d) { return static_cast<std::size_t>(d) * (d + 1) / 2; }

// Offset of superdiagonal k in the entry vector (entries are grouped by k,
// then by row i).
inline std::size_t entry_index(unsigned d, unsigned i, unsigned k) {
    if (k < 1 || k > d || i < 1 || i > d - k + 1)
        throw std::out_of_range("superdiagonal entry index out of range");
    std::size_t offset = static_cast<std::size_t>(k - 1) * (d + 1) -
                         static_cast<std::size_t>(k) * (k - 1) / 2;
    return offset + (i - 1);
}

}  // namespace detail

class UTMatrix {
   public:
    explicit UTMatrix(unsigned d) : d_(d), e_(detail::entry_count(d), Rational(0)) {
        if (d == 0) throw std::invalid_argument("UTMatrix: dim must be >= 1");
    }

    UTMatrix(unsigned d, std::vector<Rational> entries) : d_(d), e_(std::move(entries)) {
        if (d == 0) throw std::invalid_argument("UTMatrix: dim must be >= 1");
        if (e_.size() != detail::entry_count(d))
            throw std::invalid_argument("UTMatrix: wrong entry count");
    }

    static UTMatrix identity(unsigned d) { return UTMatrix(d); }

    unsigned dim() const { return d_; }
    const std::vector<Rational>& entries() const { return e_; }

    const Rational& at(unsigned i, unsigned k) const { return e_[detail::entry_index(d_, i, k)]; }
    Rational& at(unsigned i, unsigned k) { return e_[detail::entry_index(d_, i, k)]; }

    bool is_identity() const {
        for (const Rational& x : e_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const UTMatrix& a, const UTMatrix& b) {
        return a.d_ == b.d_ && a.e_ == b.e_;
    }

   private:
    unsigned d_;
    std::vector<Rational> e_;
};

// Strictly upper-triangular (nilpotent) matrix with the same entry layout.
class NilpotentUT {
   public:
    explicit NilpotentUT(unsigned d) : d_(d), e_(detail::entry_count(d), Rational(0)) {
        if (d == 0) throw std::invalid_argument("NilpotentUT: dim must be >= 1");
    }

    NilpotentUT(unsigned d, std::vector<Rational> entries) : d_(d), e_(std::move(entries)) {
        if (d == 0) throw std::invalid_argument("NilpotentUT: dim must be >= 1");
        if (e_.size() != detail::entry_count(d))
            throw std::invalid_argument("NilpotentUT: wrong entry count");
    }

    unsigned dim() const { return d_; }
    const std::vector<Rational>& entries() const { return e_; }

    const Rational& at(unsigned i, unsigned k) const { return e_[detail::entry_index(d_, i, k)]; }
    Rational& at(unsigned i, unsigned k) { return e_[detail::entry_index(d_, i, k)]; }

    bool is_zero() const {
        for (const Rational& x : e_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const NilpotentUT& a, const NilpotentUT& b) {
        return a.d_ == b.d_ && a.e_ == b.e_;
    }

   private:
    unsigned d_;
    std::vector<Rational> e_;
};

inline void require_same_dim(unsigned a, unsigned b, const char* who) {
    if (a != b) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// Group product: c_i^k = a_i^k + b_i^k + sum_{j=1}^{k-1} a_i^{k-j} b_{i+k-j}^j
// (the 0-th superdiagonal of either factor is the implicit diagonal of ones).
inline UTMatrix mul(const UTMatrix& a, const UTMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "mul");
    const unsigned d = a.dim();
    UTMatrix c(d);
    for (unsigned k = 1; k <= d; ++k) {
        for (unsigned i = 1; i <= d - k + 1; ++i) {
            Rational acc = a.at(i, k) + b.at(i, k);
            for (unsigned j = 1; j < k; ++j) acc += a.at(i, k - j) * b.at(i + k - j, j);
            c.at(i, k) = acc;
        }
    }
    return c;
}

// Product of strictly upper-triangular matrices (no diagonal terms).
inline NilpotentUT mul(const NilpotentUT& a, const NilpotentUT& b) {
    require_same_dim(a.dim(), b.dim(), "mul");
    const unsigned d = a.dim();
    NilpotentUT c(d);
    for (unsigned k = 2; k <= d; ++k) {
        for (unsigned i = 1; i <= d - k + 1; ++i) {
            Rational acc(0);
            for (unsigned s = 1; s < k; ++s) acc += a.at(i, s) * b.at(i + s, k - s);
            c.at(i, k) = acc;
        }
    }
    return c;
}

inline NilpotentUT add(const NilpotentUT& a, const NilpotentUT& b) {
    require_same_dim(a.dim(), b.dim(), "add");
    NilpotentUT c = a;
    for (unsigned k = 1; k <= a.dim(); ++k)
        for (unsigned i = 1; i <= a.dim() - k + 1; ++i) c.at(i, k) += b.at(i, k);
    return c;
}

inline NilpotentUT scale(const Rational& c, const NilpotentUT& a) {
    NilpotentUT r = a;
    for (unsigned k = 1; k <= a.dim(); ++k)
        for (unsigned i = 1; i <= a.dim() - k + 1; ++i) r.at(i, k) = Rational(c * a.at(i, k));
    return r;
}

inline NilpotentUT commutator(const NilpotentUT& x, const NilpotentUT& y) {
    return add(mul(x, y), scale(Rational(-1), mul(y, x)));
}

// Strictly upper part of A - I (the displacement of a group element).
inline NilpotentUT displacement(const UTMatrix& a) {
    return NilpotentUT(a.dim(), a.entries());
}

// C^{-1} = I + sum_{i=1}^{d} (I - C)^i; I - C is nilpotent so the series is finite.
inline UTMatrix inv(const UTMatrix& a) {
    const unsigned d = a.dim();
    NilpotentUT n = scale(Rational(-1), displacement(a));  // I - A
    NilpotentUT acc = n;
    NilpotentUT power = n;
    for (unsigned t = 2; t <= d; ++t) {
        power = mul(power, n);
        acc = add(acc, power);
    }
    return UTMatrix(d, acc.entries());
}

// n-th power of the seed with first superdiagonal alpha and zeros above:
// entry (i, k) of the power is binomial(n, k)·alpha_i···alpha_{i+k-1}, valid
// for every integer n through the falling-factorial binomial.
inline UTMatrix pow_closed(const std::vector<Rational>& alpha, long long n) {
    const unsigned d = static_cast<unsigned>(alpha.size());
    if (d == 0) throw std::invalid_argument("pow_closed: empty alpha");
    UTMatrix m(d);
    Int nz(static_cast<long>(n));
    for (unsigned k = 1; k <= d; ++k) {
        Rational binom(binomial(nz, k));
        for (unsigned i = 1; i <= d - k + 1; ++i) {
            Rational prod = binom;
            for (unsigned t = 0; t < k; ++t) prod *= alpha[i - 1 + t];
            m.at(i, k) = prod;
        }
    }
    return m;
}

// Entry (i, k) of A^n as a polynomial in n:
//   sum_{l=1}^{k} binomial(n, l) · P_l(a; i, k),
// where P_l sums, over length-l compositions (s_1..s_l) of k, the products
// a_i^{s_1} a_{i+s_1}^{s_2} ··· along the walk of superdiagonal steps.
// The expression is valid for every integer n (falling-factorial binomials).
inline UTMatrix pow_polynomial(const UTMatrix& a, long long n) {
    const unsigned d = a.dim();
    Int nz(static_cast<long>(n));
    std::vector<Rational> binom(d + 1, Rational(0));
    for (unsigned l = 1; l <= d; ++l) binom[l] = Rational(binomial(nz, l));

    UTMatrix out(d);
    std::vector<unsigned> comp;
    for (unsigned k = 1; k <= d; ++k) {
        for (unsigned i = 1; i <= d - k + 1; ++i) {
            Rational acc(0);
            comp.clear();
            auto walk = [&](auto&& self, unsigned start, unsigned remaining) -> void {
                if (remaining == 0) {
                    Rational prod = binom[static_cast<unsigned>(comp.size())];
                    unsigned row = i;
                    for (unsigned s : comp) {
                        prod *= a.at(row, s);
                        row += s;
                    }
                    acc += prod;
                    return;
                }
                for (unsigned s = 1; s <= remaining; ++s) {
                    comp.push_back(s);
                    self(self, start + s, remaining - s);
                    comp.pop_back();
                }
            };
            walk(walk, i, k);
            out.at(i, k) = acc;
        }
    }
    return out;
}

// A^n for any integer n; negative powers go through the exact inverse.
inline UTMatrix pow_general(const UTMatrix& a, long long n) {
    if (n < 0) return inv(pow_general(a, -n));
    return pow_polynomial(a, n);
}

struct NormValue {
    Rational squared;  // exact
    double value;      // advisory sqrt
};

inline double sqrt_advisory(const Rational& squared) {
    double s = squared.get_d();
    return s > 0 ? std::sqrt(s) : 0.0;
}

// Frobenius norm of the full (d+1)x(d+1) matrix: the d+1 diagonal ones plus
// the stored entries.
inline NormValue frobenius_norm(const UTMatrix& a) {
    Rational sq(a.dim() + 1);
    for (const Rational& x : a.entries()) sq += x * x;
    return NormValue{sq, sqrt_advisory(sq)};
}

inline NormValue frobenius_norm(const NilpotentUT& a) {
    Rational sq(0);
    for (const Rational& x : a.entries()) sq += x * x;
    return NormValue{sq, sqrt_advisory(sq)};
}

// ||A - B||^2: diagonals cancel, so only stored entries differ.
inline Rational diff_norm_squared(const UTMatrix& a, const UTMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "diff_norm_squared");
    Rational sq(0);
    for (std::size_t t = 0; t < a.entries().size(); ++t) {
        Rational diff = a.entries()[t] - b.entries()[t];
        sq += diff * diff;
    }
    return sq;
}

// Exact squared-norm evaluation of the computable sandwich
//   ||A-B|| / ||B||  <=  ||A B^{-1} - I||  <=  ||A-B|| · ||B^{-1}||.
struct MetricBoundsReport {
    Rational lower_sq;
    Rational middle_sq;
    Rational upper_sq;
    bool holds;
};

inline MetricBoundsReport metric_bounds_check(const UTMatrix& a, const UTMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "metric_bounds_check");
    Rational diff_sq = diff_norm_squared(a, b);
    UTMatrix b_inv = inv(b);
    Rational middle_sq = frobenius_norm(displacement(mul(a, b_inv))).squared;
    Rational lower_sq = diff_sq / frobenius_norm(b).squared;
    Rational upper_sq = diff_sq * frobenius_norm(b_inv).squared;
    return MetricBoundsReport{lower_sq, middle_sq, upper_sq,
                              lower_sq <= middle_sq && middle_sq <= upper_sq};
}

// Integer-entry group element (the lattice used for fundamental-domain
// reduction).
class LatticeMatrix {
   public:
    explicit LatticeMatrix(unsigned d) : d_(d), e_(detail::entry_count(d), Int(0)) {
        if (d == 0) throw std::invalid_argument("LatticeMatrix: dim must be >= 1");
    }

    LatticeMatrix(unsigned d, std::vector<Int> entries) : d_(d), e_(std::move(entries)) {
        if (d == 0) throw std::invalid_argument("LatticeMatrix: dim must be >= 1");
        if (e_.size() != detail::entry_count(d))
            throw std::invalid_argument("LatticeMatrix: wrong entry count");
    }

    static LatticeMatrix from_matrix(const UTMatrix& m) {
        std::vector<Int> ints;
        ints.reserve(m.entries().size());
        for (const Rational& x : m.entries()) {
            if (x.get_den() != 1)
                throw std::invalid_argument("LatticeMatrix: non-integral entry");
            ints.push_back(x.get_num());
        }
        return LatticeMatrix(m.dim(), std::move(ints));
    }

    UTMatrix to_matrix() const {
        std::vector<Rational> rs;
        rs.reserve(e_.size());
        for (const Int& z : e_) rs.emplace_back(z);
        return UTMatrix(d_, std::move(rs));
    }

    unsigned dim() const { return d_; }
    const std::vector<Int>& entries() const { return e_; }

    const Int& at(unsigned i, unsigned k) const { return e_[detail::entry_index(d_, i, k)]; }
    Int& at(unsigned i, unsigned k) { return e_[detail::entry_index(d_, i, k)]; }

    bool is_identity() const {
        for (const Int& x : e_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const LatticeMatrix& a, const LatticeMatrix& b) {
        return a.d_ == b.d_ && a.e_ == b.e_;
    }

   private:
    unsigned d_;
    std::vector<Int> e_;
};

struct ReducedPoint {
    UTMatrix rep;           // every entry in (-1/2, 1/2]
    LatticeMatrix lattice;  // integral C with  original · C = rep
};

// Reduce W to its fundamental-domain representative. The integer table h is
// built by the triangular recursion (increasing superdiagonal k)
//   h_i^k = nearest_int( w_i^k - sum_{j=1}^{k-1} w_i^j · h_{i+j}^{k-j} ),
// the witness is C with entries -h, and rep = W·C lands entrywise in
// (-1/2, 1/2]. C is the unique lattice element with that property.
inline ReducedPoint reduce_mod_lattice(const UTMatrix& w) {
    const unsigned d = w.dim();
    LatticeMatrix h(d);
    for (unsigned k = 1; k <= d; ++k) {
        for (unsigned i = 1; i <= d - k + 1; ++i) {
            Rational u = w.at(i, k);
            for (unsigned j = 1; j < k; ++j) u -= w.at(i, j) * Rational(h.at(i + j, k - j));
            h.at(i, k) = nearest_int(u);
        }
    }
    std::vector<Int> negated;
    negated.reserve(h.entries().size());
    for (const Int& v : h.entries()) negated.emplace_back(-v);
    LatticeMatrix c(d, std::move(negated));
    UTMatrix rep = mul(w, c.to_matrix());
    return ReducedPoint{std::move(rep), std::move(c)};
}

// log A = sum_{i=1}^{d} (-1)^{i+1} (A - I)^i / i, exact and finite.
inline NilpotentUT log_unipotent(const UTMatrix& a) {
    const unsigned d = a.dim();
    NilpotentUT n = displacement(a);
    NilpotentUT acc = n;
    NilpotentUT power = n;
    for (unsigned i = 2; i <= d; ++i) {
        power = mul(power, n);
        Rational coeff = make_rational(i % 2 == 0 ? -1 : 1, static_cast<long long>(i));
        acc = add(acc, scale(coeff, power));
    }
    return acc;
}

// exp N = sum_{i=0}^{d} N^i / i!, exact and finite.
inline UTMatrix exp_nilpotent(const NilpotentUT& n) {
    const unsigned d = n.dim();
    NilpotentUT acc = n;
    NilpotentUT power = n;
    for (unsigned i = 2; i <= d; ++i) {
        power = mul(power, n);
        acc = add(acc, scale(make_rational(Int(1), factorial(i)), power));
    }
    return UTMatrix(d, acc.entries());
}

// Low-order CBH product
//   X*Y = X + Y + 1/2[X,Y] + 1/12[X,[X,Y]] - 1/12[Y,[X,Y]]
//         - 1/48[Y,[X,[X,Y]]] - 1/48[X,[Y,[X,Y]]],
// truncated after the weight-4 brackets. For d <= 3 the omitted terms vanish
// and exp(cbh(X,Y)) = exp(X)·exp(Y) exactly.
inline NilpotentUT cbh(const NilpotentUT& x, const NilpotentUT& y) {
    require_same_dim(x.dim(), y.dim(), "cbh");
    NilpotentUT xy = commutator(x, y);
    NilpotentUT xxy = commutator(x, xy);
    NilpotentUT yxy = commutator(y, xy);
    NilpotentUT acc = add(x, y);
    acc = add(acc, scale(make_rational(1, 2), xy));
    acc = add(acc, scale(make_rational(1, 12), xxy));
    acc = add(acc, scale(make_rational(-1, 12), yxy));
    acc = add(acc, scale(make_rational(-1, 48), commutator(y, xxy)));
    acc = add(acc, scale(make_rational(-1, 48), commutator(x, yxy)));
    return acc;
}

}  // namespace nilbracket::unipotent
