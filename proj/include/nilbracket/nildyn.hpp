#pragma once

// Dynamics of translations on the unipotent triangular group modulo its
// integer lattice, and of the affine torus skew product. Return-time sets are
// computed entrywise on fundamental-domain representatives; multi-return sets
// are computed by sound witness search (every returned n comes with a
// concrete witness, no completeness is claimed).

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "indexset.hpp"
#include "rational.hpp"
#include "unipotent.hpp"

namespace nilbracket::nildyn {

using unipotent::LatticeMatrix;
using unipotent::ReducedPoint;
using unipotent::UTMatrix;

// Translation by the group element with first superdiagonal alpha and zeros
// above it.
struct NilRotation {
    unsigned d;
    std::vector<Rational> alpha;

    NilRotation(unsigned d_, std::vector<Rational> alpha_) : d(d_), alpha(std::move(alpha_)) {
        if (d == 0) throw std::invalid_argument("NilRotation: dim must be >= 1");
        if (alpha.size() != d) throw std::invalid_argument("NilRotation: alpha length != dim");
    }

    UTMatrix power(long long n) const { return unipotent::pow_closed(alpha, n); }
};

// Integer table f and residual table z of the n-th translate, indexed like
// matrix superdiagonal entries. z is exactly the fundamental-domain
// representative of the n-th power; the lattice witness has entries -f.
struct FZTables {
    unsigned d;
    std::vector<Int> f;
    std::vector<Rational> z;

    const Int& f_at(unsigned i, unsigned k) const {
        return f[unipotent::detail::entry_index(d, i, k)];
    }
    const Rational& z_at(unsigned i, unsigned k) const {
        return z[unipotent::detail::entry_index(d, i, k)];
    }

    Rational max_abs_z() const {
        Rational m(0);
        for (const Rational& v : z) {
            Rational a(abs(v));
            if (a > m) m = a;
        }
        return m;
    }

    LatticeMatrix lattice_witness() const {
        std::vector<Int> negated;
        negated.reserve(f.size());
        for (const Int& v : f) negated.emplace_back(-v);
        return LatticeMatrix(d, std::move(negated));
    }
};

// Triangular recursion for the integer/residual split of the n-th power
// x_i^k(n) = binomial(n,k)·alpha_i···alpha_{i+k-1}:
//   f_i^k(n) = nearest_int( x_i^k(n) - sum_{j=1}^{k-1} x_i^{k-j}(n) f_{i+k-j}^j(n) ),
//   z_i^k(n) = the same expression minus f_i^k(n), always in (-1/2, 1/2].
inline FZTables fz_tables(const NilRotation& rot, long long n) {
    const unsigned d = rot.d;
    UTMatrix x = rot.power(n);
    FZTables out{d, std::vector<Int>(unipotent::detail::entry_count(d)),
                 std::vector<Rational>(unipotent::detail::entry_count(d))};
    for (unsigned k = 1; k <= d; ++k) {
        for (unsigned i = 1; i <= d - k + 1; ++i) {
            Rational u = x.at(i, k);
            for (unsigned j = 1; j < k; ++j)
                u -= x.at(i, k - j) * Rational(out.f_at(i + k - j, j));
            Int fi = nearest_int(u);
            std::size_t idx = unipotent::detail::entry_index(d, i, k);
            out.z[idx] = u - Rational(fi);
            out.f[idx] = std::move(fi);
        }
    }
    return out;
}

// { n in window : every residual satisfies |z_i^k(n)| < epsilon }.
inline IndexSet nil_return_set(const NilRotation& rot, const Rational& epsilon, Window window) {
    if (epsilon <= 0) throw std::invalid_argument("nil_return_set: epsilon must be > 0");
    std::vector<long long> members;
    for (long long n = window.lo; n <= window.hi; ++n)
        if (fz_tables(rot, n).max_abs_z() < epsilon) members.push_back(n);
    return IndexSet(window, std::move(members));
}

// Affine skew product on the d-torus:
//   (θ_1, ..., θ_d) -> (θ_1 + α, θ_2 + θ_1, ..., θ_d + θ_{d-1}).
struct TorusAffine {
    unsigned d;
    Rational alpha;

    TorusAffine(unsigned d_, Rational alpha_) : d(d_), alpha(std::move(alpha_)) {
        if (d == 0) throw std::invalid_argument("TorusAffine: dim must be >= 1");
    }
};

struct TorusPoint {
    std::vector<Rational> coords;  // canonical representatives in [0, 1)

    explicit TorusPoint(std::vector<Rational> cs) : coords(std::move(cs)) {
        for (Rational& c : coords) c = mod_one(c);
    }

    static TorusPoint origin(unsigned d) {
        return TorusPoint(std::vector<Rational>(d, Rational(0)));
    }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        return a.coords == b.coords;
    }
};

// Symmetric box (-w_1, w_1) x ... x (-w_d, w_d) around 0 on the torus.
struct Box {
    std::vector<Rational> half_widths;

    explicit Box(std::vector<Rational> hw) : half_widths(std::move(hw)) {
        for (const Rational& w : half_widths)
            if (w <= 0 || 2 * w > 1)
                throw std::invalid_argument("Box: half-widths must lie in (0, 1/2]");
    }

    static Box uniform(unsigned d, const Rational& w) {
        return Box(std::vector<Rational>(d, w));
    }

    bool contains(const TorusPoint& p) const {
        if (p.coords.size() != half_widths.size())
            throw std::invalid_argument("Box: dimension mismatch");
        for (std::size_t j = 0; j < half_widths.size(); ++j)
            if (dist_to_int(p.coords[j]) >= half_widths[j]) return false;
        return true;
    }
};

inline TorusPoint torus_step(const TorusAffine& t, const TorusPoint& p) {
    if (p.coords.size() != t.d) throw std::invalid_argument("torus_step: dimension mismatch");
    std::vector<Rational> next(t.d);
    next[0] = t.alpha + p.coords[0];
    for (unsigned j = 1; j < t.d; ++j) next[j] = p.coords[j] + p.coords[j - 1];
    return TorusPoint(std::move(next));
}

inline TorusPoint torus_step_back(const TorusAffine& t, const TorusPoint& p) {
    if (p.coords.size() != t.d) throw std::invalid_argument("torus_step_back: dimension mismatch");
    std::vector<Rational> prev(t.d);
    prev[0] = p.coords[0] - t.alpha;
    for (unsigned j = 1; j < t.d; ++j) prev[j] = p.coords[j] - prev[j - 1];
    return TorusPoint(std::move(prev));
}

// Closed-form n-th iterate: coordinate j of the image is
//   binomial(n, j)·α + sum_{t=1}^{j} binomial(n, j-t)·θ_t  (mod 1),
// the rotation number acting as the implicit zeroth coordinate. Valid for
// every integer n and equal to |n| forward or backward steps.
inline TorusPoint torus_iterate(const TorusAffine& t, const TorusPoint& p, long long n) {
    if (p.coords.size() != t.d) throw std::invalid_argument("torus_iterate: dimension mismatch");
    Int nz(static_cast<long>(n));
    std::vector<Rational> binom(t.d + 1);
    for (unsigned l = 0; l <= t.d; ++l) binom[l] = Rational(binomial(nz, l));
    std::vector<Rational> next(t.d);
    for (unsigned j = 1; j <= t.d; ++j) {
        Rational acc = binom[j] * t.alpha;
        for (unsigned tt = 1; tt <= j; ++tt) acc += binom[j - tt] * p.coords[tt - 1];
        next[j - 1] = acc;
    }
    return TorusPoint(std::move(next));
}

// Integer weights with sum lambda_m·m^j = 0 for 1 <= j <= d-1 and
// sum lambda_m·m^d = scale > 0, normalized to coprime weights and minimal
// positive scale. Solved exactly: fix lambda_d, eliminate on the Vandermonde
// system, clear denominators, divide by the content.
struct VandermondeWeights {
    std::vector<Int> lambda;
    Int scale;
};

inline VandermondeWeights vandermonde_weights(unsigned d) {
    if (d == 0) throw std::invalid_argument("vandermonde_weights: d must be >= 1");
    if (d == 1) return VandermondeWeights{{Int(1)}, Int(1)};

    // Square system for lambda_1..lambda_{d-1} with lambda_d = 1:
    // rows j = 1..d-1, columns m = 1..d-1, rhs -d^j.
    const unsigned m = d - 1;
    std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(m + 1));
    for (unsigned j = 1; j <= m; ++j) {
        for (unsigned col = 1; col <= m; ++col)
            aug[j - 1][col - 1] = Rational(int_pow(Int(col), j));
        aug[j - 1][m] = Rational(-int_pow(Int(d), j));
    }
    for (unsigned p = 0; p < m; ++p) {
        unsigned pivot = p;
        while (pivot < m && aug[pivot][p] == 0) ++pivot;
        if (pivot == m) throw std::logic_error("vandermonde_weights: singular system");
        std::swap(aug[p], aug[pivot]);
        for (unsigned r = 0; r < m; ++r) {
            if (r == p || aug[r][p] == 0) continue;
            Rational factor = aug[r][p] / aug[p][p];
            for (unsigned c = p; c <= m; ++c) aug[r][c] -= factor * aug[p][c];
        }
    }
    std::vector<Rational> solution(d);
    for (unsigned p = 0; p < m; ++p) solution[p] = aug[p][m] / aug[p][p];
    solution[d - 1] = Rational(1);

    Int denom_lcm(1);
    for (const Rational& s : solution)
        mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), s.get_den().get_mpz_t());
    std::vector<Int> weights(d);
    Int content(0);
    for (unsigned t = 0; t < d; ++t) {
        Rational scaled = solution[t] * Rational(denom_lcm);
        weights[t] = scaled.get_num();
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), weights[t].get_mpz_t());
    }
    for (Int& w : weights) mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), content.get_mpz_t());

    Int scale(0);
    for (unsigned t = 0; t < d; ++t) scale += weights[t] * int_pow(Int(t + 1), d);
    if (scale == 0) throw std::logic_error("vandermonde_weights: degenerate scale");
    if (scale < 0) {
        for (Int& w : weights) w = -w;
        scale = -scale;
    }
    return VandermondeWeights{std::move(weights), std::move(scale)};
}

struct TorusReturnHit {
    long long n;
    TorusPoint witness;
};

// Witness-based under-approximation of
//   { n : U ∩ T^{-n}U ∩ ... ∩ T^{-steps·n}U ≠ ∅ }.
// Starting points are the grid points {k_1/g, ..., k_d/g} inside U (the
// origin is the k = 0 grid point, so it is always searched). A hit records
// the first witness theta, in grid order, whose orbit stays in U at the
// sampled times i·n, i = 0..steps. Every reported n is genuinely in the set;
// nothing is claimed about n that report no witness.
inline std::vector<TorusReturnHit> multi_return_hits(const TorusAffine& t, const Box& u,
                                                     unsigned steps, Window window,
                                                     unsigned grid) {
    if (grid == 0) throw std::invalid_argument("multi_return_hits: grid must be >= 1");
    if (steps == 0) throw std::invalid_argument("multi_return_hits: steps must be >= 1");
    if (u.half_widths.size() != t.d)
        throw std::invalid_argument("multi_return_hits: box dimension mismatch");

    // Admissible grid coordinates per axis (k = 0 always qualifies).
    std::vector<std::vector<Rational>> axis(t.d);
    for (unsigned j = 0; j < t.d; ++j)
        for (unsigned k = 0; k < grid; ++k) {
            Rational v = make_rational(k, grid);
            if (dist_to_int(v) < u.half_widths[j]) axis[j].push_back(v);
        }

    // Cartesian product in grid order; the origin is the first witness.
    std::vector<TorusPoint> witnesses;
    std::vector<std::size_t> pick(t.d, 0);
    bool exhausted = false;
    while (!exhausted) {
        std::vector<Rational> coords(t.d);
        for (unsigned j = 0; j < t.d; ++j) coords[j] = axis[j][pick[j]];
        witnesses.emplace_back(std::move(coords));
        unsigned j = t.d;
        while (true) {
            if (j == 0) {
                exhausted = true;
                break;
            }
            --j;
            if (++pick[j] < axis[j].size()) break;
            pick[j] = 0;
        }
    }

    std::vector<TorusReturnHit> hits;
    std::vector<Rational> binom(t.d + 1);
    for (long long n = window.lo; n <= window.hi; ++n) {
        // Per multiple m = i·n, the closed-form coefficients binomial(m, l)
        // and the witness-independent rotation term binomial(m, j)·α.
        std::vector<std::vector<Rational>> coeff(steps);
        std::vector<std::vector<Rational>> base(steps);
        for (unsigned i = 1; i <= steps; ++i) {
            Int m(static_cast<long>(i) * static_cast<long>(n));
            for (unsigned l = 0; l <= t.d; ++l) binom[l] = Rational(binomial(m, l));
            coeff[i - 1] = binom;
            base[i - 1].resize(t.d);
            for (unsigned j = 1; j <= t.d; ++j) base[i - 1][j - 1] = binom[j] * t.alpha;
        }
        for (const TorusPoint& theta : witnesses) {
            bool ok = true;
            for (unsigned i = 1; i <= steps && ok; ++i) {
                for (unsigned j = 1; j <= t.d; ++j) {
                    Rational acc = base[i - 1][j - 1];
                    for (unsigned tt = 1; tt <= j; ++tt)
                        acc += coeff[i - 1][j - tt] * theta.coords[tt - 1];
                    if (dist_to_int(acc) >= u.half_widths[j - 1]) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) {
                hits.push_back(TorusReturnHit{n, theta});
                break;
            }
        }
    }
    return hits;
}

inline IndexSet multi_return_set(const TorusAffine& t, const Box& u, unsigned steps,
                                 Window window, unsigned grid) {
    std::vector<long long> members;
    for (const TorusReturnHit& hit : multi_return_hits(t, u, steps, window, grid))
        members.push_back(hit.n);
    return IndexSet(window, std::move(members));
}

// Declared witness list for multi-return search on the triangular group:
// fundamental-domain representatives of the generator powers m in
// [power_lo, power_hi], optionally multiplied by single-entry perturbations
// ±1/perturb_denominator. The identity is always included.
struct NilWitnessParams {
    long long power_lo = 0;
    long long power_hi = 0;
    unsigned perturb_denominator = 0;  // 0 disables perturbations
};

struct NilReturnHit {
    long long n;
    UTMatrix witness;
};

inline std::vector<UTMatrix> nil_witness_list(const NilRotation& rot,
                                              const NilWitnessParams& params) {
    if (params.power_lo > params.power_hi)
        throw std::invalid_argument("nil_witness_list: empty power window");
    std::vector<UTMatrix> list;
    auto push_unique = [&](UTMatrix w) {
        for (const UTMatrix& seen : list)
            if (seen == w) return;
        list.push_back(std::move(w));
    };
    push_unique(UTMatrix::identity(rot.d));
    for (long long m = params.power_lo; m <= params.power_hi; ++m) {
        UTMatrix base = unipotent::reduce_mod_lattice(rot.power(m)).rep;
        push_unique(base);
        if (params.perturb_denominator == 0) continue;
        Rational q = make_rational(1, static_cast<long long>(params.perturb_denominator));
        for (unsigned k = 1; k <= rot.d; ++k)
            for (unsigned i = 1; i <= rot.d - k + 1; ++i)
                for (int sign : {+1, -1}) {
                    UTMatrix p(rot.d);
                    p.at(i, k) = sign > 0 ? q : Rational(-q);
                    push_unique(unipotent::reduce_mod_lattice(unipotent::mul(base, p)).rep);
                }
    }
    return list;
}

inline Rational max_abs_entry(const UTMatrix& m) {
    Rational mx(0);
    for (const Rational& v : m.entries()) {
        Rational a(abs(v));
        if (a > mx) mx = a;
    }
    return mx;
}

// Witness-based under-approximation of the multi-return set on the quotient:
// n is reported when some witness coset W from the declared list satisfies
// the entrywise bound max |reduce(A^{i·n}·W)| < epsilon for every i = 0..steps.
inline std::vector<NilReturnHit> nil_multi_return_hits(const NilRotation& rot,
                                                       const Rational& epsilon, unsigned steps,
                                                       Window window,
                                                       const NilWitnessParams& params) {
    if (epsilon <= 0) throw std::invalid_argument("nil_multi_return_hits: epsilon must be > 0");
    if (steps == 0) throw std::invalid_argument("nil_multi_return_hits: steps must be >= 1");
    std::vector<UTMatrix> witnesses = nil_witness_list(rot, params);
    std::vector<NilReturnHit> hits;
    for (long long n = window.lo; n <= window.hi; ++n) {
        std::vector<UTMatrix> powers;
        powers.reserve(steps + 1);
        for (unsigned i = 0; i <= steps; ++i)
            powers.push_back(rot.power(static_cast<long long>(i) * n));
        for (const UTMatrix& w : witnesses) {
            bool ok = true;
            for (unsigned i = 0; i <= steps; ++i) {
                UTMatrix rep = unipotent::reduce_mod_lattice(unipotent::mul(powers[i], w)).rep;
                if (max_abs_entry(rep) >= epsilon) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                hits.push_back(NilReturnHit{n, w});
                break;
            }
        }
    }
    return hits;
}

inline IndexSet nil_multi_return_set(const NilRotation& rot, const Rational& epsilon,
                                     unsigned steps, Window window,
                                     const NilWitnessParams& params) {
    std::vector<long long> members;
    for (const NilReturnHit& hit : nil_multi_return_hits(rot, epsilon, steps, window, params))
        members.push_back(hit.n);
    return IndexSet(window, std::move(members));
}

}  // namespace nilbracket::nildyn
