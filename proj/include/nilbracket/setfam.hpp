#pragma once

// Finite-window combinatorics on integer sets: difference sets, common
// differences of arithmetic progressions, sums-with-gaps and finite subset
// sums of a sequence, syndetic gap measurement, and sliding-window density
// estimates. Everything is windowed; nothing here decides properties of
// infinite sets.

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "indexset.hpp"
#include "rational.hpp"

namespace nilbracket::setfam {

using nilbracket::IndexSet;
using nilbracket::Window;

// Finite sequence of positive integers; order matters and repeats are allowed.
struct SequenceP {
    std::vector<long long> values;

    explicit SequenceP(std::vector<long long> vs) : values(std::move(vs)) {
        if (values.empty()) throw std::invalid_argument("SequenceP: sequence is empty");
        for (long long v : values)
            if (v < 1) throw std::invalid_argument("SequenceP: entries must be >= 1");
    }

    long long total() const {
        return std::accumulate(values.begin(), values.end(), 0LL);
    }
};

// { n in window : some m has m, m+n, ..., m+dn all in S }. Negative n counts
// when the backward progression fits; n = 0 is present whenever S is nonempty.
inline IndexSet common_difference_set(const IndexSet& s, unsigned d) {
    if (d == 0) throw std::invalid_argument("common_difference_set: d must be >= 1");
    std::vector<long long> members;
    for (long long n = s.window().lo; n <= s.window().hi; ++n) {
        bool found = false;
        for (long long m : s.members()) {
            bool all_in = true;
            for (unsigned j = 1; j <= d; ++j) {
                if (!s.contains(m + static_cast<long long>(j) * n)) {
                    all_in = false;
                    break;
                }
            }
            if (all_in) {
                found = true;
                break;
            }
        }
        if (found) members.push_back(n);
    }
    return IndexSet(s.window(), std::move(members));
}

// All pairwise differences a - b, clipped to the window of S.
inline IndexSet difference_set(const IndexSet& s) {
    std::vector<long long> diffs;
    for (long long a : s.members())
        for (long long b : s.members()) diffs.push_back(a - b);
    return IndexSet::collect(s.window(), std::move(diffs));
}

// First witness progression start for n, if any (used by the CLI to report
// witnesses alongside common differences).
inline std::optional<long long> progression_witness(const IndexSet& s, unsigned d, long long n) {
    for (long long m : s.members()) {
        bool all_in = true;
        for (unsigned j = 1; j <= d; ++j)
            if (!s.contains(m + static_cast<long long>(j) * n)) {
                all_in = false;
                break;
            }
        if (all_in) return m;
    }
    return std::nullopt;
}

inline Window default_sum_window(const SequenceP& p) {
    return Window(1, p.values.empty() ? 1 : p.total());
}

// Sums sum eps_i·p_i over 0/1 patterns eps (not all zero) in which every
// maximal run of zeros strictly between two ones is shorter than d.
// Dynamic program over the position of the last selected element: sums(i)
// extends sums(j) for the previous one-position j with i - j - 1 < d.
inline IndexSet sg_d(const SequenceP& p, unsigned d, std::optional<Window> window = std::nullopt) {
    if (d == 0) throw std::invalid_argument("sg_d: d must be >= 1");
    const Window w = window ? *window : default_sum_window(p);
    const std::size_t m = p.values.size();
    std::vector<std::set<long long>> ending(m);
    std::set<long long> all;
    for (std::size_t i = 0; i < m; ++i) {
        ending[i].insert(p.values[i]);
        for (std::size_t j = (i >= d ? i - d : 0); j < i; ++j)
            for (long long s : ending[j]) ending[i].insert(s + p.values[i]);
        all.insert(ending[i].begin(), ending[i].end());
    }
    return IndexSet::collect(w, std::vector<long long>(all.begin(), all.end()));
}

// All nonempty increasing-index subset sums of P.
inline IndexSet ip_finite_sums(const SequenceP& p, std::optional<Window> window = std::nullopt) {
    const Window w = window ? *window : default_sum_window(p);
    std::set<long long> sums;
    for (long long v : p.values) {
        std::set<long long> extended;
        for (long long s : sums) extended.insert(s + v);
        sums.insert(v);
        sums.insert(extended.begin(), extended.end());
    }
    return IndexSet::collect(w, std::vector<long long>(sums.begin(), sums.end()));
}

// Largest gap between consecutive members, counting distance to the window
// edges as (first - lo) + 1 and (hi - last) + 1 so that truncation can only
// overestimate the gap. Absent for empty S.
inline std::optional<long long> syndetic_gap(const IndexSet& s) {
    if (s.empty()) return std::nullopt;
    long long gap = s.members().front() - s.window().lo + 1;
    gap = std::max(gap, s.window().hi - s.members().back() + 1);
    for (std::size_t t = 1; t < s.size(); ++t)
        gap = std::max(gap, s.members()[t] - s.members()[t - 1]);
    return gap;
}

// (max, min) over all length-L subwindows I of |S ∩ I| / L: finite-window
// upper and lower density estimates.
inline std::pair<Rational, Rational> banach_density_estimate(const IndexSet& s, long long block) {
    if (block < 1) throw std::invalid_argument("banach_density_estimate: block must be >= 1");
    if (block > s.window().length())
        throw std::invalid_argument("banach_density_estimate: block exceeds window");
    long long max_count = 0, min_count = std::numeric_limits<long long>::max();
    std::size_t lo_idx = 0, hi_idx = 0;
    const auto& ms = s.members();
    for (long long a = s.window().lo; a + block - 1 <= s.window().hi; ++a) {
        while (lo_idx < ms.size() && ms[lo_idx] < a) ++lo_idx;
        while (hi_idx < ms.size() && ms[hi_idx] <= a + block - 1) ++hi_idx;
        long long count = static_cast<long long>(hi_idx - lo_idx);
        max_count = std::max(max_count, count);
        min_count = std::min(min_count, count);
    }
    return {make_rational(max_count, block), make_rational(min_count, block)};
}

}  // namespace nilbracket::setfam
