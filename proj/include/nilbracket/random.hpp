#pragma once

// Seeded draws for the randomized suites. mt19937_64 has a standard-specified
// sequence and the bounded draw below avoids std::uniform_int_distribution
// (whose output is implementation-defined), so identical seeds give identical
// draws on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "rational.hpp"
#include "unipotent.hpp"

namespace nilbracket {

class Rng {
   public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Multiply-shift bounded draw (bias < 2^-64, irrelevant here).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    Rational rational(long long max_abs_num, long long max_den) {
        return make_rational(range(-max_abs_num, max_abs_num), range(1, max_den));
    }

    std::vector<Rational> rational_vector(std::size_t len, long long max_abs_num,
                                          long long max_den) {
        std::vector<Rational> v;
        v.reserve(len);
        for (std::size_t t = 0; t < len; ++t) v.push_back(rational(max_abs_num, max_den));
        return v;
    }

    unipotent::UTMatrix matrix(unsigned d, long long max_abs_num, long long max_den) {
        return unipotent::UTMatrix(
            d, rational_vector(unipotent::detail::entry_count(d), max_abs_num, max_den));
    }

    unipotent::NilpotentUT nilpotent(unsigned d, long long max_abs_num, long long max_den) {
        return unipotent::NilpotentUT(
            d, rational_vector(unipotent::detail::entry_count(d), max_abs_num, max_den));
    }

   private:
    std::mt19937_64 eng_;
};

}  // namespace nilbracket
