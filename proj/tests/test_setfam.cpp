#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <stdexcept>
#include <vector>

#include <nilbracket/random.hpp>
#include <nilbracket/setfam.hpp>

using namespace nilbracket;
using namespace nilbracket::setfam;

namespace {

IndexSet full_window(Window w) {
    std::vector<long long> all;
    for (long long n = w.lo; n <= w.hi; ++n) all.push_back(n);
    return IndexSet(w, std::move(all));
}

// Brute force over every (m, n) pair instead of member-anchored scanning.
std::vector<long long> common_differences_by_scan(const IndexSet& s, unsigned d) {
    std::vector<long long> out;
    for (long long n = s.window().lo; n <= s.window().hi; ++n)
        for (long long m = s.window().lo; m <= s.window().hi; ++m) {
            bool all_in = true;
            for (unsigned t = 0; t <= d && all_in; ++t) all_in = s.contains(m + t * n);
            if (all_in) {
                out.push_back(n);
                break;
            }
        }
    return out;
}

}  // namespace

TEST_CASE("sequences require positive entries") {
    CHECK(SequenceP({3}).total() == 3);
    CHECK(SequenceP({1, 2, 4}).total() == 7);
    CHECK_THROWS_AS(SequenceP({}), std::invalid_argument);
    CHECK_THROWS_AS(SequenceP({1, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(SequenceP({-3}), std::invalid_argument);
}

TEST_CASE("common differences of progressions match brute force") {
    IndexSet s(Window(0, 9), {0, 3, 6, 9});
    CHECK(common_difference_set(s, 2).members() == std::vector<long long>{0, 3});
    CHECK(common_difference_set(full_window(Window(0, 9)), 2).members() ==
          std::vector<long long>{0, 1, 2, 3, 4});

    Rng rng(83);
    for (int t = 0; t < 40; ++t) {
        Window w(rng.range(-15, 0), rng.range(1, 15));
        std::vector<long long> picks;
        for (int k = 0; k < 12; ++k) picks.push_back(rng.range(w.lo, w.hi));
        IndexSet set = IndexSet::collect(w, std::move(picks));
        unsigned d = static_cast<unsigned>(rng.range(1, 4));
        CHECK(common_difference_set(set, d).members() == common_differences_by_scan(set, d));
        CHECK(common_difference_set(set, d + 1).is_subset_of(common_difference_set(set, d)));
        if (!set.empty()) CHECK(common_difference_set(set, d).contains(0));
    }
}

TEST_CASE("difference sets enumerate pairwise differences inside the window") {
    CHECK(difference_set(IndexSet(Window(-10, 10), {0, 3, 7})).members() ==
          std::vector<long long>{-7, -4, -3, 0, 3, 4, 7});
    CHECK(difference_set(IndexSet(Window(-5, 5), {0})).members() == std::vector<long long>{0});

    // Window clipping: differences outside [lo, hi] are dropped, and the
    // depth-1 progression set is the same object.
    IndexSet narrow(Window(0, 9), {0, 3, 6, 9});
    CHECK(difference_set(narrow).members() == std::vector<long long>{0, 3, 6, 9});
    CHECK(common_difference_set(narrow, 1) == difference_set(narrow));
}

TEST_CASE("progression witnesses certify membership") {
    IndexSet s(Window(0, 9), {0, 3, 6, 9});
    REQUIRE(progression_witness(s, 2, 3).has_value());
    long long m = *progression_witness(s, 2, 3);
    CHECK(s.contains(m));
    CHECK(s.contains(m + 3));
    CHECK(s.contains(m + 6));
    CHECK_FALSE(progression_witness(s, 2, 5).has_value());
}

TEST_CASE("sums with gaps match the worked sequences") {
    SequenceP p({1, 2, 4});
    CHECK(sg_d(p, 1).members() == std::vector<long long>{1, 2, 3, 4, 6, 7});
    CHECK(sg_d(p, 2).members() == std::vector<long long>{1, 2, 3, 4, 5, 6, 7});
    CHECK(sg_d(SequenceP({5}), 1).members() == std::vector<long long>{5});
    CHECK(default_sum_window(p).lo == 1);
    CHECK(default_sum_window(p).hi == 7);

    // Explicit window clips.
    CHECK(sg_d(p, 2, Window(3, 5)).members() == std::vector<long long>{3, 4, 5});

    // Repeats are allowed and contribute distinct positions.
    SequenceP repeats({2, 2});
    CHECK(sg_d(repeats, 1).members() == std::vector<long long>{2, 4});
}

TEST_CASE("vacuous gap bounds recover all finite subset sums") {
    SequenceP p({1, 2, 4});
    CHECK(ip_finite_sums(p).members() ==
          std::vector<long long>{1, 2, 3, 4, 5, 6, 7});
    CHECK(ip_finite_sums(SequenceP({6})).members() == std::vector<long long>{6});
    CHECK(sg_d(p, 3) == ip_finite_sums(p));
    CHECK(sg_d(p, 1).is_subset_of(sg_d(p, 2)));
    CHECK(sg_d(p, 2).is_subset_of(ip_finite_sums(p)));
}

TEST_CASE("gap measurement counts window edges conservatively") {
    CHECK(syndetic_gap(IndexSet(Window(0, 10), {0, 2, 4, 6, 8, 10})) == 2);
    CHECK(syndetic_gap(IndexSet(Window(0, 10), {0, 10})) == 10);
    CHECK(syndetic_gap(IndexSet(Window(0, 10), {5})) == 6);
    CHECK_FALSE(syndetic_gap(IndexSet(Window(0, 10))).has_value());
}

TEST_CASE("sliding-window densities report exact extremes") {
    IndexSet evens(Window(0, 10), {0, 2, 4, 6, 8, 10});
    CHECK(banach_density_estimate(evens, 10) ==
          std::make_pair(make_rational(1, 2), make_rational(1, 2)));

    std::vector<long long> head{0, 1, 2, 3, 4};
    CHECK(banach_density_estimate(IndexSet(Window(0, 99), std::move(head)), 10) ==
          std::make_pair(make_rational(1, 2), Rational(0)));

    IndexSet full = full_window(Window(-3, 6));
    CHECK(banach_density_estimate(full, 4) == std::make_pair(Rational(1), Rational(1)));

    CHECK_THROWS_AS(banach_density_estimate(full, 11), std::invalid_argument);
    CHECK_THROWS_AS(banach_density_estimate(full, 0), std::invalid_argument);
}

TEST_CASE("enlarging the window never loses inside members") {
    SequenceP p({2, 3, 5});
    IndexSet small = sg_d(p, 2, Window(1, 6));
    IndexSet large = sg_d(p, 2, Window(1, 20));
    CHECK(small.is_subset_of(large));

    IndexSet s(Window(-4, 4), {-3, 0, 2});
    IndexSet wide(Window(-8, 8), {-3, 0, 2});
    CHECK(difference_set(s).is_subset_of(difference_set(wide)));
    CHECK(common_difference_set(s, 2).is_subset_of(common_difference_set(wide, 2)));
}
