#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <vector>

#include <nilbracket/nildyn.hpp>
#include <nilbracket/random.hpp>

using namespace nilbracket;
using namespace nilbracket::nildyn;

TEST_CASE("integer and residual tables follow the correction recursion") {
    NilRotation rot(2, {make_rational(1, 2), make_rational(1, 2)});

    FZTables two = fz_tables(rot, 2);
    CHECK(two.f == std::vector<Int>{Int(1), Int(1), Int(-1)});
    CHECK(two.z == std::vector<Rational>{Rational(0), Rational(0), make_rational(1, 4)});
    CHECK(two.z_at(1, 2) == make_rational(1, 4));
    CHECK(two.max_abs_z() == make_rational(1, 4));
    CHECK(two.lattice_witness().entries() == std::vector<Int>{Int(-1), Int(-1), Int(1)});

    FZTables four = fz_tables(rot, 4);
    CHECK(four.z_at(1, 2) == make_rational(1, 2));

    // The residual table is exactly the reduced representative of the power.
    Rng rng(71);
    for (int t = 0; t < 30; ++t) {
        unsigned d = static_cast<unsigned>(rng.range(2, 4));
        NilRotation r(d, rng.rational_vector(d, 20, 9));
        long long n = rng.range(-30, 30);
        FZTables fz = fz_tables(r, n);
        unipotent::ReducedPoint red = unipotent::reduce_mod_lattice(r.power(n));
        CHECK(fz.z == red.rep.entries());
        CHECK(fz.lattice_witness() == red.lattice);
    }

    CHECK_THROWS_AS(NilRotation(2, {Rational(1)}), std::invalid_argument);
}

TEST_CASE("entrywise return times match the worked example") {
    NilRotation rot(2, {make_rational(1, 2), make_rational(1, 2)});
    CHECK(nil_return_set(rot, make_rational(3, 10), Window(1, 8)).members() ==
          std::vector<long long>{2, 6, 8});

    // Smaller epsilon keeps fewer return times.
    IndexSet tight = nil_return_set(rot, make_rational(1, 5), Window(1, 8));
    CHECK(tight.is_subset_of(nil_return_set(rot, make_rational(3, 10), Window(1, 8))));
    CHECK_THROWS_AS(nil_return_set(rot, Rational(0), Window(1, 8)), std::invalid_argument);
}

TEST_CASE("torus points canonicalize and boxes validate their half-widths") {
    TorusPoint p({make_rational(-1, 4), make_rational(9, 4)});
    CHECK(p.coords == std::vector<Rational>{make_rational(3, 4), make_rational(1, 4)});
    CHECK(TorusPoint::origin(3).coords == std::vector<Rational>(3, Rational(0)));

    CHECK_THROWS_AS(Box::uniform(2, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(Box::uniform(2, make_rational(2, 3)), std::invalid_argument);
    Box box = Box::uniform(2, make_rational(1, 2));  // half-width 1/2 covers everything
    CHECK(box.contains(p));

    Box narrow = Box::uniform(2, make_rational(1, 5));
    CHECK(narrow.contains(TorusPoint({make_rational(9, 10), make_rational(1, 10)})));
    CHECK_FALSE(narrow.contains(TorusPoint({make_rational(3, 10), Rational(0)})));
}

TEST_CASE("skew product steps accumulate lower coordinates") {
    TorusAffine t(2, make_rational(1, 4));
    TorusPoint p = TorusPoint::origin(2);
    p = torus_step(t, p);
    CHECK(p.coords == std::vector<Rational>{make_rational(1, 4), Rational(0)});
    p = torus_step(t, p);
    CHECK(p.coords == std::vector<Rational>{make_rational(1, 2), make_rational(1, 4)});
    p = torus_step(t, p);
    CHECK(p.coords == std::vector<Rational>{make_rational(3, 4), make_rational(3, 4)});
    CHECK(torus_iterate(t, TorusPoint::origin(2), 3) == p);

    Rng rng(73);
    for (int trial = 0; trial < 30; ++trial) {
        unsigned d = static_cast<unsigned>(rng.range(1, 4));
        TorusAffine map(d, rng.rational(8, 12));
        TorusPoint start(rng.rational_vector(d, 8, 12));
        CHECK(torus_step_back(map, torus_step(map, start)) == start);

        TorusPoint forward = start;
        for (long long n = 1; n <= 8; ++n) {
            forward = torus_step(map, forward);
            CHECK(torus_iterate(map, start, n) == forward);
        }
        TorusPoint backward = start;
        for (long long n = 1; n <= 8; ++n) {
            backward = torus_step_back(map, backward);
            CHECK(torus_iterate(map, start, -n) == backward);
        }
        CHECK(torus_iterate(map, start, 0) == start);
    }
}

TEST_CASE("progression weights annihilate low powers and stay primitive") {
    VandermondeWeights one = vandermonde_weights(1);
    CHECK(one.lambda == std::vector<Int>{Int(1)});
    CHECK(one.scale == 1);

    VandermondeWeights two = vandermonde_weights(2);
    CHECK(two.lambda == std::vector<Int>{Int(-2), Int(1)});
    CHECK(two.scale == 2);

    VandermondeWeights three = vandermonde_weights(3);
    CHECK(three.lambda == std::vector<Int>{Int(3), Int(-3), Int(1)});
    CHECK(three.scale == 6);

    VandermondeWeights four = vandermonde_weights(4);
    Int fact = factorial(4);
    for (long long n = -20; n <= 20; ++n) {
        Int lhs(0);
        for (unsigned m = 1; m <= 4; ++m)
            lhs += four.lambda[m - 1] * fact * binomial(static_cast<long long>(m) * n, 4);
        CHECK(lhs == four.scale * int_pow(Int(static_cast<long>(n)), 4));
    }
    CHECK_THROWS_AS(vandermonde_weights(0), std::invalid_argument);
}

TEST_CASE("grid witness search finds simultaneous torus returns") {
    TorusAffine t(1, make_rational(1, 4));
    Box box = Box::uniform(1, make_rational(1, 8));
    CHECK(multi_return_set(t, box, 1, Window(0, 8), 64).members() ==
          std::vector<long long>{0, 4, 8});

    auto hits = multi_return_hits(t, box, 1, Window(0, 8), 64);
    REQUIRE(!hits.empty());
    CHECK(hits.front().n == 0);
    CHECK(hits.front().witness == TorusPoint::origin(1));

    // Doubling the grid only refines the witness supply.
    TorusAffine t2(2, make_rational(2, 7));
    Box box2 = Box::uniform(2, make_rational(1, 6));
    IndexSet coarse = multi_return_set(t2, box2, 2, Window(-40, 40), 32);
    IndexSet fine = multi_return_set(t2, box2, 2, Window(-40, 40), 64);
    CHECK(coarse.is_subset_of(fine));
    CHECK(coarse.contains(0));

    // Deeper simultaneous returns are a sub-requirement.
    IndexSet deep = multi_return_set(t2, box2, 3, Window(-40, 40), 32);
    CHECK(deep.is_subset_of(coarse));

    CHECK_THROWS_AS(multi_return_set(t, box, 1, Window(0, 8), 0), std::invalid_argument);
    CHECK_THROWS_AS(multi_return_set(t, box, 0, Window(0, 8), 64), std::invalid_argument);
}

TEST_CASE("witness lists start from the identity and deduplicate") {
    NilRotation rot(2, {make_rational(1, 2), make_rational(1, 3)});

    NilWitnessParams identity_only{0, 0, 0};
    auto bare = nil_witness_list(rot, identity_only);
    REQUIRE(bare.size() == 1);
    CHECK(bare.front().is_identity());

    NilWitnessParams rich{0, 2, 4};
    auto list = nil_witness_list(rot, rich);
    CHECK(list.front().is_identity());
    Rational half = make_rational(1, 2);
    for (std::size_t a = 0; a < list.size(); ++a) {
        for (const Rational& x : list[a].entries()) {
            CHECK(-half < x);
            CHECK(x <= half);
        }
        for (std::size_t b = a + 1; b < list.size(); ++b) CHECK_FALSE(list[a] == list[b]);
    }

    NilWitnessParams bad{3, 1, 0};
    CHECK_THROWS_AS(nil_witness_list(rot, bad), std::invalid_argument);
}

TEST_CASE("identity-witness simultaneous returns reduce to entrywise returns") {
    NilRotation rot(2, {make_rational(1, 2), make_rational(1, 2)});
    NilWitnessParams identity_only{0, 0, 0};
    Rational eps = make_rational(3, 10);
    Window window(1, 8);

    IndexSet simultaneous = nil_multi_return_set(rot, eps, 1, window, identity_only);
    CHECK(simultaneous == nil_return_set(rot, eps, window));

    IndexSet deeper = nil_multi_return_set(rot, eps, 2, window, identity_only);
    CHECK(deeper.is_subset_of(simultaneous));

    CHECK_THROWS_AS(nil_multi_return_set(rot, Rational(0), 1, window, identity_only),
                    std::invalid_argument);
    CHECK_THROWS_AS(nil_multi_return_set(rot, eps, 0, window, identity_only),
                    std::invalid_argument);
}

// For a hit certified by an off-origin witness theta, the weighted binomial
// sum leaves a (sum of weights)·theta_d term standing, so the distance bound
// on alpha·n^d is (K_d + d!·|sum of weights|)·eps, not K_d·eps. The first
// case pins an exact instance where the smaller constant fails; the second
// checks the enlarged constant over random rotations.
TEST_CASE("off-origin witnesses stretch the return-set distance bound") {
    Rational alpha = make_rational(231, 230);
    Rational eps = make_rational(1, 3);
    TorusAffine t(1, alpha);  // d = 1: weights (1), scale 1, K_1 = 1
    Window window(-390, -380);

    IndexSet hits = multi_return_set(t, Box::uniform(1, eps), 1, window, 64);
    CHECK(hits.contains(-383));
    Rational reached = dist_to_int(alpha * Rational(-383));
    CHECK(reached == make_rational(77, 230));
    CHECK(reached > eps);                 // K_1·eps alone is not an upper bound
    CHECK(reached < Rational(2) * eps);   // (K_1 + 1!·|sum|)·eps is

    Rng rng(0xadd5eed);
    for (unsigned d = 1; d <= 2; ++d) {
        VandermondeWeights w = vandermonde_weights(d);
        Int k_factor(0), weight_sum(0);
        for (const Int& l : w.lambda) {
            k_factor += abs(l);
            weight_sum += l;
        }
        k_factor *= factorial(d);
        Rational box_eps = d == 1 ? make_rational(1, 8) : make_rational(1, 20);
        Rational bound = Rational(k_factor + factorial(d) * abs(weight_sum)) * box_eps;
        REQUIRE(bound < make_rational(1, 2));
        for (int trial = 0; trial < 10; ++trial) {
            Rational a = rng.rational(300, 120);
            TorusAffine affine(d, Rational(a / Rational(w.scale)));
            for (const TorusReturnHit& hit :
                 multi_return_hits(affine, Box::uniform(d, box_eps), d, Window(-200, 200), 64)) {
                Rational value = a * Rational(int_pow(Int(static_cast<long>(hit.n)), d));
                CHECK(dist_to_int(value) < bound);
            }
        }
    }
}
