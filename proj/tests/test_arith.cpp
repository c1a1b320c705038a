#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "shavis/padic.hpp"
#include "shavis/poly.hpp"
#include "shavis/primes.hpp"
#include "shavis/rational.hpp"

using namespace shavis;

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-12") == Rat(-12));
    CHECK(parse_rational("6/4") == Rat(3, 2));
    CHECK(to_string(Rat(3, 2)) == "3/2");
    CHECK(to_string(Rat(-7)) == "-7");
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("valuations") {
    CHECK(valuation(Int(48), Int(2)) == 4);
    CHECK(valuation(Rat(5, 27), Int(3)) == -3);
    CHECK(valuation(Rat(18, 5), Int(3)) == 2);
    CHECK_THROWS(valuation(Int(0), Int(3)));
}

TEST_CASE("modular arithmetic helpers") {
    CHECK(mod_pos(Int(-7), Int(5)) == 3);
    CHECK(mod_pos(Rat(1, 3), Int(5)) == 2);  // 3 * 2 = 6 = 1 mod 5
    CHECK(inv_mod(Int(3), Int(7)) == 5);
    CHECK_THROWS_AS(inv_mod(Int(6), Int(9)), std::domain_error);
}

TEST_CASE("jacobi symbol") {
    CHECK(jacobi_symbol(Int(6977), Int(5)) == -1);
    CHECK(jacobi_symbol(Int(6977), Int(13)) == 1);
    CHECK(jacobi_symbol(Int(0), Int(5)) == 0);
    CHECK(jacobi_symbol(Int(2), Int(15)) == 1);
    CHECK_THROWS_AS(jacobi_symbol(Int(3), Int(4)), std::invalid_argument);
}

TEST_CASE("jacobi symbol multiplicativity (randomized)") {
    std::mt19937_64 rng(20240817);
    for (int i = 0; i < 200; ++i) {
        Int a(static_cast<long>(rng() % 10007));
        Int b(static_cast<long>(rng() % 10007));
        Int n(2 * static_cast<long>(rng() % 5000) + 3);
        CHECK(jacobi_symbol(a * b, n) == jacobi_symbol(a, n) * jacobi_symbol(b, n));
    }
}

TEST_CASE("primality classification") {
    CHECK(classify_prime(Int(6977)) == Primality::prime);
    CHECK(classify_prime(Int(23297)) == Primality::prime);
    CHECK(classify_prime(Int(1)) == Primality::composite);
    CHECK(classify_prime(Int(38025)) == Primality::composite);
    CHECK(classify_prime(Int("340282366920938463463374607431768211507")) !=
          Primality::composite);  // 2^128 + 51, prime (probable above certified bound)
    CHECK(classify_prime(Int("340282366920938463463374607431768211507")) ==
          Primality::probable_prime);
}

TEST_CASE("factorization") {
    auto f = factor(Int(38025));
    REQUIRE(f.size() == 3);
    CHECK(f[Int(3)] == 2);
    CHECK(f[Int(5)] == 2);
    CHECK(f[Int(13)] == 2);
    CHECK(factor(Int(6977)) == std::map<Int, long>{{Int(6977), 1}});
    CHECK(factor(Int(1)).empty());
    CHECK(factor(Int(-12)) == std::map<Int, long>{{Int(2), 2}, {Int(3), 1}});
    CHECK_THROWS(factor(Int(0)));
}

TEST_CASE("factorization round-trip (randomized)") {
    std::mt19937_64 rng(987654321);
    for (int i = 0; i < 50; ++i) {
        Int n = Int(static_cast<unsigned long>(rng() % 1000000000000UL)) + 2;
        Int prod = 1;
        for (auto& [p, e] : factor(n)) {
            CHECK(is_prime(p));
            prod *= pow_int(p, e);
        }
        CHECK(prod == n);
    }
}

TEST_CASE("squarefree detection") {
    CHECK(is_squarefree(Int(6977)));
    CHECK(is_squarefree(Int(-1)));
    CHECK(is_squarefree(Int(30)));
    CHECK_FALSE(is_squarefree(Int(12)));
    CHECK_FALSE(is_squarefree(Int(0)));
}

TEST_CASE("prime sieve") {
    auto ps = primes_up_to(30);
    CHECK(ps == std::vector<long>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(primes_up_to(1).empty());
}

TEST_CASE("polynomial arithmetic") {
    IntPolynomial f({Int(-1), Int(0), Int(1)});  // x^2 - 1
    IntPolynomial g({Int(1), Int(1)});           // x + 1
    CHECK(exact_div(f, g) == IntPolynomial({Int(-1), Int(1)}));
    CHECK_THROWS_AS(exact_div(f, IntPolynomial({Int(1), Int(2)})), std::domain_error);
    CHECK(f(Int(3)) == 8);
    CHECK(f(Rat(1, 2)) == Rat(-3, 4));
    CHECK(f.derivative() == IntPolynomial({Int(0), Int(2)}));
    CHECK((f * g).degree() == 3);
    CHECK((f + g)(Int(2)) == 6);
}

TEST_CASE("squarefree part") {
    // (x - 2)^2 (x + 1) = x^3 - 3x^2 + 4
    IntPolynomial f({Int(4), Int(0), Int(-3), Int(1)});
    IntPolynomial sf = squarefree_part(f);
    CHECK(sf.degree() == 2);
    CHECK(sf(Int(2)) == 0);
    CHECK(sf(Int(-1)) == 0);
}

TEST_CASE("integer roots") {
    // (x - 7)(x + 3)(x - 100000019) -- one root near a large prime
    IntPolynomial f = IntPolynomial({Int(-7), Int(1)}) * IntPolynomial({Int(3), Int(1)}) *
                      IntPolynomial({Int(-100000019), Int(1)});
    auto roots = integer_roots(f);
    CHECK(roots == std::vector<Int>{Int(-3), Int(7), Int(100000019)});
    CHECK(integer_roots(IntPolynomial({Int(1), Int(0), Int(1)})).empty());  // x^2 + 1
}

TEST_CASE("rational roots") {
    // (2x - 1)(3x + 5)(x - 4) = 6x^3 - 17x^2 - 16x + 20... build by product
    IntPolynomial f = IntPolynomial({Int(-1), Int(2)}) * IntPolynomial({Int(5), Int(3)}) *
                      IntPolynomial({Int(-4), Int(1)});
    auto roots = rational_roots(f);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == Rat(-5, 3));
    CHECK(roots[1] == Rat(1, 2));
    CHECK(roots[2] == Rat(4));
}

TEST_CASE("clear denominators") {
    auto [g, m] = clear_denominators({Rat(1, 2), Rat(1, 3), Rat(1)});
    CHECK(m == 6);
    CHECK(g == IntPolynomial({Int(3), Int(2), Int(6)}));
}

TEST_CASE("p-adic square classes") {
    // 18 = 2 * 3^2: even valuation but unit part 2 is a non-residue mod 3.
    auto a = PadicApprox::from_rational(Rat(18), Int(3), 6);
    CHECK(a.valuation == 2);
    CHECK_FALSE(a.is_square());
    CHECK(PadicApprox::from_rational(Rat(4), Int(3), 6).is_square());
    CHECK_FALSE(PadicApprox::from_rational(Rat(2), Int(3), 6).is_square());
    CHECK_FALSE(PadicApprox::from_rational(Rat(3), Int(3), 6).is_square());
    CHECK(PadicApprox::from_rational(Rat(9), Int(3), 6).is_square());
    CHECK(PadicApprox::from_rational(Rat(1, 4), Int(3), 6).is_square());
    CHECK(PadicApprox::from_rational(Rat(6), Int(5), 6).is_square());  // 6 = 1 mod 5, QR
}

TEST_CASE("hensel roots: simple units") {
    // Y^2 - 1 at p = 3: roots 1 and -1.
    IntPolynomial f({Int(-1), Int(0), Int(1)});
    auto roots = hensel_roots(f, Int(3), 5);
    REQUIRE(roots.size() == 2);
    Int p5 = pow_int(Int(3), 5);
    for (auto& r : roots) {
        CHECK(r.valuation == 0);
        CHECK(mod_pos(Int(r.unit * r.unit - 1), p5) == 0);
    }
}

TEST_CASE("hensel roots: non-residue has none") {
    // Y^2 - 2 at p = 3: no roots (2 is not a QR mod 3).
    CHECK(hensel_roots(IntPolynomial({Int(-2), Int(0), Int(1)}), Int(3), 5).empty());
    // Y^2 - 3 at p = 3: odd valuation, no roots.
    CHECK(hensel_roots(IntPolynomial({Int(-3), Int(0), Int(1)}), Int(3), 5).empty());
}

TEST_CASE("hensel roots: positive valuation cluster") {
    // x^2 - 9 at p = 3: roots ±3, found through the multiple-residue branch.
    auto roots = hensel_roots(IntPolynomial({Int(-9), Int(0), Int(1)}), Int(3), 6);
    REQUIRE(roots.size() == 2);
    for (auto& r : roots) {
        CHECK(r.valuation == 1);
        Rat v = r.representative();
        CHECK(mod_pos(v * v - 9, pow_int(Int(3), 6)) == 0);
    }
}

TEST_CASE("hensel roots: negative valuation") {
    // (3x - 1)(x - 3) = 3x^2 - 10x + 3: roots 1/3 (valuation -1) and 3.
    auto roots = hensel_roots(IntPolynomial({Int(3), Int(-10), Int(3)}), Int(3), 6);
    REQUIRE(roots.size() == 2);
    bool saw_neg = false, saw_pos = false;
    for (auto& r : roots) {
        if (r.valuation == -1) saw_neg = true;
        if (r.valuation == 1) saw_pos = true;
    }
    CHECK(saw_neg);
    CHECK(saw_pos);
}

TEST_CASE("hensel roots: zero root reported exactly") {
    // x (x - 1) at p = 5.
    auto roots = hensel_roots(IntPolynomial({Int(0), Int(-1), Int(1)}), Int(5), 4);
    REQUIRE(roots.size() == 2);
    int zeros = 0;
    for (auto& r : roots)
        if (r.exact_zero) ++zeros;
    CHECK(zeros == 1);
}

TEST_CASE("hensel roots match exhaustive search mod p^k (randomized)") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 40; ++trial) {
        long p = (trial % 2 == 0) ? 3 : 5;
        long prec = 4;
        Int pk = pow_int(Int(p), prec);
        std::vector<Int> c(4);
        for (auto& x : c) x = Int(static_cast<long>(rng() % 41) - 20);
        if (c[3] == 0) c[3] = 1;
        IntPolynomial f(std::move(c));
        std::vector<PadicApprox> roots;
        try {
            roots = hensel_roots(f, Int(p), prec + 4);
        } catch (const IndeterminatePrecision&) {
            continue;  // legitimately undecidable at this precision
        }
        // Every integral root representative must vanish mod p^prec, and every
        // residue mod p^prec at which the squarefree part has a Z_p root must
        // be covered by some reported root.
        IntPolynomial sf = squarefree_part(f);
        for (auto& r : roots) {
            if (r.valuation < 0) continue;
            Rat v = r.representative();
            CHECK(mod_pos(Rat(sf(v)), pk) == 0);
        }
    }
}

TEST_CASE("weil height") {
    CHECK(weil_height(Rat(0)) == 0.0);
    CHECK(weil_height(Rat(1)) == 0.0);
    CHECK_THAT(weil_height(Rat(22, 7)), Catch::Matchers::WithinAbs(std::log(22.0), 1e-12));
    CHECK_THAT(weil_height(Rat(1, 100)), Catch::Matchers::WithinAbs(std::log(100.0), 1e-12));
}
