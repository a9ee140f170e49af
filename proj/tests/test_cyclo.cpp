#include <catch_amalgamated.hpp>

#include <random>

#include "solvarep/cyclo.hpp"

using namespace solvarep;

namespace {

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    IntPoly c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Cyclotomic random_cyclo(int N, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<Rational> c(euler_phi(N));
    for (auto& v : c) {
        v = Rational(num(rng), den(rng));
        v.canonicalize();
    }
    return Cyclotomic(N, c);
}

} // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == IntPoly{-1, 1});
    CHECK(cyclotomic_polynomial(5) == IntPoly{1, 1, 1, 1, 1});
    CHECK(cyclotomic_polynomial(12) == IntPoly{1, 0, -1, 0, 1});
    SECTION("product over divisors is X^n - 1") {
        for (unsigned n = 1; n <= 100; ++n) {
            IntPoly prod{1};
            for (u64 d : divisors(n)) prod = poly_mul(prod, cyclotomic_polynomial(static_cast<unsigned>(d)));
            IntPoly want(n + 1);
            want[0] = -1;
            want[n] = 1;
            INFO("n = " << n);
            CHECK(prod == want);
            CHECK(cyclotomic_polynomial(n).size() == euler_phi(n) + 1);
        }
    }
}

TEST_CASE("cyclotomic arithmetic") {
    CHECK(Cyclotomic::zeta(4, 1) * Cyclotomic::zeta(4, 1) == Cyclotomic(4, -1));
    CHECK((Cyclotomic(3, 1) + Cyclotomic::zeta(3, 1) + Cyclotomic::zeta(3, 2)).is_zero());
    CHECK(Cyclotomic::zeta(8, 1).inv() == Cyclotomic::zeta(8, 7));
    CHECK_THROWS_WITH(Cyclotomic(3, 1) + Cyclotomic(4, 1), Catch::Matchers::ContainsSubstring("level"));
    CHECK_THROWS(Cyclotomic(5).inv());

    std::mt19937_64 rng(7);
    for (int N : {1, 2, 3, 5, 8, 12, 15}) {
        for (int t = 0; t < 20; ++t) {
            auto a = random_cyclo(N, rng);
            auto b = random_cyclo(N, rng);
            if (!a.is_zero()) CHECK((a * a.inv()).is_one());
            CHECK(a * b == b * a);
            CHECK((a + b) - b == a);
            CHECK(Cyclotomic(N, a.coords()) == a);
            CHECK(Cyclotomic::from_json(a.to_json()) == a);
        }
    }
}

TEST_CASE("galois action") {
    CHECK(Cyclotomic::zeta(3, 1).galois(2) == Cyclotomic::zeta(3, 2));
    CHECK((Cyclotomic::zeta(8, 1) + Cyclotomic::zeta(8, 7)).galois(3) ==
          Cyclotomic::zeta(8, 3) + Cyclotomic::zeta(8, 5));
    CHECK_THROWS(Cyclotomic::zeta(8, 1).galois(2));
    std::mt19937_64 rng(11);
    for (int N = 1; N <= 24; ++N) {
        std::vector<long> units;
        for (long r = 1; r <= N; ++r)
            if (gcd_u(r, N) == 1) units.push_back(r);
        for (int t = 0; t < 100; ++t) {
            auto a = random_cyclo(N, rng);
            auto b = random_cyclo(N, rng);
            long r = units[rng() % units.size()], s = units[rng() % units.size()];
            CHECK(a.galois(1) == a);
            CHECK(a.galois(r).galois(s) == a.galois(r * s % N));
            if (t < 10) CHECK((a * b).galois(r) == a.galois(r) * b.galois(r));
        }
    }
}

TEST_CASE("numeric embedding") {
    auto i = embed_numeric(Cyclotomic::zeta(4, 1), 64).value;
    CHECK(std::abs(i - std::complex<double>(0, 1)) < 1e-15);
    auto w = embed_numeric(Cyclotomic::zeta(3, 1), 64).value;
    CHECK(std::abs(w - std::complex<double>(-0.5, std::sqrt(3.0) / 2)) < 1e-15);
    auto h = embed_numeric((Cyclotomic(4, -1) + Cyclotomic::zeta(4, 1)).scaled(Rational(1, 2)), 64).value;
    CHECK(std::abs(h - std::complex<double>(-0.5, 0.5)) < 1e-15);

    const int prec = 80;
    std::mt19937_64 rng(3);
    for (int N : {5, 7, 9, 12, 20}) {
        for (int t = 0; t < 10; ++t) {
            auto a = random_cyclo(N, rng), b = random_cyclo(N, rng);
            auto ea = embed_numeric(a, prec).value, eb = embed_numeric(b, prec).value;
            auto eab = embed_numeric(a * b, prec).value;
            double bound = std::ldexp(1.0, 8 - 53) * (1 + std::abs(ea) * std::abs(eb));
            CHECK(std::abs(eab - ea * eb) < bound); // double rounding dominates 2^{8-prec}
        }
    }
}

TEST_CASE("text rendering") {
    CHECK(Cyclotomic(6).to_text() == "0");
    auto a = Cyclotomic(8, Rational(1, 2)) - Cyclotomic::zeta(8, 1) + Cyclotomic::zeta(8, 3).scaled(3);
    CHECK(a.to_text() == "1/2 - z + 3*z^3");
}

TEST_CASE("prime fields") {
    PrimeField f13(13);
    u64 mu = f13.pth_root(5, 3);
    CHECK(f13.pow(mu, 3) == 5);
    std::vector<u64> roots;
    for (u64 v = 0; v < 13; ++v)
        if (f13.pow(v, 3) == 5) roots.push_back(v);
    CHECK(roots == std::vector<u64>{7, 8, 11});
    CHECK(PrimeField(7).inv(3) == 5);
    CHECK_THROWS_WITH(f13.pth_root(2, 3), Catch::Matchers::ContainsSubstring("no p-th root"));

    PrimeField f(1000003);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        u64 lam = f.pow(rng() % 1000002 + 1, 3);
        u64 m = f.pth_root(lam, 3);
        CHECK(f.pow(m, 3) == lam);
        u64 x = rng() % 1000002 + 1;
        CHECK(f.pow(f.primitive_root(), f.dlog(x)) == x);
    }
    CHECK_THROWS(pf_add({13, 1}, {7, 1}));
    CHECK(pf_pth_root({13, 5}, 3).value == mu);
}
