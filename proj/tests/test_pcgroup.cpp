#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "solvarep/catalog.hpp"
#include "solvarep/pcgroup.hpp"

using namespace solvarep;

namespace {

std::size_t class_size_of(const PcGroup& G, int level, PcGroup::Elt g) {
    return G.class_sum_support(level, g).size();
}

// Brute-force conjugacy class of g in G_level.
std::set<PcGroup::Elt> brute_class(const PcGroup& G, int level, PcGroup::Elt g) {
    std::set<PcGroup::Elt> out;
    for (PcGroup::Elt h = 0; h < G.level_order(level); ++h) out.insert(G.conj(g, h));
    return out;
}

} // namespace

TEST_CASE("presentation parser") {
    auto s3 = parse_presentation("group S3\ngen x 3\ngen y 2 act x -> x^2\n");
    CHECK(s3.gens == std::vector<std::string>{"x", "y"});
    CHECK(s3.primes == std::vector<int>{3, 2});
    CHECK(s3.conj_words[1][0] == Word{{0, 2}});

    auto q8 = catalog("q8");
    CHECK(q8.primes == std::vector<int>{2, 2, 2});
    CHECK(q8.power_words[2] == Word{{0, 1}});
    CHECK(q8.power_words[1] == Word{{0, 1}});

    auto err = [](const std::string& src) {
        try {
            parse_presentation(src);
        } catch (const Error& e) {
            return e.code() + ":" + e.what();
        }
        return std::string("ok");
    };
    CHECK_THAT(err("group G\ngen x 4\n"), Catch::Matchers::ContainsSubstring("prime"));
    CHECK_THAT(err("group G\ngen x 2 pow y\ngen y 2\n"), Catch::Matchers::ContainsSubstring("parse_error"));
    CHECK_THAT(err("group G\ngen x 2\ngen y 3 act x -> x^a\n"), Catch::Matchers::ContainsSubstring("line 3"));
    CHECK_THAT(err("gen x 2\n"), Catch::Matchers::ContainsSubstring("parse_error"));
    CHECK(err("group G # comment\ngen x 2 # two\n\ngen y 2 pow 1\n") == "ok");
}

TEST_CASE("catalog round trip") {
    std::vector<std::string> names = catalog_fixed_names();
    for (const char* n : {"c1", "c12", "c30", "dihedral2", "dihedral8", "dihedral40", "metacyclic7_3_2"})
        names.push_back(n);
    for (auto& n : names) {
        auto p = catalog(n);
        INFO(n);
        CHECK(parse_presentation(print_presentation(p)) == p);
    }
    CHECK_THROWS_AS(catalog("s5"), Error);
    CHECK(catalog("c12").primes == std::vector<int>{2, 2, 3});
}

TEST_CASE("group construction") {
    PcGroup s3(catalog("s3"));
    CHECK(s3.order() == 6);
    std::vector<std::string> names;
    for (PcGroup::Elt g = 0; g < 6; ++g) names.push_back(s3.elt_name(g));
    CHECK(names == std::vector<std::string>{"e", "x", "x^2", "y", "x*y", "x^2*y"});
    auto x = s3.gen(0), y = s3.gen(1);
    CHECK(s3.conj(x, y) == s3.mul(x, x));

    PcGroup sl23(catalog("sl23"));
    CHECK(sl23.order() == 24);
    CHECK(sl23.exponent() == 12);

    PcGroup c5(catalog("c5"));
    CHECK(c5.order() == 5);
    CHECK(c5.mul(c5.gen(0), c5.pow(c5.gen(0), 4)) == 0);

    PcGroup q8(catalog("q8"));
    CHECK(q8.elt_order(q8.gen(1)) == 4);

    // x^2 = y with y central of order 2 but y acting nontrivially is inconsistent
    CHECK_THROWS_AS(PcGroup(parse_presentation("group B\ngen y 2\ngen x 2 pow y\ngen z 3 act y -> 1\n")), Error);
    CHECK_THROWS_AS(PcGroup(parse_presentation("group B\ngen a 3\ngen b 2 act a -> 1\n")), Error);
    CHECK_THROWS_AS(PcGroup(catalog("c64"), 32), Error);
}

TEST_CASE("group invariants on catalog") {
    for (const char* name : {"s3", "d8", "q8", "sl23", "a4", "s4", "c12", "dihedral20", "metacyclic7_3_2", "dihedral36"}) {
        INFO(name);
        PcGroup G(catalog(name));
        for (int i = 0; i <= G.rank(); ++i) {
            std::size_t n = G.level_order(i), total = 0;
            for (auto& c : G.classes(i)) {
                total += c.members.size();
                CHECK(n % c.members.size() == 0);
                CHECK(c.rep == c.members.front());
            }
            CHECK(total == n);
            CHECK(G.classes(i).front().members == std::vector<PcGroup::Elt>{0});
        }
        for (PcGroup::Elt g = 0; g < G.order(); ++g) {
            CHECK(G.from_exps(G.exps(g)) == g);
            CHECK(G.mul(g, G.inv(g)) == 0);
        }
        for (int i = 1; i <= G.rank(); ++i) {
            for (PcGroup::Elt h = 0; h < G.level_order(i - 1); ++h) {
                CHECK(G.phi(i, G.phi_inv(i, h)) == h);
                CHECK(G.conj(h, G.gen(i - 1)) == G.phi(i, h));
                CHECK(G.conj(h, G.gen(i - 1)) < G.level_order(i - 1));
            }
        }
        // classes agree with brute force on the top level
        for (auto& c : G.classes(G.rank()))
            CHECK(std::set<PcGroup::Elt>(c.members.begin(), c.members.end()) == brute_class(G, G.rank(), c.rep));
    }
}

TEST_CASE("class fixtures") {
    PcGroup sl23(catalog("sl23"));
    std::multiset<std::size_t> sizes;
    for (auto& c : sl23.classes(4)) sizes.insert(c.members.size());
    CHECK(sizes == std::multiset<std::size_t>{1, 1, 6, 4, 4, 4, 4});
    CHECK(class_size_of(sl23, 4, sl23.gen(3)) == 4);

    PcGroup d8(catalog("d8"));
    CHECK(d8.classes(3).size() == 5);

    PcGroup s3(catalog("s3"));
    CHECK(s3.class_sum_support(2, s3.gen(1)) == std::vector<PcGroup::Elt>{3, 4, 5});
    CHECK(s3.class_sum_support(2, s3.gen(0)) == std::vector<PcGroup::Elt>{1, 2});
    CHECK_THROWS_AS(s3.class_sum_support(1, s3.gen(1)), Error);

    PcGroup c6(catalog("c6"));
    for (auto& c : c6.classes(2)) CHECK(c.members.size() == 1);
}

TEST_CASE("large group without full table") {
    PcGroup G(catalog("dihedral4096"));
    CHECK(!G.has_table());
    CHECK(G.order() == 4096);
    auto r = G.gen(G.rank() - 2), s = G.gen(G.rank() - 1);
    CHECK(G.elt_order(r) == 2048);
    CHECK(G.conj(r, s) == G.inv(r));
    CHECK(G.classes(G.rank()).size() == 2048 / 2 + 3);
}
