#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "paper_fixtures.hpp"
#include "solvarep/catalog.hpp"
#include "solvarep/pci.hpp"

using namespace solvarep;

namespace {

using E = CycloElement;
using fixtures::same_set;

struct Ctx {
    PcGroup G;
    CycloField F;
    explicit Ctx(const std::string& name) : G(catalog(name)), F(static_cast<int>(G.exponent())) {}
    E g(const std::string& gen) const { return E::delta(G, F, G.gen(G.presentation().gen_index(gen)), G.rank()); }
    E one() const { return E::one(G, F, G.rank()); }
    Cyclotomic c(long v) const { return F.from_int(v); }
    // primitive cube root of unity
    Cyclotomic w(long k = 1) const { return F.zeta(k * F.N / 3); }
    Cyclotomic i() const { return F.zeta(F.N / 4); }
    // (1 + X + ... + X^{p-1}) / p
    E eX(const E& X, int p) const {
        E s = one(), Xk = one();
        for (int k = 1; k < p; ++k) {
            Xk = Xk * X;
            s += Xk;
        }
        return s.scale(F.from_rational(Rational(1, p)));
    }
    E e2(const std::string& gen, long sign = 1) const { return eX(g(gen).scale(c(sign)), 2); }
    E e2(const std::string& gen, const Cyclotomic& s) const { return eX(g(gen).scale(s), 2); }
    E e3(const std::string& gen, const Cyclotomic& s) const { return eX(g(gen).scale(s), 3); }
};

std::multiset<u64> degrees(const ExactDiagram& D) {
    std::multiset<u64> d;
    for (const auto& n : D.leaves()) d.insert(n.degree);
    return d;
}

} // namespace

TEST_CASE("catalog PCI sets") {
    for (const auto& name : fixtures::textbook_groups()) {
        DYNAMIC_SECTION(name) {
            PcGroup G(catalog(name));
            auto D = build_pci_diagram(G);
            for (const auto& [lvl, want] : fixtures::pci_sets(G, name)) {
                INFO("level " << lvl);
                CHECK(same_set(D.level_idempotents(lvl), want));
            }
        }
    }
    SECTION("written-out forms") {
        Ctx S("s3");
        // the degree two node of S3
        E two = (S.one().scale(S.c(2)) - S.g("x") - S.g("x") * S.g("x")).scale(S.F.from_rational(Rational(1, 3)));
        bool found = false;
        for (const auto& e : build_pci_diagram(S.G).level_idempotents(2)) found |= (e == two);
        CHECK(found);

        Ctx D("d8");
        CHECK(D.e2("x", -1) * D.e2("y") + D.e2("x", -1) * D.e2("y", -1) == D.e2("x", -1));
        Ctx Q("q8");
        CHECK(Q.e2("x", -1) == (Q.one() - Q.g("x")).scale(Q.F.from_rational(Rational(1, 2))));
        Ctx L("sl23");
        CHECK(degrees(build_pci_diagram(L.G)) == std::multiset<u64>{1, 1, 1, 2, 2, 2, 3});
    }
}

TEST_CASE("Berman step records") {
    PcGroup SL(catalog("sl23"));
    auto M = build_pci_diagram_modular(SL);
    PrimeField P(M.prime());
    bool seen = false;
    for (const auto& s : M.steps(3)) {
        if (s.kind != BermanRecord::Split || M.level(3)[s.parents[0]].degree != 2) continue;
        seen = true;
        CHECK(s.xstar == SL.gen(3));
        CHECK(P.centered(s.lambda) == -8);
        CHECK(P.centered(s.mu) == -2);
        CHECK(s.children.size() == 3);
    }
    CHECK(seen);

    PcGroup S4(catalog("s4"));
    auto M4 = build_pci_diagram_modular(S4);
    PrimeField P4(M4.prime());
    for (const auto& s : M4.steps(3))
        if (s.kind == BermanRecord::Split && M4.level(3)[s.parents[0]].degree == 3) {
            CHECK(P4.centered(s.lambda) == 4);
            CHECK(P4.centered(s.mu) == 2);
        }

    // fusions in S3 and A4
    PcGroup S3(catalog("s3"));
    auto M3 = build_pci_diagram_modular(S3);
    int fused = 0;
    for (const auto& s : M3.steps(1))
        if (s.kind == BermanRecord::Fused) {
            ++fused;
            CHECK(s.parents.size() == 2);
        }
    CHECK(fused == 1);
}

TEST_CASE("degree profiles and diagram invariants") {
    std::map<std::string, std::multiset<u64>> want{{"s4", {1, 1, 2, 3, 3}},
                                                   {"sl23", {1, 1, 1, 2, 2, 2, 3}},
                                                   {"d8", {1, 1, 1, 1, 2}},
                                                   {"q8", {1, 1, 1, 1, 2}}};
    std::vector<std::string> names = catalog_fixed_names();
    for (const char* extra : {"c1", "c2", "c12", "dihedral10", "dihedral12", "metacyclic7_3_2", "metacyclic9_6_2"})
        names.push_back(extra);
    for (const auto& name : names) {
        CAPTURE(name);
        PcGroup G(catalog(name));
        auto D = build_pci_diagram(G);
        if (want.count(name)) CHECK(degrees(D) == want[name]);
        u64 sq = 0;
        for (auto d : degrees(D)) sq += d * d;
        CHECK(sq == G.order());
        for (int i = 0; i <= D.depth(); ++i) {
            auto es = D.level_idempotents(i);
            CHECK(es.size() == G.classes(i).size());
            E total(G, D.field(), i);
            for (std::size_t a = 0; a < es.size(); ++a) {
                CHECK(es[a].is_idempotent());
                CHECK(es[a].is_central_at(i));
                for (std::size_t b = a + 1; b < es.size(); ++b) CHECK((es[a] * es[b]).is_zero());
                total += es[a];
            }
            CHECK(total == E::one(G, D.field(), i));
            // every node is consumed by exactly one step
            if (i < D.depth()) {
                std::vector<int> uses(D.level(i).size(), 0);
                for (const auto& s : D.steps(i))
                    for (int p : s.parents) ++uses[p];
                for (int u : uses) CHECK(u == 1);
            }
        }
        // the trivial leaf is the principal idempotent
        int trivial = 0;
        for (const auto& n : D.leaves())
            if (n.trivial) {
                ++trivial;
                CHECK(D.idempotent(D.depth(), n.id) ==
                      E::from_support(G, D.field(), D.depth(), [&] {
                          std::vector<PcGroup::Elt> all(G.order());
                          for (PcGroup::Elt g = 0; g < G.order(); ++g) all[g] = g;
                          return all;
                      }(), D.field().from_rational(Rational(1, static_cast<long>(G.order())))));
            }
        CHECK(trivial == 1);
    }
}

TEST_CASE("C2 idempotents") {
    PcGroup C2(catalog("c2"));
    auto D = build_pci_diagram(C2);
    CycloField F(2);
    E x = E::delta(C2, F, C2.gen(0), 1);
    E h = E::one(C2, F, 1).scale(F.from_rational(Rational(1, 2)));
    CHECK(same_set(D.level_idempotents(1), {h + x.scale(F.from_rational(Rational(1, 2))),
                                            h - x.scale(F.from_rational(Rational(1, 2)))}));
}

TEST_CASE("GZ generators") {
    Ctx C("s3");
    auto D = build_pci_diagram(C.G);
    auto gz = gz_generators(D);
    REQUIRE(gz.size() == 2);
    // G_1 is abelian, so the class of x in G_1 is {x}
    CHECK(gz[0] == C.g("x"));
    CHECK(gz[1] == C.g("y") + C.g("x") * C.g("y") + C.g("x") * C.g("x") * C.g("y"));
    for (const char* name : {"d8", "sl23", "s4", "c12"}) {
        PcGroup G(catalog(name));
        auto DG = build_pci_diagram(G);
        auto z = gz_generators(DG);
        for (std::size_t a = 0; a < z.size(); ++a)
            for (std::size_t b = a + 1; b < z.size(); ++b) CHECK(z[a] * z[b] == z[b] * z[a]);
        if (std::string(name) == "sl23") CHECK(z[3].support_size() == 4);
        if (std::string(name) == "c12")
            for (int k = 0; k < G.rank(); ++k) CHECK(z[k].support_size() == 1);
    }
}

TEST_CASE("path idempotents") {
    Ctx C("s3");
    auto D = build_pci_diagram(C.G);
    int two = -1;
    for (const auto& n : D.leaves())
        if (n.degree == 2) two = n.id;
    REQUIRE(two >= 0);
    auto paths = leaf_paths(D, two);
    CHECK(paths.size() == 2);
    CHECK(same_set(path_idempotents(D, two), {C.e3("x", C.w()), C.e3("x", C.w(2))}));
    for (const auto& n : D.leaves())
        if (n.degree == 1) {
            auto ps = path_idempotents(D, n.id);
            REQUIRE(ps.size() == 1);
            CHECK(ps[0] == D.idempotent(D.depth(), n.id));
        }

    Ctx S("s4");
    auto D4 = build_pci_diagram(S.G);
    E exy = S.e2("x") * S.e2("y");
    E b5 = exy * S.e3("z", S.w()) + exy * S.e3("z", S.w(2));
    for (const auto& n : D4.leaves())
        if (D4.idempotent(4, n.id) == b5) {
            auto ps = path_idempotents(D4, n.id);
            CHECK(ps.size() == 2);
            CHECK(ps[0] + ps[1] == b5);
        }
    // every leaf of SL2(3) decomposes into d orthogonal path idempotents
    PcGroup SL(catalog("sl23"));
    auto DS = build_pci_diagram(SL);
    for (const auto& n : DS.leaves()) CHECK(path_idempotents(DS, n.id).size() == n.degree);
}

TEST_CASE("modular and exact diagrams agree") {
    for (const auto& name : catalog_fixed_names()) {
        CAPTURE(name);
        PcGroup G(catalog(name));
        u64 l1 = select_prime(G), l2 = select_prime(G, l1);
        CHECK(l1 != l2);
        for (u64 ell : {l1, l2}) {
            PciOptions opt;
            opt.prime = ell;
            auto M = build_pci_diagram_modular(G, opt);
            auto X = build_pci_diagram(G, opt);
            for (int i = 0; i <= G.rank(); ++i) {
                std::vector<ModElement> reduced;
                for (const auto& e : X.level_idempotents(i)) {
                    std::vector<u64> dense(G.level_order(i));
                    for (PcGroup::Elt g = 0; g < dense.size(); ++g) dense[g] = M.field().reduce(e.coeff(g));
                    reduced.push_back(ModElement::from_dense(G, M.field(), i, dense));
                }
                auto mod = M.level_idempotents(i);
                REQUIRE(reduced.size() == mod.size());
                for (std::size_t k = 0; k < mod.size(); ++k) CHECK(reduced[k] == mod[k]);
            }
        }
    }
}

TEST_CASE("prime selection and overrides") {
    PcGroup S3(catalog("s3"));
    u64 ell = select_prime(S3);
    CHECK(ell % 6 == 1);
    CHECK(ell > prime_lower_bound(S3));
    CHECK(is_prime(ell));
    PciOptions bad;
    bad.prime = 7; // too small for the lift
    CHECK_THROWS_AS(build_pci_diagram(S3, bad), Error);
    bad.prime = 101; // not 1 mod 6
    CHECK_THROWS_AS(build_pci_diagram(S3, bad), Error);
    bad.prime = 91;
    CHECK_THROWS_AS(build_pci_diagram(S3, bad), Error);
}

TEST_CASE("diagram emission") {
    PcGroup D8(catalog("d8"));
    auto D = build_pci_diagram(D8);
    std::string dot = D.to_dot();
    std::size_t ranks = 0, pos = 0;
    while ((pos = dot.find("rank=same", pos)) != std::string::npos) ++ranks, ++pos;
    CHECK(ranks == 4);
    std::size_t nodes = 0;
    pos = 0;
    while ((pos = dot.find("[label=", pos)) != std::string::npos) ++nodes, ++pos;
    CHECK(nodes == 12);
    auto j = D.to_json();
    CHECK(j["group"] == "D8");
    CHECK(j["levels"].size() == 4);
    CHECK(j["levels"][3].size() == 5);
    CHECK(j["levels"][3][0].contains("idempotent"));
    CHECK(D.to_text().find("level 3") != std::string::npos);
}
