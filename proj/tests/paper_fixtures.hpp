#pragma once

// Hand-transcribed Chapter 8 data for the six textbook groups, shared by the unit
// tests and the acceptance runner.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "solvarep/catalog.hpp"
#include "solvarep/fclass.hpp"
#include "solvarep/repbuilder.hpp"

namespace fixtures {

using namespace solvarep;
using E = CycloElement;
using M = ExactMatrix<CycloField>;
using Elt = PcGroup::Elt;

// e_X = (1 + X + ... + X^{p-1}) / p and friends, over Q(zeta_exp).
struct Algebra {
    const PcGroup& G;
    CycloField F;
    explicit Algebra(const PcGroup& g) : G(g), F(static_cast<int>(g.exponent())) {}
    E g(const std::string& gen) const { return E::delta(G, F, G.gen(G.presentation().gen_index(gen)), G.rank()); }
    E one() const { return E::one(G, F, G.rank()); }
    Cyclotomic c(long v) const { return F.from_int(v); }
    Cyclotomic w(long k = 1) const { return F.zeta(k * F.N / 3); }
    Cyclotomic i() const { return F.zeta(F.N / 4); }
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

inline bool same_set(const std::vector<E>& got, const std::vector<E>& want) {
    if (got.size() != want.size()) return false;
    std::vector<char> used(got.size(), 0);
    for (const auto& w : want) {
        bool hit = false;
        for (std::size_t k = 0; k < got.size() && !hit; ++k)
            if (!used[k] && got[k] == w) used[k] = hit = true;
        if (!hit) return false;
    }
    return true;
}

inline const std::vector<std::string>& textbook_groups() {
    static const std::vector<std::string> names{"s3", "d8", "q8", "a4", "s4", "sl23"};
    return names;
}

// Listed PCIs per level (level -> set), expanded from the e_X products.
// SL2(3) u_2, u_3 use (1/3)(1 + w^k c + w^2k c^2) e_{-x}.
inline std::map<int, std::vector<E>> pci_sets(const PcGroup& G, const std::string& name) {
    Algebra C(G);
    std::map<int, std::vector<E>> out;
    if (name == "s3") {
        E ex = C.e3("x", C.c(1));
        out[1] = {ex, C.e3("x", C.w()), C.e3("x", C.w(2))};
        out[2] = {ex * C.e2("y"), ex * C.e2("y", -1), C.e3("x", C.w()) + C.e3("x", C.w(2))};
    } else if (name == "d8") {
        E ex = C.e2("x"), emx = C.e2("x", -1), ey = C.e2("y"), emy = C.e2("y", -1);
        out[1] = {ex, emx};
        out[2] = {ex * ey, ex * emy, emx * ey, emx * emy};
        out[3] = {ex * ey * C.e2("z"), ex * ey * C.e2("z", -1), ex * emy * C.e2("z"), ex * emy * C.e2("z", -1), emx};
    } else if (name == "q8") {
        E ex = C.e2("x"), emx = C.e2("x", -1);
        out[2] = {ex * C.e2("y"), ex * C.e2("y", -1), emx * C.e2("y", C.i()), emx * C.e2("y", -C.i())};
        out[3] = {ex * C.e2("y") * C.e2("z"), ex * C.e2("y") * C.e2("z", -1), ex * C.e2("y", -1) * C.e2("z"),
                  ex * C.e2("y", -1) * C.e2("z", -1), emx};
    } else if (name == "sl23") {
        E ex = C.e2("x"), emx = C.e2("x", -1);
        E ey = C.e2("y"), emy = C.e2("y", -1), ez = C.e2("z"), emz = C.e2("z", -1);
        E ct = E::class_sum(G, C.F, 4, G.gen(3)).scale(C.F.from_rational(Rational(-1, 2))) * emx;
        const Rational third(1, 3);
        auto u = [&](long k) {
            return (emx + ct.scale(C.w(k)) + (ct * ct).scale(C.w(2 * k))).scale(C.F.from_rational(third));
        };
        out[4] = {u(0), u(1), u(2), ex * ey * emz + ex * emy * ez + ex * emy * emz,
                  ex * ey * ez * C.e3("t", C.w()), ex * ey * ez * C.e3("t", C.w(2)), ex * ey * ez * C.e3("t", C.c(1))};
    } else if (name == "a4") {
        E exy = C.e2("x") * C.e2("y");
        out[3] = {exy * C.e3("z", C.c(1)), exy * C.e3("z", C.w()), exy * C.e3("z", C.w(2)), C.one() - exy};
    } else if (name == "s4") {
        E exy = C.e2("x") * C.e2("y");
        E rest = C.one() - exy;
        E ct = E::class_sum(G, C.F, 4, G.gen(3)) * rest;
        const Cyclotomic half = C.F.from_rational(Rational(1, 2));
        out[4] = {(rest + ct.scale(half)).scale(half), (rest - ct.scale(half)).scale(half),
                  exy * C.e3("z", C.c(1)) * C.e2("t"), exy * C.e3("z", C.c(1)) * C.e2("t", -1),
                  exy * C.e3("z", C.w()) + exy * C.e3("z", C.w(2))};
    } else {
        fail("no_fixture", name);
    }
    return out;
}

// ---- matrices --------------------------------------------------------------

struct Matrices {
    const PcGroup& G;
    std::shared_ptr<const CycloField> f;
    const CycloField& F() const { return *f; }
    Cyclotomic c(long v) const { return F().from_int(v); }
    Cyclotomic q(long a, long b) const { return F().from_rational(Rational(a, b)); }
    Cyclotomic w(long k = 1) const { return F().zeta(k * F().N / 3); }
    Cyclotomic i() const { return F().zeta(F().N / 4); }
    M mat(std::vector<std::vector<Cyclotomic>> rows) const {
        M m(F(), rows.size(), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t s = 0; s < rows[r].size(); ++s) m(r, s) = rows[r][s];
        return m;
    }
    M diag(std::vector<Cyclotomic> d) const {
        M m(F(), d.size(), d.size());
        for (std::size_t r = 0; r < d.size(); ++r) m(r, r) = d[r];
        return m;
    }
    M perm3() const { return mat({{c(0), c(0), c(1)}, {c(1), c(0), c(0)}, {c(0), c(1), c(0)}}); }
    ExactRep rep(std::vector<M> gens) const { return make_rep(G, f, std::move(gens)); }
};

struct NamedRep {
    std::string name;
    ExactRep rep;
};

// The printed matrices; SL2(3) theta_4(z) is corrected to diag(-1, -1, 1).
inline std::vector<NamedRep> paper_reps(const PcGroup& G, const ExactDiagram& D, const std::string& name) {
    Matrices S{G, D.field_ptr()};
    std::vector<NamedRep> out;
    if (name == "s3") {
        out.push_back({"rho", S.rep({S.diag({S.w(2), S.w(1)}), S.mat({{S.c(0), S.c(1)}, {S.c(1), S.c(0)}})})});
    } else if (name == "d8") {
        out.push_back({"rho1", S.rep({S.diag({S.c(-1), S.c(-1)}), S.diag({S.c(1), S.c(-1)}),
                                      S.mat({{S.c(0), S.c(1)}, {S.c(1), S.c(0)}})})});
    } else if (name == "q8") {
        out.push_back({"rho1", S.rep({S.diag({S.c(-1), S.c(-1)}), S.diag({S.i(), -S.i()}),
                                      S.mat({{S.c(0), S.c(-1)}, {S.c(1), S.c(0)}})})});
    } else if (name == "a4") {
        out.push_back({"rho1", S.rep({S.diag({S.c(1), S.c(-1), S.c(-1)}), S.diag({S.c(-1), S.c(-1), S.c(1)}),
                                      S.perm3()})});
    } else if (name == "s4") {
        M Y4 = S.mat({{S.c(1), S.c(0), S.c(0)}, {S.c(0), S.c(0), S.c(1)}, {S.c(0), S.c(1), S.c(0)}});
        M Y5 = S.mat({{S.c(-1), S.c(0), S.c(0)}, {S.c(0), S.c(0), S.c(-1)}, {S.c(0), S.c(-1), S.c(0)}});
        M X = S.diag({S.c(1), S.c(-1), S.c(-1)}), Y = S.diag({S.c(-1), S.c(-1), S.c(1)});
        M I2 = M::identity(S.F(), 2);
        out.push_back({"theta3", S.rep({I2, I2, S.diag({S.w(1), S.w(2)}), S.mat({{S.c(0), S.c(1)}, {S.c(1), S.c(0)}})})});
        out.push_back({"theta4", S.rep({X, Y, S.perm3(), Y4})});
        out.push_back({"theta5", S.rep({X, Y, S.perm3(), Y5})});
    } else if (name == "sl23") {
        M I3 = M::identity(S.F(), 3);
        out.push_back({"theta4",
                       S.rep({I3, S.diag({S.c(1), S.c(-1), S.c(-1)}), S.diag({S.c(-1), S.c(-1), S.c(1)}), S.perm3()})});
    } else {
        fail("no_fixture", name);
    }
    return out;
}

// SL2(3) theta_4 exactly as printed (fails z^2 = x)
inline ExactRep printed_sl23_theta4(const PcGroup& G, const ExactDiagram& D) {
    Matrices S{G, D.field_ptr()};
    M z = S.mat({{S.c(-1), S.c(0), S.c(1)}, {S.c(0), S.c(1), S.c(0)}, {S.c(0), S.c(0), S.c(-1)}});
    return S.rep({M::identity(S.F(), 3), S.diag({S.c(1), S.c(-1), S.c(-1)}), z, S.perm3()});
}

// Exactly one engine rep is equivalent to `want`, and the intertwiner T satisfies
// T rho(x_k) = want(x_k) T for every generator.
inline bool matches_one(const std::vector<ExactRep>& reps, const ExactRep& want) {
    int hits = 0;
    for (const auto& r : reps) {
        M T;
        if (are_equivalent(r, want, &T)) {
            ++hits;
            if (T.rows() != r.degree || T.rank() != r.degree) return false;
            for (int k = 0; k < r.group().rank(); ++k)
                if (T * r.gens[k] != want.gens[k] * T) return false;
        }
    }
    return hits == 1;
}

// ---- rational classes ------------------------------------------------------

// Words like "zx^2y" in the textbook letters.
struct Textbook {
    const PcGroup& G;
    std::map<char, Elt> letter;

    Elt word(const std::string& w) const {
        Elt g = G.identity();
        for (std::size_t k = 0; k < w.size();) {
            if (w[k] == 'e') {
                ++k;
                continue;
            }
            Elt a = letter.at(w[k++]);
            long e = 1;
            if (k < w.size() && w[k] == '^') {
                e = w[k + 1] - '0';
                k += 2;
            }
            g = G.mul(g, G.pow(a, e));
        }
        return g;
    }
    std::set<Elt> set(const std::vector<std::string>& ws) const {
        std::set<Elt> s;
        for (auto& w : ws) s.insert(word(w));
        return s;
    }
};

inline Textbook textbook(const PcGroup& G, const std::string& name) {
    if (name == "d8") return {G, {{'x', G.mul(G.gen(1), G.gen(2))}, {'y', G.gen(1)}}};
    if (name == "q8") return {G, {{'x', G.gen(1)}, {'y', G.gen(2)}}};
    if (name == "sl23") return {G, {{'x', G.gen(1)}, {'y', G.gen(2)}, {'z', G.gen(3)}}};
    fail("no_fixture", name);
}

inline std::set<Elt> fclass_elements(const PcGroup& G, const FClass& fc) {
    std::set<Elt> s;
    for (int c : fc.classes)
        for (Elt g : G.classes(G.rank())[c].members) s.insert(g);
    return s;
}

inline std::set<std::set<Elt>> partition(const PcGroup& G, const std::vector<FClass>& cls) {
    std::set<std::set<Elt>> out;
    for (auto& fc : cls) out.insert(fclass_elements(G, fc));
    return out;
}

inline int fclass_of(const PcGroup& G, const std::vector<FClass>& cls, Elt g) {
    for (std::size_t i = 0; i < cls.size(); ++i)
        if (fclass_elements(G, cls[i]).count(g)) return static_cast<int>(i);
    return -1;
}

// Q-classes; for SL2(3) L_4 and L_5 use the corrected z^2-coset elements.
inline std::set<std::set<Elt>> rational_classes(const Textbook& B, const std::string& name) {
    if (name == "d8" || name == "q8")
        return {B.set({"e"}), B.set({"x^2"}), B.set({"x", "x^3"}), B.set({"y", "x^2y"}), B.set({"xy", "x^3y"})};
    if (name == "sl23")
        return {B.set({"e"}), B.set({"x^2"}), B.set({"x", "x^3", "y", "y^3", "xy", "xy^3"}),
                B.set({"z", "zx", "zy", "zxy", "z^2", "z^2x^3", "z^2x^2y", "z^2x^3y"}),
                B.set({"zx^2", "zx^3", "zx^2y", "zx^3y", "z^2x^2", "z^2x", "z^2y", "z^2xy"})};
    fail("no_fixture", name);
}

struct RationalTable {
    std::vector<std::string> columns;         // class representatives
    std::vector<std::vector<Rational>> rows;  // as printed
    std::vector<int> schur_rows;              // rows carrying the factor 2
};

inline RationalTable rational_table(const std::string& name) {
    if (name == "d8")
        return {{"e", "x^2", "x", "y", "xy"},
                {{1, 1, 1, 1, 1}, {1, 1, 1, -1, -1}, {1, 1, -1, 1, -1}, {1, 1, -1, -1, 1}, {2, -2, 0, 0, 0}},
                {}};
    if (name == "q8")
        return {{"e", "x^2", "x", "y", "xy"},
                {{1, 1, 1, 1, 1}, {1, 1, 1, -1, -1}, {1, 1, -1, 1, -1}, {1, 1, -1, -1, 1}, {4, -4, 0, 0, 0}},
                {4}};
    if (name == "sl23")
        return {{"e", "x^2", "x", "z", "zx^2"},
                {{1, 1, 1, 1, 1}, {2, 2, 2, -1, -1}, {3, 3, -1, 0, 0}, {4, -4, 0, -2, 2}, {8, -8, 0, 2, -2}},
                {3, 4}};
    fail("no_fixture", name);
}

using RowSet = std::multiset<std::vector<std::string>>;

inline RowSet rows_at(const FCharacterTable& T, const Textbook& B, const std::vector<std::string>& cols) {
    RowSet out;
    for (auto& r : T.rows) {
        std::vector<std::string> v;
        for (auto& w : cols) v.push_back(r.values.at(fclass_of(B.G, T.classes, B.word(w))).to_text());
        out.insert(v);
    }
    return out;
}

inline RowSet rational_rows(const std::vector<std::vector<Rational>>& rows) {
    RowSet out;
    for (auto& r : rows) {
        std::vector<std::string> v;
        for (auto& q : r) v.push_back(Cyclotomic(1, q).to_text());
        out.insert(v);
    }
    return out;
}

// the printed table with the Schur factor divided out
inline RowSet reduced_rows(const RationalTable& t) {
    auto rows = t.rows;
    for (int r : t.schur_rows)
        for (auto& v : rows[r]) v /= 2;
    return rational_rows(rows);
}

} // namespace fixtures
