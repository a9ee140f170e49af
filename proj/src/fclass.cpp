#include "solvarep/fclass.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace solvarep {

FieldDescriptor FieldDescriptor::finite(u64 q) {
    if (q < 2 || factorize(q).size() != 1) fail("bad_field", "F_q needs a prime power q, got " + std::to_string(q));
    return {Kind::Finite, q};
}

FieldDescriptor FieldDescriptor::parse(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (t == "Q" || t == "RATIONAL" || t == "QQ") return rational();
    if (t == "R" || t == "REAL" || t == "RR") return real();
    if (t == "C" || t == "COMPLEX" || t == "CC") return complex();
    std::string digits;
    if (t.rfind("GF(", 0) == 0 && t.back() == ')') digits = t.substr(3, t.size() - 4);
    else if (t.rfind("F_", 0) == 0 || t.rfind("F:", 0) == 0) digits = t.substr(2);
    else if (t.rfind("F", 0) == 0) digits = t.substr(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(c); }) ||
        digits.size() > 18)
        fail("bad_field", "unknown field '" + s + "'");
    return finite(std::stoull(digits));
}

std::string FieldDescriptor::name() const {
    switch (kind) {
    case Kind::Rational: return "Q";
    case Kind::Real: return "R";
    case Kind::Complex: return "C";
    case Kind::Finite: return "F" + std::to_string(q);
    }
    return "?";
}

std::vector<u64> exponent_subgroup(u64 n, const FieldDescriptor& F) {
    if (n == 0) fail("domain", "exponent subgroup of Z/0");
    if (n == 1) return {0};
    std::vector<u64> out;
    switch (F.kind) {
    case FieldDescriptor::Kind::Rational:
        for (u64 r = 1; r < n; ++r)
            if (gcd_u(r, n) == 1) out.push_back(r);
        break;
    case FieldDescriptor::Kind::Real:
        out = {1, n - 1};
        break;
    case FieldDescriptor::Kind::Complex:
        out = {1};
        break;
    case FieldDescriptor::Kind::Finite: {
        if (gcd_u(F.q, n) != 1)
            fail("not_coprime", "q = " + std::to_string(F.q) + " is not coprime to " + std::to_string(n));
        u64 r = 1;
        do {
            out.push_back(r);
            r = mulmod(r, F.q % n, n);
        } while (r != 1);
        break;
    }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<FClass> f_conjugacy_classes(const PcGroup& G, const FieldDescriptor& F) {
    const int top = G.rank();
    const auto& cls = G.classes(top);
    std::vector<int> parent(cls.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t c = 0; c < cls.size(); ++c) {
        const auto g = cls[c].rep;
        for (u64 r : exponent_subgroup(G.elt_order(g), F)) {
            int a = find(static_cast<int>(c)), b = find(G.class_of(top, G.pow(g, static_cast<long>(r))));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (std::size_t c = 0; c < cls.size(); ++c) groups[find(static_cast<int>(c))].push_back(static_cast<int>(c));
    std::vector<FClass> out;
    for (auto& [root, members] : groups) {
        FClass fc;
        fc.classes = members;
        fc.rep = cls[members.front()].rep;
        fc.order = G.elt_order(fc.rep);
        fc.exponents = exponent_subgroup(fc.order, F);
        for (int c : members) fc.size += cls[c].members.size();
        out.push_back(std::move(fc));
    }
    return out;
}

std::vector<int> f_class_index(const PcGroup& G, const std::vector<FClass>& classes) {
    std::vector<int> idx(G.classes(G.rank()).size(), -1);
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (int c : classes[i].classes) idx.at(c) = static_cast<int>(i);
    if (std::find(idx.begin(), idx.end(), -1) != idx.end()) fail("domain", "F-class list does not cover the group");
    return idx;
}

namespace {

// a generating set of the subgroup, greedily
std::vector<u64> subgroup_generators(const std::vector<u64>& H, u64 n) {
    std::vector<u64> gens;
    std::vector<char> in(n, 0);
    in[1 % n] = 1;
    std::vector<u64> span = {1 % n};
    for (u64 h : H) {
        if (in[h]) continue;
        gens.push_back(h);
        for (std::size_t k = 0; k < span.size(); ++k) {
            for (u64 g : gens) {
                u64 x = mulmod(span[k], g, n);
                if (!in[x]) {
                    in[x] = 1;
                    span.push_back(x);
                }
            }
        }
    }
    return gens;
}

} // namespace

std::vector<GaloisOrbit> galois_orbit_sum_pcis(const ExactDiagram& D, const FieldDescriptor& F, bool verify) {
    const PcGroup& G = D.group();
    const CycloField& f = D.field();
    const int top = D.depth();
    const auto& cls = G.classes(top);
    const auto& leaves = D.leaves();
    const u64 N = static_cast<u64>(f.N);
    const auto H = exponent_subgroup(N, F);
    const auto gens = subgroup_generators(H, N);

    std::vector<std::vector<std::string>> text(leaves.size());
    std::map<std::string, int> by_key;
    auto join = [](const std::vector<std::string>& parts, const std::vector<int>* perm) {
        std::string k;
        for (std::size_t c = 0; c < parts.size(); ++c) {
            k += parts[perm ? (*perm)[c] : c];
            k += '|';
        }
        return k;
    };
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        for (auto& v : leaves[l].chi) text[l].push_back(v.to_text());
        by_key[join(text[l], nullptr)] = static_cast<int>(l);
    }
    std::vector<std::vector<int>> powmap;
    for (u64 r : gens) {
        std::vector<int> pm(cls.size());
        for (std::size_t c = 0; c < cls.size(); ++c) pm[c] = G.class_of(top, G.pow(cls[c].rep, static_cast<long>(r)));
        powmap.push_back(std::move(pm));
    }

    std::vector<int> orbit_of(leaves.size(), -1);
    std::vector<GaloisOrbit> out;
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        if (orbit_of[l] >= 0) continue;
        const int o = static_cast<int>(out.size());
        std::vector<int> members = {static_cast<int>(l)};
        orbit_of[l] = o;
        for (std::size_t k = 0; k < members.size(); ++k)
            for (auto& pm : powmap) {
                auto it = by_key.find(join(text[members[k]], &pm));
                if (it == by_key.end()) fail("internal", "Galois image of a character is not a leaf character");
                if (orbit_of[it->second] < 0) {
                    orbit_of[it->second] = o;
                    members.push_back(it->second);
                }
            }
        std::sort(members.begin(), members.end());
        GaloisOrbit orb;
        orb.leaves = members;
        orb.delta = members.size();
        orb.degree = leaves[l].degree;
        orb.character.assign(cls.size(), f.zero());
        orb.idempotent = CycloElement(G, f, top);
        for (int m : members) {
            for (std::size_t c = 0; c < cls.size(); ++c) orb.character[c] += leaves[m].chi[c];
            orb.idempotent += D.idempotent(top, m);
        }
        out.push_back(std::move(orb));
    }

    if (verify) {
        for (auto& orb : out) {
            for (auto& [g, c] : orb.idempotent.terms())
                for (u64 r : gens)
                    if (c.galois(static_cast<long>(r)) != c)
                        fail("internal", "orbit sum is not rational over " + F.name() + " at " + G.elt_name(g));
            if (!orb.idempotent.is_idempotent()) fail("internal", "orbit sum is not idempotent");
            if (!orb.idempotent.is_central_at(top)) fail("internal", "orbit sum is not central");
        }
    }
    return out;
}

FCharacterTable reduced_f_character_table(const ExactDiagram& D, const FieldDescriptor& F,
                                          const std::vector<GaloisOrbit>* orbits) {
    const PcGroup& G = D.group();
    std::vector<GaloisOrbit> own;
    if (!orbits) {
        own = galois_orbit_sum_pcis(D, F, false);
        orbits = &own;
    }
    FCharacterTable T;
    T.field = F;
    T.classes = f_conjugacy_classes(G, F);
    if (T.classes.size() != orbits->size())
        fail("internal", "F-class count " + std::to_string(T.classes.size()) + " differs from orbit count " +
                             std::to_string(orbits->size()));
    for (auto& fc : T.classes) T.class_labels.push_back(G.elt_name(fc.rep));
    int k = 0;
    for (auto& orb : *orbits) {
        FCharacterTable::Row row;
        row.label = "psi" + std::to_string(++k);
        row.delta = orb.delta;
        row.degree = orb.degree;
        for (auto& fc : T.classes) {
            const Cyclotomic& v = orb.character[fc.classes.front()];
            for (int c : fc.classes)
                if (orb.character[c] != v) fail("internal", "orbit character is not constant on an F-class");
            row.values.push_back(v);
        }
        T.rows.push_back(std::move(row));
    }
    return T;
}

nlohmann::json FCharacterTable::to_json() const {
    nlohmann::json cl = nlohmann::json::array();
    for (std::size_t i = 0; i < classes.size(); ++i)
        cl.push_back({{"label", class_labels[i]}, {"size", classes[i].size}, {"order", classes[i].order},
                      {"classes", classes[i].classes}});
    nlohmann::json rs = nlohmann::json::array();
    for (auto& r : rows) {
        nlohmann::json vals = nlohmann::json::array();
        for (auto& v : r.values) vals.push_back(v.to_json());
        rs.push_back({{"label", r.label}, {"delta", r.delta}, {"degree", r.degree}, {"values", vals}});
    }
    return {{"field", field.name()}, {"reduced", true}, {"classes", cl}, {"rows", rs}};
}

std::string FCharacterTable::to_text() const {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head = {""};
    for (auto& l : class_labels) head.push_back(l);
    cells.push_back(head);
    for (auto& r : rows) {
        std::vector<std::string> line = {r.label};
        for (auto& v : r.values) line.push_back(v.to_text());
        cells.push_back(line);
    }
    std::vector<std::size_t> w(head.size(), 0);
    for (auto& line : cells)
        for (std::size_t j = 0; j < line.size(); ++j) w[j] = std::max(w[j], line[j].size());
    std::ostringstream os;
    os << "reduced " << field.name() << "-character table\n";
    for (auto& line : cells) {
        for (std::size_t j = 0; j < line.size(); ++j) {
            if (j) os << "  ";
            os << std::string(w[j] - line[j].size(), ' ') << line[j];
        }
        os << "\n";
    }
    return os.str();
}

RowIdempotent pci_from_character_row(const PcGroup& G, const CycloField& f, const std::vector<FClass>& classes,
                                     const std::vector<Cyclotomic>& row) {
    if (row.size() != classes.size())
        fail("domain", "row has " + std::to_string(row.size()) + " values for " + std::to_string(classes.size()) +
                           " classes");
    const int top = G.rank();
    const auto idx = f_class_index(G, classes);
    std::vector<Cyclotomic> vals;
    for (auto& v : row) vals.push_back(v.level() == f.N ? v : v.at_level(f.N));
    std::vector<Cyclotomic> dense(G.order(), f.zero());
    for (PcGroup::Elt x = 0; x < G.order(); ++x) dense[x] = vals[idx[G.class_of(top, G.inv(x))]];
    auto e2 = CycloElement::from_dense(G, f, top, dense);
    if (e2.is_zero()) fail("not_proportional", "row is not irreducible: e'' = 0");
    auto s = try_scalar_ratio(e2 * e2, e2);
    if (!s || s->is_zero()) fail("not_proportional", "row is not irreducible: e''^2 is not a multiple of e''");
    RowIdempotent out;
    out.s = *s;
    out.e = e2.scale(s->inv());
    if (!out.e.is_idempotent() || !out.e.is_central_at(top)) fail("internal", "row idempotent check failed");
    // primitive among F-rational central idempotents: every F-class sum acts on e by a scalar
    for (auto& fc : classes) {
        std::vector<PcGroup::Elt> supp;
        for (int c : fc.classes)
            for (auto g : G.classes(top)[c].members) supp.push_back(g);
        auto L = CycloElement::from_support(G, f, top, supp, f.one());
        if (!try_scalar_ratio(L * out.e, out.e))
            fail("not_proportional", "row is not irreducible: e is a sum of smaller central idempotents");
    }
    if (s->is_rational()) {
        Rational n = Rational(static_cast<unsigned long>(G.order())) / s->coord(0);
        if (n > 0 && n.get_den() == 1) out.n_inferred = n.get_num();
    }
    return out;
}

} // namespace solvarep
