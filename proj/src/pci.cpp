#include "solvarep/pci.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <sstream>

namespace solvarep {

namespace {

constexpr u64 kPrimeCeiling = u64{1} << 31;

int group_exponent(const PcGroup& G) { return static_cast<int>(G.exponent()); }

// mu with mu^p = lambda. Preference: a small integer (positive on ties), then a
// power omega^k with least k, then the least centered value.
u64 canonical_root(const ModField& f, u64 lambda, u64 p, u64 small) {
    const PrimeField& P = f.P;
    u64 mu0 = P.pth_root(lambda, p);
    const u64 ell = P.modulus();
    if ((ell - 1) % p != 0) return mu0;
    const u64 zp = P.element_of_order(p);
    auto key = [&](u64 v) {
        i64 c = P.centered(v);
        u64 a = static_cast<u64>(c < 0 ? -c : c);
        if (a <= small) return std::tuple<int, u64, int>(0, a, c < 0 ? 1 : 0);
        if (P.pow(v, static_cast<u64>(f.N)) == 1) {
            u64 k = 0;
            for (u64 w = 1; w != v; w = P.mul(w, f.omega)) ++k;
            return std::tuple<int, u64, int>(1, k, 0);
        }
        return std::tuple<int, u64, int>(2, a, c < 0 ? 1 : 0);
    };
    u64 best = mu0, cur = mu0;
    for (u64 k = 1; k < p; ++k) {
        cur = P.mul(cur, zp);
        if (key(cur) < key(best)) best = cur;
    }
    return best;
}

// the elements of a level as a dense class function check, returns per-class values
std::vector<u64> modular_character(const PcGroup& G, const ModField& f, const ModElement& e, int level, u64 d) {
    const auto& cls = G.classes(level);
    const u64 scale = f.mul(f.from_int(static_cast<long>(G.level_order(level))), f.inv(f.from_int(static_cast<long>(d))));
    std::vector<u64> chi(cls.size());
    for (std::size_t c = 0; c < cls.size(); ++c) chi[c] = f.mul(e.coeff(G.inv(cls[c].rep)), scale);
    // class constancy
    for (PcGroup::Elt g = 0; g < G.level_order(level); ++g) {
        u64 v = f.mul(e.coeff(G.inv(g)), scale);
        if (v != chi[G.class_of(level, g)]) fail("internal", "idempotent is not a class function");
    }
    return chi;
}

bool is_principal(const std::vector<u64>& chi) {
    for (u64 v : chi)
        if (v != 1) return false;
    return true;
}

u64 parse_env_prime() {
    const char* s = std::getenv("SOLVAREP_PRIME");
    if (!s || !*s) return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0' || v == 0) fail("bad_prime", std::string("SOLVAREP_PRIME is not a positive integer: ") + s);
    return v;
}

void check_prime(const PcGroup& G, u64 ell) {
    const u64 N = G.exponent();
    if (!is_prime(ell)) fail("bad_prime", std::to_string(ell) + " is not prime");
    if (ell >= kPrimeCeiling) fail("bad_prime", std::to_string(ell) + " exceeds 2^31");
    if ((ell - 1) % N != 0) fail("bad_prime", std::to_string(ell) + " is not 1 mod exp(G) = " + std::to_string(N));
    if (G.order() % ell == 0) fail("bad_prime", std::to_string(ell) + " divides |G|");
    if (ell <= 2 * G.order()) fail("bad_prime", std::to_string(ell) + " is too small for the lift (need > 2|G|)");
}

u64 next_prime_1_mod(u64 N, u64 above) {
    u64 k = above / N + 1;
    for (;; ++k) {
        u64 ell = k * N + 1;
        if (ell >= kPrimeCeiling) fail("no_prime", "no admissible prime below 2^31");
        if (is_prime(ell)) return ell;
    }
}

// generators of (Z/N)^x, greedily
std::vector<u64> unit_generators(u64 N) {
    std::vector<u64> gens;
    std::set<u64> H{1 % N};
    for (u64 r = 2; r < N; ++r) {
        if (gcd_u(r, N) != 1 || H.count(r)) continue;
        gens.push_back(r);
        std::vector<u64> frontier(H.begin(), H.end());
        while (!frontier.empty()) {
            std::vector<u64> next;
            for (u64 h : frontier)
                for (u64 g : gens) {
                    u64 v = h * g % N;
                    if (H.insert(v).second) next.push_back(v);
                }
            frontier = std::move(next);
        }
    }
    return gens;
}

} // namespace

// ---- prime selection -------------------------------------------------------

u64 prime_lower_bound(const PcGroup& G) {
    const u64 n = G.order();
    const int N = group_exponent(G);
    const long C = cyclo_level(N).C_Phi;
    u64 a = static_cast<u64>(std::ceil(2.0 * std::sqrt(static_cast<double>(n))));
    u64 b = 2 * n * static_cast<u64>(C) * static_cast<u64>(N);
    return std::max(a, b);
}

u64 select_prime(const PcGroup& G, u64 after) {
    const u64 N = G.exponent();
    u64 ell = next_prime_1_mod(N, std::max(prime_lower_bound(G), after));
    while (G.order() % ell == 0) ell = next_prime_1_mod(N, ell);
    return ell;
}

// ---- Berman steps -------------------------------------------------------------

BermanOutcome<ModField> berman_split(const PcGroup& G, const ModField& f, const ModElement& e0, int level) {
    const int i = level, lvl = level + 1;
    const int p = G.prime(i);
    const std::size_t m = G.level_order(i);
    ModElement e = e0.at_level(lvl);
    if (!e.is_central_at(lvl)) fail("internal", "berman_split on a node that is not central at the next level");
    std::vector<ModElement> powers; // b^1 .. b^{p-1}
    u64 lambda = 0;
    PcGroup::Elt xstar = 0;
    for (std::size_t xs = m; xs < m * p; ++xs) {
        xstar = static_cast<PcGroup::Elt>(xs);
        ModElement b = ModElement::class_sum(G, f, lvl, xstar) * e;
        powers.assign(1, b);
        ModElement bp = b;
        for (int t = 1; t < p; ++t) {
            bp = bp * b;
            if (t < p - 1) powers.push_back(bp);
        }
        auto lam = try_scalar_ratio(bp, e);
        if (!lam) fail("internal", "b^p is not proportional to the parent idempotent");
        lambda = *lam;
        if (lambda != 0) break;
    }
    if (lambda == 0) fail("degenerate_prime", "no x* with nonzero lambda in the coset");
    const u64 mu = canonical_root(f, lambda, static_cast<u64>(p), static_cast<u64>(G.level_order(lvl)));
    const u64 zp = f.zeta(f.N / p);
    const u64 inv_p = f.inv(f.from_int(p));

    BermanOutcome<ModField> out;
    out.record.kind = BermanRecord::Split;
    out.record.level = i;
    out.record.xstar = xstar;
    out.record.lambda = lambda;
    out.record.mu = mu;
    ModElement total(G, f, lvl);
    for (int k = 0; k < p; ++k) {
        const u64 s = f.mul(f.P.pow(zp, static_cast<u64>(k)), f.inv(mu));
        ModElement fk = e;
        u64 sj = 1;
        for (int j = 1; j < p; ++j) {
            sj = f.mul(sj, s);
            fk += powers[j - 1].scale(sj);
        }
        fk = fk.scale(inv_p);
        if (fk.is_zero()) fail("internal", "zero Berman child");
        if (!fk.is_idempotent()) fail("internal", "Berman child is not idempotent");
        if (!fk.is_central_at(lvl)) fail("internal", "Berman child is not central");
        total += fk;
        out.elements.push_back(std::move(fk));
    }
    for (int k = 0; k < p; ++k)
        for (int l = k + 1; l < p; ++l)
            if (!(out.elements[k] * out.elements[l]).is_zero()) fail("internal", "Berman children are not orthogonal");
    if (total != e) fail("internal", "Berman children do not sum to the parent");
    return out;
}

BermanOutcome<ModField> berman_fuse(const PcGroup& G, const ModField& f, const ModElement& e0, int level,
                                    const std::vector<ModElement>& level_nodes) {
    const int i = level, lvl = level + 1;
    const int p = G.prime(i);
    const PcGroup::Elt x = G.gen(i);
    BermanOutcome<ModField> out;
    out.record.kind = BermanRecord::Fused;
    out.record.level = i;
    ModElement c = e0.at_level(lvl);
    ModElement sum(G, f, lvl);
    std::set<int> seen;
    for (int t = 0; t < p; ++t) {
        int found = -1;
        for (std::size_t j = 0; j < level_nodes.size(); ++j)
            if (level_nodes[j] == c) {
                found = static_cast<int>(j);
                break;
            }
        if (found < 0) fail("internal", "conjugate idempotent not found among the level nodes");
        if (!seen.insert(found).second) fail("internal", "conjugation orbit has size different from p");
        out.record.parents.push_back(found);
        sum += c;
        c = c.conj_by(x);
    }
    if (c != e0.at_level(lvl)) fail("internal", "conjugation orbit does not close after p steps");
    if (!sum.is_idempotent() || !sum.is_central_at(lvl)) fail("internal", "fused idempotent is not central");
    out.elements.push_back(std::move(sum));
    return out;
}

// ---- Phase 1 -------------------------------------------------------------------

ModDiagram build_modular_diagram(const PcGroup& G, u64 ell) {
    check_prime(G, ell);
    const int N = group_exponent(G);
    auto f = std::make_shared<const ModField>(ell, N);
    ModDiagram D(G, f);
    D.prime_ = ell;
    const int n = G.rank();
    D.levels_.resize(n + 1);
    D.steps_.resize(n);
    D.stored_.resize(n + 1);

    PciNode<ModField> root;
    root.label = "1";
    root.trivial = true;
    root.chi = {1};
    D.levels_[0].push_back(root);
    D.stored_[0].push_back(ModElement::one(G, *f, 0));

    for (int i = 0; i < n; ++i) {
        const int lvl = i + 1;
        const auto& cur = D.stored_[i];
        auto& nodes_i = D.levels_[i];
        std::vector<char> used(cur.size(), 0);
        auto& next_nodes = D.levels_[lvl];
        auto& next_elems = D.stored_[lvl];
        const std::string& xname = G.presentation().gens[i];
        for (std::size_t j = 0; j < cur.size(); ++j) {
            if (used[j]) continue;
            ModElement e = cur[j].at_level(lvl);
            if (e.conj_by(G.gen(i)) == e) {
                auto out = berman_split(G, *f, cur[j], i);
                used[j] = 1;
                out.record.parents = {static_cast<int>(j)};
                for (std::size_t k = 0; k < out.elements.size(); ++k) {
                    PciNode<ModField> node;
                    node.level = lvl;
                    node.id = static_cast<int>(next_nodes.size());
                    node.degree = nodes_i[j].degree;
                    node.parents = {static_cast<int>(j)};
                    std::string base = nodes_i[j].label == "1" ? "" : nodes_i[j].label + " ";
                    node.label = base + "e[" + xname + "," + std::to_string(k) + "]";
                    nodes_i[j].children.push_back(node.id);
                    out.record.children.push_back(node.id);
                    next_nodes.push_back(std::move(node));
                    next_elems.push_back(std::move(out.elements[k]));
                }
                D.steps_[i].push_back(out.record);
            } else {
                auto out = berman_fuse(G, *f, cur[j], i, cur);
                PciNode<ModField> node;
                node.level = lvl;
                node.id = static_cast<int>(next_nodes.size());
                node.fused = true;
                node.degree = 0;
                std::string label;
                for (int par : out.record.parents) {
                    if (used[par]) fail("internal", "parent consumed twice");
                    used[par] = 1;
                    node.degree += nodes_i[par].degree;
                    node.parents.push_back(par);
                    nodes_i[par].children.push_back(node.id);
                    label += (label.empty() ? "" : " + ") + nodes_i[par].label;
                }
                node.label = "(" + label + ")";
                out.record.children = {node.id};
                next_nodes.push_back(std::move(node));
                next_elems.push_back(std::move(out.elements[0]));
                D.steps_[i].push_back(out.record);
            }
        }
        // level checks: count, partition of unity, pairwise orthogonality
        if (next_nodes.size() != G.classes(lvl).size())
            fail("internal", "level " + std::to_string(lvl) + " node count differs from the class count");
        ModElement total(G, *f, lvl);
        for (auto& e : next_elems) total += e;
        if (total != ModElement::one(G, *f, lvl)) fail("internal", "level idempotents do not sum to 1");
        // distinct parents give orthogonal children; siblings are checked in berman_split
        const double cost = static_cast<double>(next_elems.size()) * next_elems.size() *
                            static_cast<double>(G.level_order(lvl)) * G.level_order(lvl) / 2;
        if (cost <= 2e8) {
            for (std::size_t a = 0; a < next_elems.size(); ++a)
                for (std::size_t b = a + 1; b < next_elems.size(); ++b)
                    if (!(next_elems[a] * next_elems[b]).is_zero()) fail("internal", "level idempotents not orthogonal");
        }
        for (std::size_t k = 0; k < next_nodes.size(); ++k) {
            auto& node = next_nodes[k];
            node.chi = modular_character(G, *f, next_elems[k], lvl, node.degree);
            node.trivial = is_principal(node.chi);
        }
    }
    u64 sq = 0;
    for (auto& leaf : D.levels_[n]) sq += leaf.degree * leaf.degree;
    if (sq != G.order()) fail("internal", "sum of squared degrees differs from |G|");
    return D;
}

ModDiagram build_pci_diagram_modular(const PcGroup& G, const PciOptions& opt) {
    u64 pinned = opt.prime.value_or(0);
    if (!pinned && opt.use_env) pinned = parse_env_prime();
    if (pinned) return build_modular_diagram(G, pinned);
    u64 ell = select_prime(G);
    std::string last;
    for (int attempt = 0; attempt < std::max(1, opt.retries); ++attempt) {
        try {
            return build_modular_diagram(G, ell);
        } catch (const Error& e) {
            if (e.code() != "no_pth_root" && e.code() != "degenerate_prime") throw;
            last = e.what();
        }
        ell = select_prime(G, ell);
    }
    fail("prime_escalation_exhausted", "no prime in the retry budget worked: " + last);
}

// ---- Phase 2 -------------------------------------------------------------------

ExactDiagram lift_pci_to_cyclotomic(const ModDiagram& M) {
    const PcGroup& G = M.group();
    const ModField& f = M.field();
    const int N = f.N;
    auto cf = std::make_shared<const CycloField>(N);
    ExactDiagram X(G, cf);
    X.prime_ = M.prime();
    X.levels_.resize(M.depth() + 1);
    X.steps_ = M.steps_;
    const u64 Nu = static_cast<u64>(N);

    const CycloLevel& L = cyclo_level(N);
    u64 dmax_all = 1;
    // multiplicity tables: mult[level][node][class] = eigenvalue multiplicities of g (length ord g),
    // kept for the source classes only
    std::vector<std::vector<std::vector<std::vector<long>>>> mult(M.depth() + 1);
    for (int i = 0; i <= M.depth(); ++i) {
        const auto& cls = G.classes(i);
        const u64 order_i = G.level_order(i);
        // each class is the class of a power g^k of a source class rep g
        std::vector<std::pair<int, u64>> src(cls.size(), {-1, 0});
        std::vector<int> by_order(cls.size());
        for (std::size_t c = 0; c < cls.size(); ++c) by_order[c] = static_cast<int>(c);
        std::stable_sort(by_order.begin(), by_order.end(), [&](int a, int b) {
            return G.elt_order(cls[a].rep) > G.elt_order(cls[b].rep);
        });
        for (int sc : by_order) {
            if (src[sc].first >= 0) continue;
            src[sc] = {sc, 1};
            const auto g = cls[sc].rep;
            PcGroup::Elt gk = 0;
            for (u64 k = 0; k < G.elt_order(g); ++k, gk = G.mul(gk, g)) {
                int cc = G.class_of(i, gk);
                if (src[cc].first < 0) src[cc] = {sc, k};
            }
        }
        std::vector<std::vector<long>> unity(cls.size(), std::vector<long>(L.phi, 0));
        for (const auto& mn : M.level(i)) {
            PciNode<CycloField> node;
            node.level = mn.level;
            node.id = mn.id;
            node.degree = mn.degree;
            node.trivial = mn.trivial;
            node.fused = mn.fused;
            node.parents = mn.parents;
            node.children = mn.children;
            node.label = mn.label;
            const u64 d = mn.degree;
            dmax_all = std::max(dmax_all, d);
            std::vector<std::vector<long>> mtab(cls.size());
            // transform on the source classes
            for (std::size_t c = 0; c < cls.size(); ++c) {
                if (src[c].first != static_cast<int>(c)) continue;
                const auto g = cls[c].rep;
                const u64 o = G.elt_order(g);
                const u64 wo_inv = f.inv(f.zeta(static_cast<long>(Nu / o)));
                const u64 inv_o = f.inv(f.from_int(static_cast<long>(o)));
                std::vector<u64> vals(o);
                PcGroup::Elt gk = 0;
                for (u64 k = 0; k < o; ++k) {
                    vals[k] = mn.chi[G.class_of(i, gk)];
                    gk = G.mul(gk, g);
                }
                std::vector<long> mj(o);
                for (u64 j = 0; j < o; ++j) {
                    // m_j = (1/o) sum_k chi(g^k) w_o^{-jk}
                    u64 s = 0, w = 1, step = f.P.pow(wo_inv, j);
                    for (u64 k = 0; k < o; ++k) {
                        s = f.add(s, f.mul(vals[k], w));
                        w = f.mul(w, step);
                    }
                    u64 r = f.mul(s, inv_o);
                    if (r > d) fail("lift_failed", "eigenvalue multiplicity residue out of range");
                    mj[j] = static_cast<long>(r);
                }
                mtab[c] = std::move(mj);
            }
            // g^k has the eigenvalues of g raised to the k-th power
            for (std::size_t c = 0; c < cls.size(); ++c) {
                auto [sc, k] = src[c];
                if (sc == static_cast<int>(c)) continue;
                const u64 o = G.elt_order(cls[sc].rep), oc = G.elt_order(cls[c].rep);
                const u64 q = o / oc;
                std::vector<long> mj(oc, 0);
                for (u64 j = 0; j < o; ++j) mj[(j * k % o) / q] += mtab[sc][j];
                mtab[c] = std::move(mj);
            }
            for (std::size_t c = 0; c < cls.size(); ++c) {
                const u64 o = mtab[c].size();
                long total = 0;
                u64 residue = 0;
                std::vector<long> coords(L.phi, 0);
                for (u64 j = 0; j < o; ++j) {
                    const long m = mtab[c][j];
                    if (!m) continue;
                    total += m;
                    const u64 e = j * (Nu / o);
                    residue = f.add(residue, f.mul(f.from_int(m), f.zeta(static_cast<long>(e))));
                    for (int t = 0; t < L.phi; ++t) coords[t] += m * L.red[e][t];
                }
                if (static_cast<u64>(total) != d) fail("lift_failed", "multiplicities do not sum to the degree");
                if (residue != mn.chi[c]) fail("lift_failed", "lifted character does not reduce to the modular one");
                std::vector<Integer> num(L.phi);
                for (int t = 0; t < L.phi; ++t) {
                    if (coords[t]) num[t] = coords[t];
                    unity[c][t] += static_cast<long>(d) * coords[t];
                }
                node.chi.push_back(Cyclotomic::from_numerators(N, num, Integer(1)));
            }
            for (std::size_t c = 0; c < cls.size(); ++c)
                if (src[c].first != static_cast<int>(c)) std::vector<long>().swap(mtab[c]);
            mult[i].push_back(std::move(mtab));
            X.levels_[i].push_back(std::move(node));
        }
        // exact partition of unity: sum_nodes d chi(c) = |G_i| [c = 1]
        for (std::size_t c = 0; c < cls.size(); ++c)
            for (int t = 0; t < L.phi; ++t)
                if (unity[c][t] != (c == 0 && t == 0 ? static_cast<long>(order_i) : 0L))
                    fail("lift_failed", "lifted idempotents do not sum to 1 at level " + std::to_string(i));
        if (X.levels_[i].size() != cls.size()) fail("lift_failed", "node count differs from the class count");
        // Galois stability of the character set, on generators of (Z/N)^x
        std::map<std::vector<long>, int> index;
        auto key_of = [&](const std::vector<std::vector<long>>& t) {
            std::vector<long> k;
            for (auto& v : t) {
                k.insert(k.end(), v.begin(), v.end());
                k.push_back(-1);
            }
            return k;
        };
        for (std::size_t a = 0; a < mult[i].size(); ++a) index[key_of(mult[i][a])] = static_cast<int>(a);
        if (index.size() != mult[i].size()) fail("lift_failed", "two nodes lift to the same character");
        for (u64 r : unit_generators(Nu)) {
            for (const auto& t : mult[i]) {
                std::vector<std::vector<long>> img(t.size());
                for (std::size_t c = 0; c < t.size(); ++c) {
                    const u64 o = t[c].size();
                    img[c].assign(o, 0);
                    // sigma_r moves the eigenvalue w^j to w^{jr}
                    for (u64 j = 0; j < o; ++j) img[c][j * r % o] = t[c][j];
                }
                if (!index.count(key_of(img))) fail("lift_failed", "character set is not Galois stable");
            }
        }
    }

    // Idempotency certificate: with a Galois-stable set of characters whose idempotents
    // are idempotent modulo a prime ell = 1 mod N above |G_i| d (d^2 + 1), the exact
    // idempotency defect lies in ell Z[zeta] and is bounded by that quantity under
    // every embedding, hence vanishes.
    const u64 bound = G.order() * dmax_all * (dmax_all * dmax_all + 1);
    if (M.prime() > bound) {
        X.verify_prime_ = M.prime(); // Phase 1 already checked idempotency modulo this prime
    } else if (bound < kPrimeCeiling / 2) {
        u64 ellv = next_prime_1_mod(Nu, bound);
        ModField fv(ellv, N);
        for (int i = 0; i <= X.depth(); ++i) {
            for (const auto& node : X.level(i)) {
                std::vector<u64> chiv;
                for (const auto& c : node.chi) chiv.push_back(fv.reduce(c));
                const u64 scale = fv.mul(fv.from_int(static_cast<long>(node.degree)),
                                         fv.inv(fv.from_int(static_cast<long>(G.level_order(i)))));
                std::vector<u64> coef(G.level_order(i));
                for (PcGroup::Elt g = 0; g < coef.size(); ++g)
                    coef[g] = fv.mul(scale, chiv[G.class_of(i, G.inv(g))]);
                ModElement e = ModElement::from_dense(G, fv, i, coef);
                if (!e.is_idempotent()) fail("lift_failed", "lifted idempotent fails the verification prime");
            }
        }
        X.verify_prime_ = ellv;
    } else {
        for (int i = 0; i <= X.depth(); ++i)
            for (int k = 0; k < static_cast<int>(X.level(i).size()); ++k)
                if (!X.idempotent(i, k).is_idempotent()) fail("lift_failed", "lifted idempotent is not idempotent");
        X.verify_prime_ = 0;
    }
    return X;
}

ExactDiagram build_pci_diagram(const PcGroup& G, const PciOptions& opt) {
    u64 pinned = opt.prime.value_or(0);
    if (!pinned && opt.use_env) pinned = parse_env_prime();
    if (pinned) return lift_pci_to_cyclotomic(build_modular_diagram(G, pinned));
    u64 ell = select_prime(G);
    std::string last;
    for (int attempt = 0; attempt < std::max(1, opt.retries); ++attempt) {
        try {
            return lift_pci_to_cyclotomic(build_modular_diagram(G, ell));
        } catch (const Error& e) {
            if (e.code() != "no_pth_root" && e.code() != "degenerate_prime" && e.code() != "lift_failed") throw;
            last = e.what();
        }
        ell = select_prime(G, ell);
    }
    fail("prime_escalation_exhausted", "no prime in the retry budget worked: " + last);
}

// ---- diagram accessors -------------------------------------------------------------

template <class F>
AlgebraElement<F> PciDiagram<F>::idempotent(int level, int id) const {
    if (!stored_.empty()) return stored_.at(level).at(id);
    const auto& node = levels_.at(level).at(id);
    const PcGroup& G = *G_;
    const F& f = *f_;
    const std::size_t m = G.level_order(level);
    auto scale = f.mul(f.from_int(static_cast<long>(node.degree)), f.inv(f.from_int(static_cast<long>(m))));
    std::vector<typename F::V> per_class;
    for (const auto& c : node.chi) per_class.push_back(f.mul(scale, c));
    std::vector<typename F::V> coef(m, f.zero());
    for (PcGroup::Elt g = 0; g < m; ++g) coef[g] = per_class[G.class_of(level, G.inv(g))];
    return AlgebraElement<F>::from_dense(G, f, level, coef);
}

template <class F>
std::vector<AlgebraElement<F>> PciDiagram<F>::level_idempotents(int level) const {
    std::vector<AlgebraElement<F>> out;
    for (int k = 0; k < static_cast<int>(levels_.at(level).size()); ++k) out.push_back(idempotent(level, k));
    return out;
}

template <class F>
nlohmann::json PciDiagram<F>::to_json(bool with_idempotents) const {
    nlohmann::json levels = nlohmann::json::array();
    for (int i = 0; i <= depth(); ++i) {
        nlohmann::json lv = nlohmann::json::array();
        for (const auto& node : levels_[i]) {
            nlohmann::json j{{"id", node.id}, {"degree", node.degree}, {"parents", node.parents}, {"label", node.label}};
            if (with_idempotents) j["idempotent"] = idempotent(i, node.id).to_json();
            lv.push_back(j);
        }
        levels.push_back(lv);
    }
    return {{"group", G_->name()}, {"backend", f_->backend()}, {"prime", prime_}, {"levels", levels}};
}

template <class F>
std::string PciDiagram<F>::to_dot() const {
    std::ostringstream os;
    os << "digraph PCI {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n";
    for (int i = 0; i <= depth(); ++i) {
        os << "  { rank=same;";
        for (const auto& node : levels_[i]) os << " n" << i << "_" << node.id << ";";
        os << " }\n";
        for (const auto& node : levels_[i])
            os << "  n" << i << "_" << node.id << " [label=\"" << node.label << "\\nd=" << node.degree << "\"];\n";
    }
    for (int i = 1; i <= depth(); ++i)
        for (const auto& node : levels_[i])
            for (int par : node.parents) os << "  n" << i - 1 << "_" << par << " -> n" << i << "_" << node.id << ";\n";
    os << "}\n";
    return os.str();
}

template <class F>
std::string PciDiagram<F>::to_text() const {
    std::ostringstream os;
    os << "PCI diagram of " << G_->name() << " over " << f_->backend() << " (prime " << prime_ << ")\n";
    for (int i = 0; i <= depth(); ++i) {
        os << "level " << i << " (|G_" << i << "| = " << G_->level_order(i) << "): " << levels_[i].size()
           << " nodes\n";
        for (const auto& node : levels_[i]) {
            os << "  [" << node.id << "] d=" << node.degree << (node.fused ? " fused" : "") << " parents=";
            for (std::size_t k = 0; k < node.parents.size(); ++k) os << (k ? "," : "") << node.parents[k];
            os << " " << node.label << "\n";
        }
    }
    return os.str();
}

// ---- GZ generators and paths ------------------------------------------------------

template <class F>
std::vector<AlgebraElement<F>> gz_generators(const PciDiagram<F>& D) {
    const PcGroup& G = D.group();
    std::vector<AlgebraElement<F>> out;
    for (int i = 1; i <= G.rank(); ++i)
        out.push_back(AlgebraElement<F>::class_sum(G, D.field(), i, G.gen(i - 1)).at_level(G.rank()));
    return out;
}

template <class F>
std::vector<std::vector<int>> leaf_paths(const PciDiagram<F>& D, int leaf) {
    const int n = D.depth();
    // paths from the root to (level, id), in lexicographic order
    std::vector<std::map<int, std::vector<std::vector<int>>>> memo(n + 1);
    std::function<const std::vector<std::vector<int>>&(int, int)> rec = [&](int lvl, int id)
        -> const std::vector<std::vector<int>>& {
        auto it = memo[lvl].find(id);
        if (it != memo[lvl].end()) return it->second;
        std::vector<std::vector<int>> out;
        if (lvl == 0) {
            out.push_back({id});
        } else {
            std::vector<int> parents = D.level(lvl).at(id).parents;
            std::sort(parents.begin(), parents.end());
            for (int par : parents)
                for (auto p : rec(lvl - 1, par)) {
                    p.push_back(id);
                    out.push_back(std::move(p));
                }
        }
        return memo[lvl][id] = std::move(out);
    };
    auto paths = rec(n, leaf);
    std::sort(paths.begin(), paths.end());
    return paths;
}

template <class F>
std::vector<std::pair<int, int>> path_factors(const PciDiagram<F>& D, const std::vector<int>& path) {
    const int n = D.depth();
    std::vector<std::pair<int, int>> keep;
    for (int i = 0; i <= n; ++i) {
        // e_a e_b = e_b for a split child b of a, and e_a e_b = e_a when b is fused from a
        bool absorbed_up = i < n && !D.level(i + 1).at(path[i + 1]).fused;
        bool absorbed_down = i > 0 && D.level(i).at(path[i]).fused;
        if (!absorbed_up && !absorbed_down) keep.push_back({i, path[i]});
    }
    return keep;
}

template <class F>
std::vector<AlgebraElement<F>> path_idempotents(const PciDiagram<F>& D, int leaf, bool verify) {
    const PcGroup& G = D.group();
    const F& f = D.field();
    const int n = D.depth();
    std::vector<AlgebraElement<F>> out;
    std::map<std::pair<int, int>, AlgebraElement<F>> cache;
    auto node_e = [&](int lvl, int id) -> const AlgebraElement<F>& {
        auto it = cache.find({lvl, id});
        if (it == cache.end()) it = cache.emplace(std::make_pair(lvl, id), D.idempotent(lvl, id).at_level(n)).first;
        return it->second;
    };
    const auto paths = leaf_paths(D, leaf);
    if (paths.size() == 1 && path_factors(D, paths[0]).size() == 1) return {node_e(n, leaf)};
    for (const auto& path : paths) {
        auto factors = path_factors(D, path);
        AlgebraElement<F> p = node_e(factors[0].first, factors[0].second);
        for (std::size_t k = 1; k < factors.size(); ++k) p = p * node_e(factors[k].first, factors[k].second);
        if (p.is_zero()) fail("internal", "zero path idempotent");
        out.push_back(std::move(p));
    }
    if (verify) {
        AlgebraElement<F> total(G, f, n);
        for (std::size_t a = 0; a < out.size(); ++a) {
            if (!out[a].is_idempotent()) fail("internal", "path idempotent is not idempotent");
            for (std::size_t b = a + 1; b < out.size(); ++b)
                if (!(out[a] * out[b]).is_zero()) fail("internal", "path idempotents are not orthogonal");
            total += out[a];
        }
        if (total != node_e(n, leaf)) fail("internal", "path idempotents do not sum to the leaf");
    }
    return out;
}

template class PciDiagram<ModField>;
template class PciDiagram<CycloField>;
template std::vector<ModElement> gz_generators(const ModDiagram&);
template std::vector<CycloElement> gz_generators(const ExactDiagram&);
template std::vector<std::vector<int>> leaf_paths(const ModDiagram&, int);
template std::vector<std::vector<int>> leaf_paths(const ExactDiagram&, int);
template std::vector<std::pair<int, int>> path_factors(const ModDiagram&, const std::vector<int>&);
template std::vector<std::pair<int, int>> path_factors(const ExactDiagram&, const std::vector<int>&);
template std::vector<ModElement> path_idempotents(const ModDiagram&, int, bool);
template std::vector<CycloElement> path_idempotents(const ExactDiagram&, int, bool);

} // namespace solvarep
