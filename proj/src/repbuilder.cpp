#include "solvarep/repbuilder.hpp"

namespace solvarep {

namespace {

using Elt = PcGroup::Elt;

// reduction used by the witness screen
ModElement screen_image(const CycloElement& a, const ModField& m) {
    const auto& G = a.group();
    std::vector<u64> dense(G.level_order(a.level()), 0);
    for (const auto& [g, c] : a.terms()) dense[g] = m.reduce(c);
    return ModElement::from_dense(G, m, a.level(), dense);
}

const ModElement& screen_image(const ModElement& a, const ModField&) { return a; }

template <class F>
ModField screen_field(const PciDiagram<F>& D) {
    if constexpr (std::is_same_v<F, ModField>) return D.field();
    else return ModField(D.prime(), D.field().N);
}

template <class F>
std::string gen_name(const PcGroup& G, int k) {
    return G.presentation().gens[k];
}

} // namespace

template <class F>
ExactMatrix<F> MatrixRep<F>::rho(Elt g) const {
    auto a = G->exps(g);
    ExactMatrix<F> M = ExactMatrix<F>::identity(*f, degree);
    for (int k = 0; k < G->rank(); ++k)
        for (int t = 0; t < a[k]; ++t) M = M * gens[k];
    return M;
}

template <class F>
ExactMatrix<F> MatrixRep<F>::rho_sum(const std::vector<Elt>& elts) const {
    ExactMatrix<F> S(*f, degree, degree);
    for (Elt g : elts) S = S + rho(g);
    return S;
}

template <class F>
nlohmann::json MatrixRep<F>::to_json(bool with_character) const {
    nlohmann::json gj = nlohmann::json::array();
    for (int k = 0; k < G->rank(); ++k) gj.push_back({{"name", gen_name<F>(*G, k)}, {"matrix", gens[k].to_json()}});
    nlohmann::json j{{"leaf", leaf}, {"degree", degree}, {"generators", gj}};
    if (with_character) {
        nlohmann::json cj = nlohmann::json::array();
        auto chi = character_of(*this);
        const auto& cls = G->classes(G->rank());
        for (std::size_t c = 0; c < cls.size(); ++c)
            cj.push_back({{"class_rep", G->elt_name(cls[c].rep)}, {"value", f->to_json(chi[c])}});
        j["character"] = cj;
    }
    return j;
}

template <class F>
MatrixRep<F> make_rep(const PcGroup& G, std::shared_ptr<const F> f, std::vector<ExactMatrix<F>> gens) {
    if (static_cast<int>(gens.size()) != G.rank()) fail("domain", "one matrix per generator is required");
    MatrixRep<F> r;
    r.G = &G;
    r.f = std::move(f);
    r.degree = gens.empty() ? 1 : gens[0].rows();
    for (auto& M : gens)
        if (M.rows() != r.degree || M.cols() != r.degree) fail("domain", "generator matrices must be square of one size");
    r.gens = std::move(gens);
    return r;
}

nlohmann::json RepReport::to_json() const {
    return {{"degree", degree}, {"relations_ok", relations_ok}, {"failures", failures},
            {"diagonal", diagonal}, {"diagonal_ok", diagonal_ok}};
}

template <class F>
GtBasis<F> gt_basis(const PciDiagram<F>& D, int leaf, const RepOptions& opt) {
    const PcGroup& G = D.group();
    const bool full = G.order() <= opt.full_check_limit;
    GtBasis<F> B;
    B.leaf = leaf;
    B.f = path_idempotents(D, leaf, full);
    const std::size_t d = B.f.size();
    B.witnesses.assign(d, 0);
    B.v.push_back(B.f[0]);
    if (d == 1) return B;

    // f_j g f_1 != 0 iff the coefficient of g^-1 in a spanning element u of f_1 A f_j
    // is nonzero; u is found modulo the diagram prime, and the choice is certified
    // later from the exact matrices.
    const ModField m = screen_field(D);
    const ModElement f1 = screen_image(B.f[0], m);
    for (std::size_t j = 1; j < d; ++j) {
        const ModElement fj = screen_image(B.f[j], m);
        std::optional<ModElement> u;
        for (Elt k = 0; k < G.order() && !u; ++k) {
            ModElement t = f1 * fj.left_mul(k);
            if (!t.is_zero()) u = std::move(t);
        }
        if (!u) fail("internal", "no element links path idempotents 1 and " + std::to_string(j + 1));
        Elt w = 0;
        bool found = false;
        for (Elt g = 0; g < G.order() && !found; ++g)
            if (u->coeff(G.inv(g)) != 0) {
                w = g;
                found = true;
            }
        if (!found) fail("internal", "no witness for path " + std::to_string(j + 1));
        AlgebraElement<F> vj = B.f[j] * B.f[0].left_mul(w);
        if (vj.is_zero()) fail("internal", "witness screen produced a zero vector");
        B.witnesses[j] = w;
        B.v.push_back(std::move(vj));
    }
    if (full) {
        for (std::size_t j = 0; j < d; ++j) {
            if (B.f[j] * B.v[j] != B.v[j] || B.v[j] * B.f[0] != B.v[j])
                fail("internal", "basis vector is not in f_j A f_1");
        }
    }
    return B;
}

template <class F>
MatrixRep<F> build_matrices(const PciDiagram<F>& D, GtBasis<F> basis, const RepOptions&) {
    const PcGroup& G = D.group();
    const F& f = D.field();
    const std::size_t d = basis.v.size();
    MatrixRep<F> rep;
    rep.G = &G;
    rep.f = D.field_ptr();
    rep.leaf = basis.leaf;
    rep.degree = d;
    if (d == 1) {
        // x e = chi(x) e for a linear character
        const auto& node = D.leaves().at(basis.leaf);
        for (int k = 0; k < G.rank(); ++k) {
            ExactMatrix<F> M(f, 1, 1);
            M(0, 0) = node.chi[G.class_of(G.rank(), G.gen(k))];
            rep.gens.push_back(std::move(M));
        }
    } else {
        SpanSolver<F> solver(basis.v); // throws when the vectors are dependent
        for (int k = 0; k < G.rank(); ++k) {
            ExactMatrix<F> M(f, d, d);
            for (std::size_t j = 0; j < d; ++j) {
                auto c = solver.coords(basis.v[j].left_mul(G.gen(k)));
                if (!c) fail("internal", "generator " + G.presentation().gens[k] + " moves a basis vector out of the ideal");
                for (std::size_t i = 0; i < d; ++i) M(i, j) = (*c)[i];
            }
            rep.gens.push_back(std::move(M));
        }
    }
    if (d > 1) {
        // certify the witnesses: g_j must be the first g with rho(g)_{j1} != 0, and
        // rho(g_j)_{j1} = 1 by construction
        std::vector<std::vector<ExactMatrix<F>>> pw(G.rank());
        for (int k = 0; k < G.rank(); ++k) {
            pw[k].push_back(ExactMatrix<F>::identity(f, d));
            for (int t = 1; t < G.prime(k); ++t) pw[k].push_back(pw[k].back() * rep.gens[k]);
        }
        std::vector<Elt> first(d, static_cast<Elt>(G.order()));
        std::vector<typename F::V> scale(d, f.one());
        std::size_t open = d - 1;
        ExactMatrix<F> e1(f, d, 1);
        e1(0, 0) = f.one();
        for (Elt g = 0; g < G.order() && open; ++g) {
            auto a = G.exps(g);
            ExactMatrix<F> col = e1;
            for (int k = G.rank(); k-- > 0;)
                if (a[k]) col = pw[k][a[k]] * col;
            for (std::size_t j = 1; j < d; ++j)
                if (first[j] == G.order() && !f.is_zero(col(j, 0))) {
                    first[j] = g;
                    scale[j] = col(j, 0);
                    --open;
                }
        }
        bool changed = false;
        for (std::size_t j = 1; j < d; ++j) {
            if (first[j] > basis.witnesses[j]) fail("internal", "witness certificate failed");
            if (first[j] < basis.witnesses[j]) {
                changed = true;
                basis.witnesses[j] = first[j];
                basis.v[j] = basis.v[j].scale(scale[j]);
            } else if (!f.eq(scale[j], f.one())) {
                fail("internal", "witness normalization failed");
            }
        }
        if (changed) {
            // v'_j = s_j v_j, so M' = S^-1 M S
            for (auto& M : rep.gens)
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j)
                        M(i, j) = f.mul(M(i, j), f.mul(scale[j], f.inv(scale[i])));
        }
    }
    rep.basis = std::move(basis);
    return rep;
}

template <class F>
RepReport verify_rep(const MatrixRep<F>& rep, bool check_diagonal) {
    const PcGroup& G = *rep.G;
    const auto& pres = G.presentation();
    RepReport R;
    R.degree = rep.degree;
    for (int i = 0; i < G.rank(); ++i) {
        if (rep.gens[i].pow(G.prime(i)) != rep.rho(G.power_relation(i + 1))) {
            R.relations_ok = false;
            R.failures.push_back(pres.gens[i] + "^" + std::to_string(G.prime(i)));
        }
        ExactMatrix<F> Minv;
        bool inv_ok = true;
        try {
            Minv = rep.gens[i].inverse();
        } catch (const Error&) {
            inv_ok = false;
        }
        if (!inv_ok) {
            R.relations_ok = false;
            R.failures.push_back(pres.gens[i] + " invertible");
            continue;
        }
        for (int j = 0; j < i; ++j) {
            if (Minv * rep.gens[j] * rep.gens[i] != rep.rho(G.conj(G.gen(j), G.gen(i)))) {
                R.relations_ok = false;
                R.failures.push_back(pres.gens[i] + "^-1 " + pres.gens[j] + " " + pres.gens[i]);
            }
        }
    }
    if (check_diagonal) {
        for (int i = 1; i <= G.rank(); ++i) {
            bool diag = rep.rho_sum(G.class_sum_support(i, G.gen(i - 1))).is_diagonal();
            R.diagonal.push_back(diag);
            R.diagonal_ok = R.diagonal_ok && diag;
        }
    }
    return R;
}

template <class F>
std::vector<typename F::V> character_of(const MatrixRep<F>& rep) {
    std::vector<typename F::V> chi;
    for (const auto& c : rep.G->classes(rep.G->rank())) chi.push_back(rep.rho(c.rep).trace());
    return chi;
}

template <class F>
std::optional<ExactMatrix<F>> find_intertwiner(const MatrixRep<F>& A, const MatrixRep<F>& B) {
    const F& f = A.field();
    const std::size_t d = A.degree;
    if (B.degree != d) return std::nullopt;
    const int n = A.G->rank();
    // unknown T(r, c) at index r*d + c; equations (T A_k - B_k T)(r, c) = 0
    ExactMatrix<F> S(f, static_cast<std::size_t>(n) * d * d, d * d);
    for (int k = 0; k < n; ++k)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                std::size_t row = (static_cast<std::size_t>(k) * d + r) * d + c;
                for (std::size_t s = 0; s < d; ++s) {
                    // sum_s T(r,s) A(s,c) - B(r,s) T(s,c)
                    S(row, r * d + s) = f.add(S(row, r * d + s), A.gens[k](s, c));
                    S(row, s * d + c) = f.sub(S(row, s * d + c), B.gens[k](r, s));
                }
            }
    auto ker = S.kernel();
    std::vector<typename F::V> acc(d * d, f.zero());
    for (std::size_t t = 0; t < ker.size(); ++t) {
        for (int attempt = 0; attempt < 2; ++attempt) {
            std::vector<typename F::V> cand = attempt == 0 ? ker[t] : acc;
            if (attempt == 1)
                for (std::size_t q = 0; q < d * d; ++q) cand[q] = f.add(cand[q], ker[t][q]);
            ExactMatrix<F> T(f, d, d);
            for (std::size_t q = 0; q < d * d; ++q) T(q / d, q % d) = cand[q];
            if (T.rank() == d) return T;
        }
        for (std::size_t q = 0; q < d * d; ++q) acc[q] = f.add(acc[q], ker[t][q]);
    }
    return std::nullopt;
}

template <class F>
bool are_equivalent(const MatrixRep<F>& A, const MatrixRep<F>& B, ExactMatrix<F>* intertwiner) {
    if (A.G != B.G && A.G->order() != B.G->order()) return false;
    if (A.degree != B.degree) return false;
    auto ca = character_of(A), cb = character_of(B);
    for (std::size_t c = 0; c < ca.size(); ++c)
        if (!A.field().eq(ca[c], cb[c])) return false;
    if (intertwiner && A.degree <= 8) {
        auto T = find_intertwiner(A, B);
        if (!T) return false;
        *intertwiner = std::move(*T);
    }
    return true;
}

template <class F>
std::vector<MatrixRep<F>> all_irreps(const PciDiagram<F>& D, const RepOptions& opt) {
    std::vector<MatrixRep<F>> out;
    for (const auto& leaf : D.leaves()) out.push_back(build_matrices(D, gt_basis(D, leaf.id, opt), opt));
    return out;
}

std::vector<ExactRep> all_irreps(const PcGroup& G, const PciOptions& popt, const RepOptions& opt) {
    auto D = build_pci_diagram(G, popt);
    return all_irreps(D, opt);
}

#define SOLVAREP_INSTANTIATE(F)                                                                                \
    template struct MatrixRep<F>;                                                                              \
    template MatrixRep<F> make_rep(const PcGroup&, std::shared_ptr<const F>, std::vector<ExactMatrix<F>>);     \
    template GtBasis<F> gt_basis(const PciDiagram<F>&, int, const RepOptions&);                               \
    template MatrixRep<F> build_matrices(const PciDiagram<F>&, GtBasis<F>, const RepOptions&);                \
    template RepReport verify_rep(const MatrixRep<F>&, bool);                                                  \
    template std::vector<F::V> character_of(const MatrixRep<F>&);                                              \
    template bool are_equivalent(const MatrixRep<F>&, const MatrixRep<F>&, ExactMatrix<F>*);                   \
    template std::optional<ExactMatrix<F>> find_intertwiner(const MatrixRep<F>&, const MatrixRep<F>&);         \
    template std::vector<MatrixRep<F>> all_irreps(const PciDiagram<F>&, const RepOptions&);

SOLVAREP_INSTANTIATE(CycloField)
SOLVAREP_INSTANTIATE(ModField)

} // namespace solvarep
