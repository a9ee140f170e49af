#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solvarep/pci.hpp"

namespace solvarep {

template <class F>
struct GtBasis {
    int leaf = -1;
    std::vector<AlgebraElement<F>> f;    // path idempotents, f[0] distinguished
    std::vector<PcGroup::Elt> witnesses; // witnesses[j] for j >= 1; witnesses[0] = identity
    std::vector<AlgebraElement<F>> v;    // v[0] = f[0], v[j] = f[j] g_j f[0]
};

template <class F>
struct MatrixRep {
    using V = typename F::V;
    const PcGroup* G = nullptr;
    std::shared_ptr<const F> f;
    int leaf = -1;
    std::size_t degree = 0;
    std::vector<ExactMatrix<F>> gens; // one per long generator
    std::optional<GtBasis<F>> basis;

    const F& field() const { return *f; }
    const PcGroup& group() const { return *G; }
    // rho(g) for g = x_1^{a_1} ... x_n^{a_n}
    ExactMatrix<F> rho(PcGroup::Elt g) const;
    // sum of rho over the support of a class sum
    ExactMatrix<F> rho_sum(const std::vector<PcGroup::Elt>& elts) const;
    nlohmann::json to_json(bool with_character = true) const;
};

using ExactRep = MatrixRep<CycloField>;
using ModRep = MatrixRep<ModField>;

// Wrap hand-written matrices (one per generator) as a representation.
template <class F>
MatrixRep<F> make_rep(const PcGroup& G, std::shared_ptr<const F> f, std::vector<ExactMatrix<F>> gens);

struct RepReport {
    std::size_t degree = 0;
    std::vector<std::string> failures;   // relation names that fail
    bool relations_ok = true;
    std::vector<bool> diagonal;          // per level 1..n: rho(C_{G_i}(x_i)) diagonal
    bool diagonal_ok = true;
    bool ok() const { return relations_ok && diagonal_ok; }
    nlohmann::json to_json() const;
};

struct RepOptions {
    // exact algebra-level checks (v_j = f_j v_j = v_j f_1, path idempotent identities)
    // are run when |G| is at most this
    std::size_t full_check_limit = 256;
};

template <class F>
GtBasis<F> gt_basis(const PciDiagram<F>& D, int leaf, const RepOptions& opt = {});
template <class F>
MatrixRep<F> build_matrices(const PciDiagram<F>& D, GtBasis<F> basis, const RepOptions& opt = {});
template <class F>
RepReport verify_rep(const MatrixRep<F>& rep, bool check_diagonal = true);
// trace of rho on one representative per top-level class
template <class F>
std::vector<typename F::V> character_of(const MatrixRep<F>& rep);
// characters agree; when degree <= 8 and intertwiner is given, T with T A(x) = B(x) T
template <class F>
bool are_equivalent(const MatrixRep<F>& A, const MatrixRep<F>& B, ExactMatrix<F>* intertwiner = nullptr);
template <class F>
std::optional<ExactMatrix<F>> find_intertwiner(const MatrixRep<F>& A, const MatrixRep<F>& B);

template <class F>
std::vector<MatrixRep<F>> all_irreps(const PciDiagram<F>& D, const RepOptions& opt = {});
std::vector<ExactRep> all_irreps(const PcGroup& G, const PciOptions& popt = {}, const RepOptions& opt = {});

} // namespace solvarep
