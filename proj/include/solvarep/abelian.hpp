#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solvarep/fclass.hpp"
#include "solvarep/finite_field.hpp"

namespace solvarep {

// cached, never destroyed
const CycloField& cyclo_field(int N);

// ---- polynomials -----------------------------------------------------------

// A polynomial over Q, R (coefficients exact in the real subfield of Q(zeta_level)),
// C (coefficients in Q(zeta_level)) or F_q (coefficients as GFq indices).
struct Poly {
    FieldDescriptor field;
    int level = 1;
    std::vector<Cyclotomic> exact; // ascending, for Q / R / C
    std::vector<u64> finite;       // ascending, for F_q
    u64 d = 1;                     // the factor divides Phi_d

    std::size_t degree() const;
    bool is_finite() const { return field.kind == FieldDescriptor::Kind::Finite; }
    std::string to_text() const;
    nlohmann::json to_json() const;
    bool operator==(const Poly& o) const;
};

// Product of polynomials over a common field (and common level for the exact case).
Poly poly_mul(const Poly& a, const Poly& b);
// X^n - 1 over F at level n
Poly xn_minus_1(u64 n, const FieldDescriptor& F);

std::vector<Poly> factor_cyclotomic(u64 n, const FieldDescriptor& F);
// grouped by d | n ascending; exact coefficients at level n (level 1 over Q)
std::vector<Poly> factor_xn_minus_1(u64 n, const FieldDescriptor& F);

// ---- matrices over Q(zeta) or F_q -----------------------------------------

struct FieldMatrix {
    std::optional<ExactMatrix<CycloField>> exact;
    std::optional<ExactMatrix<GFqField>> finite;

    std::size_t rows() const;
    bool is_identity() const;
    FieldMatrix pow(long e) const;
    FieldMatrix operator*(const FieldMatrix& b) const;
    bool operator==(const FieldMatrix& b) const;
    nlohmann::json to_json() const;
};

FieldMatrix companion_matrix(const Poly& f);
// f evaluated at a square matrix
FieldMatrix poly_at(const Poly& f, const FieldMatrix& M);

struct CyclicIrrep {
    Poly factor;
    FieldMatrix matrix; // rho(x)
    bool faithful = false;
    std::size_t degree() const { return factor.degree(); }
};

std::vector<CyclicIrrep> cyclic_irreps(u64 n, const FieldDescriptor& F);

// ---- abelian groups -------------------------------------------------------

struct AbelianShape {
    u64 p = 2;
    std::vector<std::pair<int, int>> components; // (r, l), r strictly decreasing

    int log_order() const;
    int exponent_log() const; // largest r
    int a(int r) const;       // multiplicity of C_{p^r}
    int b(int r) const;       // sum_{s >= r} a_s
    int c(int r) const;       // sum_{s < r} s a_s
    // from a partition of log_p|G|, any order
    static AbelianShape from_partition(u64 p, std::vector<int> parts);
    std::string to_text() const;
};

// Direct product of cyclic groups C_{n_1} x ... x C_{n_k}; elements are mixed-radix tuples.
struct AbelianGroup {
    std::vector<u64> cyclic;

    static AbelianGroup from_shapes(const std::vector<AbelianShape>& shapes);
    static AbelianGroup parse(const std::string& list); // "2,4,3"
    std::vector<AbelianShape> shapes() const;
    u64 order() const;
    std::vector<u64> element(u64 index) const;
    u64 index(const std::vector<u64>& t) const;
    u64 elt_order(u64 index) const;
    std::string to_text() const;
};

// all isomorphism classes of abelian groups of order n
std::vector<AbelianGroup> abelian_groups_of_order(u64 n);
std::vector<AbelianShape> pgroup_shapes(u64 p, int N);

struct CyclicQuotient {
    std::vector<u64> kernel;  // element indices of H, ascending
    u64 d = 1;                // |G/H|
    std::vector<u64> image;   // image of each cyclic generator in Z/d
};

std::vector<CyclicQuotient> cyclic_quotients(const AbelianGroup& G);

struct AbelianIrrep {
    CyclicQuotient quotient;
    Poly factor;                    // faithful factor of Phi_d
    std::vector<FieldMatrix> gens;  // one per cyclic generator
    std::size_t degree() const { return factor.degree(); }
    nlohmann::json to_json(const AbelianGroup& G) const;
};

std::vector<AbelianIrrep> abelian_irreps(const AbelianGroup& G, const FieldDescriptor& F);

// ---- rational PCI-diagram of an abelian p-group ----------------------------

// The long presentation of sec. 7.1: generators flattened by (r desc, j asc, a asc).
LongPresentation abelian_long_presentation(const AbelianShape& shape);
// shapes by ascending prime, chained one after the other
LongPresentation abelian_long_presentation(const AbelianGroup& G);

struct EProduct {
    std::vector<PcGroup::Elt> plain;          // factors e_x
    std::optional<PcGroup::Elt> primed;       // the factor e'_z
    std::vector<PcGroup::Elt> subgroup;       // optional e_K factor (elements of K)

    std::string to_text(const PcGroup& G) const;
    CycloElement expand(const PcGroup& G, const CycloField& f, int level) const;
};

// Quotient: Rules 3/4 decided in G_{l+1}/K with K the kernel of the node; the Rule 4
// children use e_{z^i w} with w = u v the first coset element of order p modulo K.
// Literal: the conditions read on group elements (z = u^{p^s}, children e_{z^i u}).
enum class RuleMode { Quotient, Literal };

struct QNode {
    int level = 0;
    int id = 0;
    EProduct label;
    std::vector<int> parents;
    std::string rule; // "root", "rule2", "rule3", "rule4"
    CycloElement e;
};

class QDiagram {
public:
    explicit QDiagram(const AbelianShape& shape, RuleMode mode = RuleMode::Quotient);
    QDiagram(const QDiagram&) = delete;
    QDiagram& operator=(const QDiagram&) = delete;

    const PcGroup& group() const { return *G_; }
    const CycloField& field() const { return cyclo_field(1); }
    int depth() const { return G_->rank(); }
    const std::vector<QNode>& level(int i) const { return levels_.at(i); }
    const std::vector<QNode>& top() const { return levels_.back(); }
    nlohmann::json to_json() const;
    std::string to_text() const;
    std::string to_dot() const;

    const AbelianShape& shape() const { return shape_; }

private:
    AbelianShape shape_;
    std::unique_ptr<PcGroup> G_;
    std::vector<std::vector<QNode>> levels_;
};

// Error "rule_failure" when a node produced by the rules is not idempotent or the level is not a partition of 1.
std::unique_ptr<QDiagram> pgroup_pci_diagram_Q(const AbelianShape& shape, RuleMode mode = RuleMode::Quotient);

// e_K times the lift; error "not_idempotent" when the image in F[G/K] is not idempotent
CycloElement pullback_idempotent(const CycloElement& lift, const std::vector<PcGroup::Elt>& K);

// ---- idempotents of F[C_n] from a factor ----------------------------------

struct FactorIdempotent {
    std::unique_ptr<PcGroup> G; // C_n, x = top generator
    std::optional<CycloElement> exact;
    std::optional<AlgebraElement<GFqField>> finite;
    std::vector<std::string> power_sums; // inverse-root power sums, k = 0..n-1
};

FactorIdempotent pci_from_factor(const Poly& f, u64 n);

// ---- Wedderburn counts ----------------------------------------------------

struct WedderburnTerm {
    u64 d = 1;
    u64 copies = 0;          // f_d
    u64 field_degree = 1;    // [F(zeta_d) : F]
    std::string field;       // e.g. "Q(zeta_12)"
};

struct ClosedFormCheck {
    u64 p = 2;
    int r = 1;
    u64 oracle = 0;
    mpz_class theorem;   // p^{c_r + (r-1) b_{r-1}} (p^{b_r} - 1)/(p - 1)
    mpz_class corollary; // p^{c_r + (r-1)(b_r - 1)} (p^{b_r} - 1)/(p - 1)
    bool theorem_matches = false;
    bool corollary_matches = false;
};

struct WedderburnReport {
    FieldDescriptor field;
    std::vector<WedderburnTerm> terms;
    std::vector<ClosedFormCheck> closed_forms; // p-groups only
    bool dimension_ok = false;                 // sum f_d [F(zeta_d):F] = |G|
    bool quotients_ok = false;                 // over Q: f_d = number of cyclic quotients of order d
    nlohmann::json to_json() const;            // [{"d", "copies", "field"}]
    nlohmann::json checks_json() const;
};

WedderburnReport wedderburn_counts(const AbelianGroup& G, const FieldDescriptor& F = FieldDescriptor::rational());

} // namespace solvarep
