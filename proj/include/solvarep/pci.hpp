#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solvarep/galg.hpp"

namespace solvarep {

template <class F>
struct PciNode {
    int level = 0;
    int id = 0;
    u64 degree = 1;        // number of root-to-node paths
    bool trivial = false;  // principal idempotent of G_level
    bool fused = false;    // created by a fusion step
    std::vector<int> parents;
    std::vector<int> children;
    std::string label;
    std::vector<typename F::V> chi; // character value on each class of G_level
};

// One Berman step from level i to i+1.
struct BermanRecord {
    enum Kind { Split, Fused } kind = Split;
    int level = 0;              // level of the parents
    std::vector<int> parents;   // one for Split, p for Fused
    std::vector<int> children;  // p for Split, one for Fused
    PcGroup::Elt xstar = 0;     // Split only
    u64 lambda = 0, mu = 0;     // Split only, residues mod ell
};

template <class F>
struct BermanOutcome {
    BermanRecord record;
    std::vector<AlgebraElement<F>> elements; // children idempotents
};

template <class F>
class PciDiagram {
public:
    using Elt = PcGroup::Elt;

    PciDiagram(const PcGroup& G, std::shared_ptr<const F> f) : G_(&G), f_(std::move(f)) {}

    const PcGroup& group() const { return *G_; }
    const F& field() const { return *f_; }
    std::shared_ptr<const F> field_ptr() const { return f_; }
    int depth() const { return G_->rank(); }
    const std::vector<PciNode<F>>& level(int i) const { return levels_.at(i); }
    const std::vector<PciNode<F>>& leaves() const { return levels_.back(); }
    const std::vector<BermanRecord>& steps(int i) const { return steps_.at(i); }
    u64 prime() const { return prime_; }
    u64 verification_prime() const { return verify_prime_; }

    // the idempotent (d/|G_i|) sum chi(g^-1) g, or the stored Berman output
    AlgebraElement<F> idempotent(int level, int id) const;
    std::vector<AlgebraElement<F>> level_idempotents(int level) const;

    nlohmann::json to_json(bool with_idempotents = true) const;
    std::string to_dot() const;
    std::string to_text() const;

    // construction interface used by the builders
    std::vector<std::vector<PciNode<F>>> levels_;
    std::vector<std::vector<BermanRecord>> steps_;
    std::vector<std::vector<AlgebraElement<F>>> stored_; // empty for lifted diagrams
    u64 prime_ = 0;
    u64 verify_prime_ = 0;

private:
    const PcGroup* G_;
    std::shared_ptr<const F> f_;
};

using ModDiagram = PciDiagram<ModField>;
using ExactDiagram = PciDiagram<CycloField>;

struct PciOptions {
    std::optional<u64> prime;   // pin ell; disables escalation
    int retries = 5;            // number of primes tried
    bool use_env = true;        // read SOLVAREP_PRIME
};

// Smallest prime ell = 1 mod exp(G), ell coprime to |G|, above the lifting bound and above `after`.
u64 select_prime(const PcGroup& G, u64 after = 0);
u64 prime_lower_bound(const PcGroup& G);
// Berman step operations over F_ell.
BermanOutcome<ModField> berman_split(const PcGroup& G, const ModField& f, const ModElement& e, int level);
BermanOutcome<ModField> berman_fuse(const PcGroup& G, const ModField& f, const ModElement& e, int level,
                                    const std::vector<ModElement>& level_nodes);

// Phase 1 at one prime; throws on any failure.
ModDiagram build_modular_diagram(const PcGroup& G, u64 ell);
// Phase 1 with prime selection and escalation.
ModDiagram build_pci_diagram_modular(const PcGroup& G, const PciOptions& opt = {});
// Phase 2: lift and verify; throws on failure.
ExactDiagram lift_pci_to_cyclotomic(const ModDiagram& D);
// Both phases with escalation.
ExactDiagram build_pci_diagram(const PcGroup& G, const PciOptions& opt = {});

template <class F>
std::vector<AlgebraElement<F>> gz_generators(const PciDiagram<F>& D);

// root-to-leaf paths as node ids per level, in lexicographic order
template <class F>
std::vector<std::vector<int>> leaf_paths(const PciDiagram<F>& D, int leaf);

// product of the idempotents along each path; verify = exact checks of idempotency,
// orthogonality and the sum (quadratic in the path count)
template <class F>
std::vector<AlgebraElement<F>> path_idempotents(const PciDiagram<F>& D, int leaf, bool verify = true);

// The idempotents of a path that are not absorbed by a neighbour.
template <class F>
std::vector<std::pair<int, int>> path_factors(const PciDiagram<F>& D, const std::vector<int>& path);

} // namespace solvarep
