#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solvarep/pci.hpp"

namespace solvarep {

struct FieldDescriptor {
    enum class Kind { Rational, Real, Complex, Finite } kind = Kind::Rational;
    u64 q = 0; // Finite only, a prime power

    static FieldDescriptor rational() { return {Kind::Rational, 0}; }
    static FieldDescriptor real() { return {Kind::Real, 0}; }
    static FieldDescriptor complex() { return {Kind::Complex, 0}; }
    static FieldDescriptor finite(u64 q);
    // Q, R, C, F<q>, F_<q>, F:<q>, GF(<q>)
    static FieldDescriptor parse(const std::string& s);

    std::string name() const;
    bool operator==(const FieldDescriptor&) const = default;
};

// residues r mod n with zeta_n -> zeta_n^r in Gal(F(zeta_n)/F), ascending
std::vector<u64> exponent_subgroup(u64 n, const FieldDescriptor& F);

struct FClass {
    std::vector<int> classes;     // ordinary class ids at the top level, ascending
    PcGroup::Elt rep = 0;         // representative of the first class
    u64 order = 1;                // element order
    std::vector<u64> exponents;   // exponent subgroup mod order
    std::size_t size = 0;         // number of elements
};

std::vector<FClass> f_conjugacy_classes(const PcGroup& G, const FieldDescriptor& F);
// ordinary class id -> index into the F-class list
std::vector<int> f_class_index(const PcGroup& G, const std::vector<FClass>& classes);

struct GaloisOrbit {
    std::vector<int> leaves;            // ascending leaf ids
    std::size_t delta = 1;              // orbit size
    u64 degree = 1;                     // degree of each member
    std::vector<Cyclotomic> character;  // orbit sum on each ordinary class
    CycloElement idempotent;            // sum of the member idempotents
};

// Orbits of the leaves of an exact diagram under the exponent subgroup of F.
std::vector<GaloisOrbit> galois_orbit_sum_pcis(const ExactDiagram& D, const FieldDescriptor& F, bool verify = true);

struct FCharacterTable {
    struct Row {
        std::string label;
        std::size_t delta = 1;
        u64 degree = 1;
        std::vector<Cyclotomic> values; // one per F-class
    };
    FieldDescriptor field;
    std::vector<FClass> classes;
    std::vector<std::string> class_labels;
    std::vector<Row> rows;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

// Rows are orbit sums without the Schur index factor.
FCharacterTable reduced_f_character_table(const ExactDiagram& D, const FieldDescriptor& F,
                                          const std::vector<GaloisOrbit>* orbits = nullptr);

struct RowIdempotent {
    CycloElement e;
    Cyclotomic s;                    // e''^2 = s e''
    std::optional<Integer> n_inferred; // |G|/s when that is a positive integer
};

// e'' = sum_x row(x^-1) x, e = e''/s. Error "not_proportional" when the row is not irreducible.
RowIdempotent pci_from_character_row(const PcGroup& G, const CycloField& f, const std::vector<FClass>& classes,
                                     const std::vector<Cyclotomic>& row);

} // namespace solvarep
