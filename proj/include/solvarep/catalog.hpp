#pragma once

#include <string>
#include <vector>

#include "solvarep/pcgroup.hpp"

namespace solvarep {

// Named groups: s3, d8, q8, sl23, a4, s4, c<n>, dihedral<2n>, metacyclic<m>_<n>_<r>.
LongPresentation catalog(const std::string& name);
std::vector<std::string> catalog_fixed_names();

LongPresentation cyclic_presentation(unsigned n, const std::string& prefix = "x");
LongPresentation dihedral_presentation(unsigned two_n);
// <a, b | a^m = b^n = 1, b^-1 a b = a^r>
LongPresentation metacyclic_presentation(unsigned m, unsigned n, unsigned r);

} // namespace solvarep
