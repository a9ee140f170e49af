#include "solvarep/catalog.hpp"

#include <cctype>

namespace solvarep {

namespace {

const char* kS3 = R"(group S3
gen x 3
gen y 2 act x -> x^2
)";

const char* kD8 = R"(group D8
gen x 2
gen y 2
gen z 2 act y -> x y
)";

const char* kQ8 = R"(group Q8
gen x 2
gen y 2 pow x
gen z 2 pow x act y -> x y
)";

const char* kSL23 = R"(group SL2_3
gen x 2
gen y 2 pow x
gen z 2 pow x act y -> x y
gen t 3 act y -> z act z -> y z
)";

const char* kA4 = R"(group A4
gen x 2
gen y 2
gen z 3 act x -> y act y -> x y
)";

const char* kS4 = R"(group S4
gen x 2
gen y 2
gen z 3 act x -> y act y -> x y
gen t 2 act y -> x y act z -> z^2
)";

std::vector<u64> chain_primes(unsigned n) {
    std::vector<u64> ps;
    for (auto& [p, e] : factorize(n))
        for (int k = 0; k < e; ++k) ps.push_back(p);
    return ps;
}

// Appends the chain of C_n; returns the generator index of each link and the
// exponent c_t with link_t = (top generator)^{c_t}.
void append_cyclic_chain(LongPresentation& pres, unsigned n, const std::string& prefix,
                         std::vector<int>& idx, std::vector<u64>& power) {
    auto ps = chain_primes(n);
    u64 ord = 1;
    for (std::size_t t = 0; t < ps.size(); ++t) {
        Word pw;
        if (t > 0) pw.push_back({idx.back(), 1});
        pres.add_gen(prefix + std::to_string(t + 1), static_cast<int>(ps[t]), pw);
        idx.push_back(pres.rank() - 1);
        ord *= ps[t];
        power.push_back(n / ord);
    }
}

bool parse_uint(const std::string& s, unsigned& out) {
    if (s.empty() || s.size() > 9) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    out = static_cast<unsigned>(std::stoul(s));
    return true;
}

} // namespace

LongPresentation cyclic_presentation(unsigned n, const std::string& prefix) {
    if (n == 0) fail("unknown_group", "cyclic group order must be positive");
    LongPresentation pres;
    pres.name = "C" + std::to_string(n);
    std::vector<int> idx;
    std::vector<u64> power;
    append_cyclic_chain(pres, n, prefix, idx, power);
    return pres;
}

LongPresentation dihedral_presentation(unsigned two_n) {
    if (two_n < 2 || two_n % 2) fail("unknown_group", "dihedral order must be even and at least 2");
    const unsigned n = two_n / 2;
    LongPresentation pres;
    pres.name = "D" + std::to_string(two_n);
    std::vector<int> idx;
    std::vector<u64> power;
    append_cyclic_chain(pres, n, "r", idx, power);
    pres.add_gen("s", 2);
    const int s = pres.rank() - 1;
    for (int j : idx)
        if (pres.primes[j] != 2 || j != idx.front()) pres.set_act(s, j, Word{{j, -1}});
    return pres;
}

LongPresentation metacyclic_presentation(unsigned m, unsigned n, unsigned r) {
    if (m == 0 || n == 0) fail("unknown_group", "metacyclic orders must be positive");
    LongPresentation pres;
    pres.name = "M" + std::to_string(m) + "_" + std::to_string(n) + "_" + std::to_string(r);
    std::vector<int> ai, bi;
    std::vector<u64> ap, bp;
    append_cyclic_chain(pres, m, "a", ai, ap);
    append_cyclic_chain(pres, n, "b", bi, bp);
    for (std::size_t s = 0; s < bi.size(); ++s) {
        // b_s = b^{bp[s]} acts on a by a -> a^{r^{bp[s]}}
        u64 rs = powmod(r % m, bp[s], m);
        for (int j : ai)
            if (rs != 1 % m) pres.set_act(bi[s], j, Word{{j, static_cast<long>(rs)}});
    }
    return pres;
}

std::vector<std::string> catalog_fixed_names() { return {"s3", "d8", "q8", "sl23", "a4", "s4"}; }

LongPresentation catalog(const std::string& name) {
    if (name == "s3") return parse_presentation(kS3);
    if (name == "d8") return parse_presentation(kD8);
    if (name == "q8") return parse_presentation(kQ8);
    if (name == "sl23") return parse_presentation(kSL23);
    if (name == "a4") return parse_presentation(kA4);
    if (name == "s4") return parse_presentation(kS4);
    unsigned v = 0;
    if (name.size() > 1 && name[0] == 'c' && parse_uint(name.substr(1), v) && v > 0) return cyclic_presentation(v);
    if (name.rfind("dihedral", 0) == 0 && parse_uint(name.substr(8), v) && v >= 2 && v % 2 == 0)
        return dihedral_presentation(v);
    if (name.rfind("metacyclic", 0) == 0) {
        std::string rest = name.substr(10);
        auto u1 = rest.find('_');
        auto u2 = u1 == std::string::npos ? u1 : rest.find('_', u1 + 1);
        unsigned m = 0, n = 0, r = 0;
        if (u2 != std::string::npos && parse_uint(rest.substr(0, u1), m) &&
            parse_uint(rest.substr(u1 + 1, u2 - u1 - 1), n) && parse_uint(rest.substr(u2 + 1), r))
            return metacyclic_presentation(m, n, r);
    }
    fail("unknown_group", "unknown catalog group '" + name + "'");
}

} // namespace solvarep
