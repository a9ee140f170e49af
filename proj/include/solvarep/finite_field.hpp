#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "solvarep/error.hpp"
#include "solvarep/ntheory.hpp"

namespace solvarep {

// F_q = F_p[a]/(h) with h the first monic irreducible of degree k in lexicographic order.
// Elements are indices sum c_i p^i of their coordinates c_0 + c_1 a + ... .
class GFq {
public:
    static constexpr u64 kMaxOrder = u64(1) << 20;
    explicit GFq(u64 q);

    u64 order() const { return q_; }
    u64 characteristic() const { return p_; }
    int degree() const { return k_; }
    const std::vector<u64>& modulus() const { return h_; } // over F_p, ascending, monic

    u64 add(u64 a, u64 b) const;
    u64 sub(u64 a, u64 b) const { return add(a, neg(b)); }
    u64 neg(u64 a) const;
    u64 mul(u64 a, u64 b) const {
        if (a == 0 || b == 0) return 0;
        u64 s = log_[a] + log_[b];
        return exp_[s >= q_ - 1 ? s - (q_ - 1) : s];
    }
    u64 inv(u64 a) const;
    u64 pow(u64 a, u64 e) const;
    u64 from_int(long v) const { return static_cast<u64>(mod_floor(v, static_cast<i64>(p_))); }
    u64 primitive() const { return exp_[q_ > 2 ? 1 : 0]; }
    std::vector<u64> coords(u64 a) const;
    std::string to_text(u64 a) const;

private:
    u64 p_, q_;
    int k_;
    std::vector<u64> h_;
    std::vector<u64> log_, exp_;
};

// cached, never destroyed
const GFq& gf(u64 q);

// Scalar backend over F_q with the interface used by ExactMatrix and AlgebraElement.
struct GFqField {
    using V = u64;
    const GFq* F = nullptr;

    GFqField() = default;
    explicit GFqField(const GFq& f) : F(&f) {}

    V zero() const { return 0; }
    V one() const { return 1; }
    V from_int(long v) const { return F->from_int(v); }
    V add(V a, V b) const { return F->add(a, b); }
    V sub(V a, V b) const { return F->sub(a, b); }
    V mul(V a, V b) const { return F->mul(a, b); }
    V neg(V a) const { return F->neg(a); }
    V inv(V a) const { return F->inv(a); }
    void add_to(V& acc, V a, V b) const { acc = F->add(acc, F->mul(a, b)); }
    bool is_zero(V a) const { return a == 0; }
    bool eq(V a, V b) const { return a == b; }
    bool same(const GFqField& o) const { return F == o.F; }
    std::string backend() const { return "gf:" + std::to_string(F->order()); }
    nlohmann::json to_json(V a) const;
    std::string to_text(V a) const { return F->to_text(a); }
};

const GFqField& gf_field(u64 q);

// F_{q^m} = F_q[Y]/(g), g the first monic irreducible of degree m over F_q in
// lexicographic order (constant term least significant).
class GFqExt {
public:
    using Elem = std::vector<u64>; // m coordinates over F_q

    GFqExt(const GFq& base, int m);

    const GFq& base() const { return *B_; }
    int degree() const { return m_; }
    const std::vector<u64>& modulus() const { return g_; }
    mpz_class order() const; // q^m

    Elem zero() const { return Elem(m_, 0); }
    Elem one() const;
    Elem from_base(u64 c) const;
    Elem from_index(const mpz_class& idx) const;
    bool is_base(const Elem& a) const; // lies in F_q
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(const Elem& a, const mpz_class& e) const;
    bool is_zero(const Elem& a) const;
    bool is_one(const Elem& a) const;

private:
    const GFq* B_;
    int m_;
    std::vector<u64> g_; // monic, ascending, length m + 1
};

const GFqExt& gf_ext(u64 q, int m);

// Dense polynomials over F_q, ascending coefficients, no trailing zeros.
namespace gfpoly {
using P = std::vector<u64>;
void trim(P& a);
P mul(const GFq& F, const P& a, const P& b);
P sub(const GFq& F, P a, const P& b);
P mod(const GFq& F, P a, const P& m);
P gcd(const GFq& F, P a, P b);
P mulmod(const GFq& F, const P& a, const P& b, const P& m);
P powmod(const GFq& F, P a, u64 e, const P& m);
bool is_irreducible(const GFq& F, const P& g);
} // namespace gfpoly

} // namespace solvarep
