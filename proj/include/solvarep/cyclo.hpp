#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "solvarep/error.hpp"
#include "solvarep/ntheory.hpp"

namespace solvarep {

using Rational = mpq_class;
using Integer = mpz_class;
using IntPoly = std::vector<Integer>; // coefficient of X^i at index i

std::string rational_str(const Rational& q);
Rational parse_rational(const std::string& s);

// Monic Phi_n, obtained by dividing X^n - 1 by Phi_d for every proper divisor d.
const IntPoly& cyclotomic_polynomial(unsigned n);

// Reduction data for Q(zeta_N) in the power basis.
struct CycloLevel {
    int N = 1;
    int phi = 1;
    IntPoly Phi;
    std::vector<std::vector<long>> red; // red[j] = X^j mod Phi_N, j < N, length phi
    long C_Phi = 1;                     // max |coefficient| over red
};

const CycloLevel& cyclo_level(int N);

class Cyclotomic {
public:
    Cyclotomic();
    explicit Cyclotomic(int N);
    Cyclotomic(int N, long v);
    Cyclotomic(int N, const Rational& q);
    Cyclotomic(int N, const std::vector<Rational>& coords);

    static Cyclotomic zeta(int N, long k);
    // sum c_i zeta_N^i for a coefficient list of any length
    static Cyclotomic from_powers(int N, const std::vector<Rational>& p);
    // num / den with num of length phi(N) (or empty for zero)
    static Cyclotomic from_numerators(int N, const std::vector<Integer>& num, const Integer& den);

    int level() const { return lvl_->N; }
    int phi() const { return lvl_->phi; }
    std::vector<Rational> coords() const;
    Rational coord(int i) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;
    bool is_one() const;

    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& b);
    Cyclotomic& operator-=(const Cyclotomic& b);
    Cyclotomic& operator*=(const Cyclotomic& b);
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inv(); }
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    Cyclotomic scaled(const Rational& q) const;
    Cyclotomic inv() const;
    Cyclotomic galois(long r) const;
    Cyclotomic conj() const { return galois(-1); }
    // Image in Q(zeta_M) for N | M.
    Cyclotomic at_level(int M) const;

    std::complex<double> approx() const;
    std::string to_text() const;
    nlohmann::json to_json() const;
    static Cyclotomic from_json(const nlohmann::json& j);

    // Numerator form: value = sum num_i zeta^i / den over the nonzero power-basis coordinates.
    using Term = std::pair<int, Integer>;
    const std::vector<Term>& terms() const { return terms_; }
    std::vector<Integer> numerators() const; // dense, length phi (empty for zero)
    const Integer& denominator() const { return den_; }

private:
    const CycloLevel* lvl_;
    std::vector<Term> terms_; // ascending index, nonzero numerators
    Integer den_ = 1;

    void normalize();
    void assign_dense(const std::vector<Integer>& num, std::size_t len);
    void check_level(const Cyclotomic& b) const;
    void set_from_powers(std::vector<Integer>& poly, const Integer& den);
};

// Numeric embedding zeta_N -> exp(2 pi i / N) at a given binary precision (>= 53).
struct NumericValue {
    std::string re;
    std::string im;
    std::complex<double> value;
};
NumericValue embed_numeric(const Cyclotomic& a, int precision_bits, int digits = 17);

// ---- prime fields -------------------------------------------------------

class PrimeField {
public:
    PrimeField() = default;
    explicit PrimeField(u64 ell);

    u64 modulus() const { return ell_; }
    u64 primitive_root() const { return g_; }

    u64 reduce(i64 v) const { return static_cast<u64>(mod_floor(v, static_cast<i64>(ell_))); }
    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= ell_ ? s - ell_ : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + ell_ - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : ell_ - a; }
    u64 mul(u64 a, u64 b) const { return a * b % ell_; }
    u64 pow(u64 a, u64 e) const { return powmod(a, e, ell_); }
    u64 inv(u64 a) const;
    u64 from_rational(const Rational& q) const;

    // An element of multiplicative order n; requires n | ell - 1.
    u64 element_of_order(u64 n) const;
    // Discrete log to the primitive root (baby-step/giant-step).
    u64 dlog(u64 x) const;
    // One mu with mu^p = lambda; Error "no_pth_root" otherwise.
    u64 pth_root(u64 lambda, u64 p) const;
    // Centered lift into (-ell/2, ell/2].
    i64 centered(u64 a) const;

private:
    u64 ell_ = 2;
    u64 g_ = 1;
    struct Bsgs {
        std::once_flag once;
        u64 m = 0;
        std::unordered_map<u64, u64> baby;
    };
    std::shared_ptr<Bsgs> bsgs_;
};

struct PrimeFieldScalar {
    u64 modulus;
    u64 value;
};

PrimeFieldScalar pf_add(PrimeFieldScalar a, PrimeFieldScalar b);
PrimeFieldScalar pf_mul(PrimeFieldScalar a, PrimeFieldScalar b);
PrimeFieldScalar pf_inv(PrimeFieldScalar a);
PrimeFieldScalar pf_pow(PrimeFieldScalar a, u64 e);
PrimeFieldScalar pf_pth_root(PrimeFieldScalar lambda, u64 p);

} // namespace solvarep
