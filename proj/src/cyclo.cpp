#include "solvarep/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <mpfr.h>

namespace solvarep {

std::string rational_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) fail("parse_error", "malformed rational '" + s + "'");
    if (q.get_den() == 0) fail("parse_error", "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

namespace {

std::recursive_mutex g_phi_mutex;
std::map<unsigned, IntPoly> g_phi_cache;

// Exact quotient of a by a monic divisor b.
IntPoly divide_monic(IntPoly a, const IntPoly& b) {
    std::size_t db = b.size() - 1;
    if (a.size() < b.size()) return {0};
    IntPoly q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
        Integer c = a[i];
        if (c == 0) continue;
        q[i - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    for (std::size_t i = 0; i < db; ++i)
        if (a[i] != 0) fail("internal", "cyclotomic division left a remainder");
    return q;
}

} // namespace

const IntPoly& cyclotomic_polynomial(unsigned n) {
    if (n == 0) fail("domain", "cyclotomic_polynomial(0)");
    std::lock_guard<std::recursive_mutex> lock(g_phi_mutex);
    auto it = g_phi_cache.find(n);
    if (it != g_phi_cache.end()) return it->second;
    IntPoly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (u64 d : divisors(n)) {
        if (d == n) continue;
        p = divide_monic(p, cyclotomic_polynomial(static_cast<unsigned>(d)));
    }
    return g_phi_cache.emplace(n, std::move(p)).first->second;
}

namespace {

std::mutex g_level_mutex;
std::map<int, std::unique_ptr<CycloLevel>> g_levels;

std::unique_ptr<CycloLevel> make_level(int N) {
    auto L = std::make_unique<CycloLevel>();
    L->N = N;
    L->Phi = cyclotomic_polynomial(static_cast<unsigned>(N));
    L->phi = static_cast<int>(L->Phi.size()) - 1;
    const int phi = L->phi;
    std::vector<Integer> cur(phi, 0);
    cur[0] = 1;
    L->red.assign(N, std::vector<long>(phi, 0));
    L->C_Phi = 0;
    for (int j = 0; j < N; ++j) {
        if (j > 0) {
            // multiply by X and reduce by the monic Phi
            Integer top = cur[phi - 1];
            for (int i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
            cur[0] = 0;
            if (top != 0)
                for (int i = 0; i < phi; ++i) cur[i] -= top * L->Phi[i];
        }
        for (int i = 0; i < phi; ++i) {
            if (!cur[i].fits_slong_p()) fail("domain", "reduction table overflow at level " + std::to_string(N));
            long v = cur[i].get_si();
            L->red[j][i] = v;
            L->C_Phi = std::max(L->C_Phi, std::labs(v));
        }
    }
    return L;
}

} // namespace

const CycloLevel& cyclo_level(int N) {
    if (N < 1) fail("domain", "cyclotomic level must be positive");
    std::lock_guard<std::mutex> lock(g_level_mutex);
    auto it = g_levels.find(N);
    if (it != g_levels.end()) return *it->second;
    return *g_levels.emplace(N, make_level(N)).first->second;
}

// ---- Cyclotomic -----------------------------------------------------------

namespace {
void addmul_si(Integer& acc, const Integer& x, long r) {
    if (r >= 0)
        mpz_addmul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(r));
    else
        mpz_submul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(-r));
}
} // namespace

Cyclotomic::Cyclotomic() : lvl_(&cyclo_level(1)) {}

Cyclotomic::Cyclotomic(int N) : lvl_(&cyclo_level(N)) {}

Cyclotomic::Cyclotomic(int N, long v) : lvl_(&cyclo_level(N)) {
    if (v != 0) terms_.emplace_back(0, Integer(v));
}

Cyclotomic::Cyclotomic(int N, const Rational& q) : lvl_(&cyclo_level(N)) {
    if (q != 0) {
        terms_.emplace_back(0, Integer(q.get_num()));
        den_ = q.get_den();
    }
}

Cyclotomic::Cyclotomic(int N, const std::vector<Rational>& coords) : lvl_(&cyclo_level(N)) {
    if (static_cast<int>(coords.size()) != lvl_->phi)
        fail("domain", "coordinate vector must have length phi(N)");
    *this = from_powers(N, coords);
}

Cyclotomic Cyclotomic::zeta(int N, long k) {
    Cyclotomic z(N);
    const long e = mod_floor(k, N);
    if (e < z.phi()) {
        z.terms_.emplace_back(static_cast<int>(e), Integer(1));
        return z;
    }
    for (int i = 0; i < z.phi(); ++i)
        if (z.lvl_->red[e][i] != 0) z.terms_.emplace_back(i, Integer(z.lvl_->red[e][i]));
    return z;
}

Cyclotomic Cyclotomic::from_powers(int N, const std::vector<Rational>& p) {
    Cyclotomic z(N);
    Integer den = 1;
    for (auto& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> poly(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != 0) poly[i] = p[i].get_num() * (den / p[i].get_den());
    z.set_from_powers(poly, den);
    return z;
}

Cyclotomic Cyclotomic::from_numerators(int N, const std::vector<Integer>& num, const Integer& den) {
    Cyclotomic z(N);
    if (num.empty()) return z;
    if (static_cast<int>(num.size()) != z.phi()) fail("domain", "numerator vector must have length phi(N)");
    if (den == 0) fail("division_by_zero", "zero denominator");
    z.assign_dense(num, num.size());
    z.den_ = den;
    z.normalize();
    return z;
}

void Cyclotomic::assign_dense(const std::vector<Integer>& num, std::size_t len) {
    terms_.clear();
    for (std::size_t i = 0; i < len; ++i)
        if (sgn(num[i]) != 0) terms_.emplace_back(static_cast<int>(i), num[i]);
}

std::vector<Integer> Cyclotomic::numerators() const {
    std::vector<Integer> out;
    if (terms_.empty()) return out;
    out.resize(lvl_->phi);
    for (auto& [i, c] : terms_) out[i] = c;
    return out;
}

void Cyclotomic::set_from_powers(std::vector<Integer>& poly, const Integer& den) {
    const int N = lvl_->N, phi = lvl_->phi;
    if (poly.size() < static_cast<std::size_t>(phi)) poly.resize(phi);
    for (std::size_t j = poly.size(); j-- > static_cast<std::size_t>(phi);) {
        if (sgn(poly[j]) == 0) continue;
        std::size_t jj = j % N;
        if (jj < static_cast<std::size_t>(phi)) {
            poly[jj] += poly[j];
        } else {
            const auto& r = lvl_->red[jj];
            for (int i = 0; i < phi; ++i)
                if (r[i] != 0) addmul_si(poly[i], poly[j], r[i]);
        }
    }
    assign_dense(poly, phi);
    den_ = den;
    normalize();
}

void Cyclotomic::normalize() {
    if (terms_.empty()) {
        den_ = 1;
        return;
    }
    Integer g = den_;
    for (auto& [i, c] : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (den_ < 0) g = -g;
    if (g != 1) {
        for (auto& [i, c] : terms_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
}

void Cyclotomic::check_level(const Cyclotomic& b) const {
    if (lvl_ != b.lvl_)
        fail("level_mismatch", "cyclotomic levels differ: " + std::to_string(lvl_->N) + " vs " +
                                   std::to_string(b.lvl_->N));
}

std::vector<Rational> Cyclotomic::coords() const {
    std::vector<Rational> out(lvl_->phi, 0);
    for (auto& [i, c] : terms_) {
        out[i] = Rational(c, den_);
        out[i].canonicalize();
    }
    return out;
}

Rational Cyclotomic::coord(int i) const {
    if (i < 0 || i >= lvl_->phi) throw std::out_of_range("cyclotomic coordinate");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i, [](const Term& t, int v) { return t.first < v; });
    if (it == terms_.end() || it->first != i) return 0;
    Rational q(it->second, den_);
    q.canonicalize();
    return q;
}

bool Cyclotomic::is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }

bool Cyclotomic::is_one() const { return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == den_; }

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r = *this;
    for (auto& [i, c] : r.terms_) mpz_neg(c.get_mpz_t(), c.get_mpz_t());
    return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& b) {
    check_level(b);
    if (b.terms_.empty()) return *this;
    if (terms_.empty()) return *this = b;
    const bool same_den = den_ == b.den_;
    std::vector<Term> out;
    out.reserve(terms_.size() + b.terms_.size());
    std::size_t x = 0, y = 0;
    while (x < terms_.size() || y < b.terms_.size()) {
        if (y == b.terms_.size() || (x < terms_.size() && terms_[x].first < b.terms_[y].first)) {
            out.push_back(std::move(terms_[x]));
            if (!same_den) out.back().second *= b.den_;
            ++x;
        } else if (x == terms_.size() || b.terms_[y].first < terms_[x].first) {
            out.emplace_back(b.terms_[y].first, same_den ? b.terms_[y].second : Integer(b.terms_[y].second * den_));
            ++y;
        } else {
            Term t = std::move(terms_[x]);
            if (same_den) {
                t.second += b.terms_[y].second;
            } else {
                t.second *= b.den_;
                mpz_addmul(t.second.get_mpz_t(), b.terms_[y].second.get_mpz_t(), den_.get_mpz_t());
            }
            if (sgn(t.second) != 0) out.push_back(std::move(t));
            ++x, ++y;
        }
    }
    terms_ = std::move(out);
    if (!same_den) den_ *= b.den_;
    normalize();
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& b) { return *this += -b; }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    a.check_level(b);
    Cyclotomic r(a.level());
    if (a.terms_.empty() || b.terms_.empty()) return r;
    const Cyclotomic* s = nullptr;
    const Cyclotomic* o = nullptr;
    if (a.is_rational()) {
        s = &a;
        o = &b;
    } else if (b.is_rational()) {
        s = &b;
        o = &a;
    }
    if (s) {
        r.terms_ = o->terms_;
        for (auto& [i, c] : r.terms_) c *= s->terms_[0].second;
        r.den_ = s->den_ * o->den_;
        r.normalize();
        return r;
    }
    std::vector<Integer> prod(2 * static_cast<std::size_t>(a.phi()) - 1);
    for (auto& [i, x] : a.terms_)
        for (auto& [j, y] : b.terms_) mpz_addmul(prod[i + j].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    r.set_from_powers(prod, a.den_ * b.den_);
    return r;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& b) { return *this = *this * b; }

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    a.check_level(b);
    return a.den_ == b.den_ && a.terms_ == b.terms_;
}

Cyclotomic Cyclotomic::scaled(const Rational& q) const { return *this * Cyclotomic(level(), q); }

namespace {

using QPoly = std::vector<Rational>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// p = q*d + r
void qpoly_divmod(QPoly p, const QPoly& d, QPoly& q, QPoly& r) {
    trim(p);
    q.assign(p.size() >= d.size() ? p.size() - d.size() + 1 : 1, 0);
    const Rational lead = d.back();
    while (p.size() >= d.size() && !p.empty()) {
        std::size_t shift = p.size() - d.size();
        Rational c = p.back() / lead;
        q[shift] = c;
        for (std::size_t i = 0; i < d.size(); ++i) p[shift + i] -= c * d[i];
        p.pop_back();
        trim(p);
    }
    r = p;
    trim(q);
}

QPoly qpoly_sub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
    QPoly out = a;
    QPoly prod(q.size() + b.size(), 0);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += q[i] * b[j];
    if (out.size() < prod.size()) out.resize(prod.size(), 0);
    for (std::size_t i = 0; i < prod.size(); ++i) out[i] -= prod[i];
    trim(out);
    return out;
}

} // namespace

Cyclotomic Cyclotomic::inv() const {
    if (is_zero()) fail("division_by_zero", "inverse of zero in Q(zeta_" + std::to_string(level()) + ")");
    if (is_rational()) {
        Rational q(den_, terms_[0].second);
        q.canonicalize();
        return Cyclotomic(level(), q);
    }
    QPoly r0(lvl_->Phi.begin(), lvl_->Phi.end());
    QPoly r1 = coords();
    trim(r1);
    QPoly s0{}, s1{Rational(1)};
    while (r1.size() > 1) {
        QPoly q, r;
        qpoly_divmod(r0, r1, q, r);
        QPoly s2 = qpoly_sub_mul(s0, q, s1);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r1 is a nonzero constant: a * s1 == r1 (mod Phi)
    Rational c = r1.at(0);
    for (auto& x : s1) x /= c;
    return from_powers(level(), s1);
}

Cyclotomic Cyclotomic::galois(long r) const {
    const int N = level();
    long rr = mod_floor(r, N);
    if (gcd_u(static_cast<u64>(rr), static_cast<u64>(N)) != 1)
        fail("domain", "galois exponent " + std::to_string(r) + " not coprime to " + std::to_string(N));
    Cyclotomic out(N);
    if (is_zero()) return out;
    std::vector<Integer> poly(N);
    for (auto& [i, c] : terms_) poly[(static_cast<long>(i) * rr) % N] += c;
    out.set_from_powers(poly, den_);
    return out;
}

Cyclotomic Cyclotomic::at_level(int M) const {
    const int N = level();
    if (M % N != 0) fail("level_mismatch", "cannot embed level " + std::to_string(N) + " into " + std::to_string(M));
    Cyclotomic out(M);
    if (is_zero()) return out;
    std::vector<Integer> poly(M);
    const int step = M / N;
    for (auto& [i, c] : terms_) poly[static_cast<std::size_t>(i) * step] = c;
    out.set_from_powers(poly, den_);
    return out;
}

std::complex<double> Cyclotomic::approx() const {
    std::complex<double> s = 0;
    const double den = den_.get_d();
    for (auto& [i, c] : terms_) {
        double ang = 2.0 * std::numbers::pi * static_cast<double>(i) / level();
        s += (c.get_d() / den) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

std::string Cyclotomic::to_text() const {
    if (is_zero()) return "0";
    std::string out;
    auto cs = coords();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const Rational& c = cs[i];
        if (c == 0) continue;
        Rational a = abs(c);
        bool neg = c < 0;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string mono = i == 0 ? "" : (i == 1 ? "z" : "z^" + std::to_string(i));
        if (i == 0)
            out += rational_str(a);
        else if (a == 1)
            out += mono;
        else
            out += rational_str(a) + "*" + mono;
    }
    return out;
}

nlohmann::json Cyclotomic::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (auto& c : coords()) cs.push_back(rational_str(c));
    return {{"level", level()}, {"coords", cs}};
}

Cyclotomic Cyclotomic::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("level") || !j.contains("coords"))
        fail("parse_error", "cyclotomic JSON needs level and coords");
    int N = j.at("level").get<int>();
    std::vector<Rational> cs;
    for (auto& c : j.at("coords")) cs.push_back(parse_rational(c.get<std::string>()));
    return Cyclotomic(N, cs);
}

NumericValue embed_numeric(const Cyclotomic& a, int precision_bits, int digits) {
    if (precision_bits < 53) fail("domain", "precision must be at least 53 bits");
    const mpfr_prec_t prec = precision_bits + 16;
    mpfr_t re, im, ang, c, s, t, pi;
    mpfr_inits2(prec, re, im, ang, c, s, t, pi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
    mpfr_const_pi(pi, MPFR_RNDN);
    const auto& num = a.numerators();
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (num[i] == 0) continue;
        mpfr_mul_ui(ang, pi, 2 * i, MPFR_RNDN);
        mpfr_div_ui(ang, ang, a.level(), MPFR_RNDN);
        mpfr_sin_cos(s, c, ang, MPFR_RNDN);
        mpfr_set_z(t, num[i].get_mpz_t(), MPFR_RNDN);
        mpfr_fma(re, t, c, re, MPFR_RNDN);
        mpfr_fma(im, t, s, im, MPFR_RNDN);
    }
    mpfr_div_z(re, re, a.denominator().get_mpz_t(), MPFR_RNDN);
    mpfr_div_z(im, im, a.denominator().get_mpz_t(), MPFR_RNDN);
    NumericValue out;
    auto fmt = [digits](mpfr_t x) {
        char* buf = nullptr;
        if (mpfr_cmpabs_ui(x, 0) != 0 && mpfr_get_exp(x) < -(digits * 3 + 8)) mpfr_set_zero(x, 1);
        mpfr_asprintf(&buf, "%.*Rg", digits, x);
        std::string s = buf;
        mpfr_free_str(buf);
        if (s == "-0") s = "0";
        return s;
    };
    out.value = {mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN)};
    out.re = fmt(re);
    out.im = fmt(im);
    mpfr_clears(re, im, ang, c, s, t, pi, static_cast<mpfr_ptr>(nullptr));
    return out;
}

// ---- PrimeField ------------------------------------------------------------

PrimeField::PrimeField(u64 ell) : ell_(ell), bsgs_(std::make_shared<Bsgs>()) {
    if (!is_prime(ell)) fail("domain", std::to_string(ell) + " is not prime");
    if (ell >= (1ULL << 32)) fail("domain", "prime field modulus must be below 2^32");
    if (ell == 2) {
        g_ = 1;
        return;
    }
    auto qs = prime_factors(ell - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (u64 q : qs)
            if (pow(g, (ell - 1) / q) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            g_ = g;
            break;
        }
    }
}

u64 PrimeField::inv(u64 a) const {
    if (a % ell_ == 0) fail("division_by_zero", "inverse of zero in F_" + std::to_string(ell_));
    return pow(a, ell_ - 2);
}

u64 PrimeField::from_rational(const Rational& q) const {
    Integer n = q.get_num() % static_cast<unsigned long>(ell_);
    Integer d = q.get_den() % static_cast<unsigned long>(ell_);
    u64 nn = reduce(n.get_si()), dd = reduce(d.get_si());
    return mul(nn, inv(dd));
}

u64 PrimeField::element_of_order(u64 n) const {
    if ((ell_ - 1) % n != 0)
        fail("domain", "no element of order " + std::to_string(n) + " in F_" + std::to_string(ell_));
    return pow(g_, (ell_ - 1) / n);
}

u64 PrimeField::dlog(u64 x) const {
    x %= ell_;
    if (x == 0) fail("domain", "discrete log of zero");
    auto& B = *bsgs_;
    std::call_once(B.once, [this, &B] {
        B.m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(ell_ - 1)))) + 1;
        B.baby.reserve(B.m * 2);
        u64 cur = 1;
        for (u64 j = 0; j < B.m; ++j) {
            B.baby.emplace(cur, j);
            cur = mul(cur, g_);
        }
    });
    const u64 factor = inv(pow(g_, B.m));
    u64 y = x;
    for (u64 i = 0; i <= B.m; ++i) {
        auto it = B.baby.find(y);
        if (it != B.baby.end()) return (i * B.m + it->second) % (ell_ - 1);
        y = mul(y, factor);
    }
    fail("internal", "discrete log failed");
}

u64 PrimeField::pth_root(u64 lambda, u64 p) const {
    lambda %= ell_;
    if (lambda == 0) return 0;
    if ((ell_ - 1) % p != 0) {
        // p-th powering is a bijection
        u64 e = 0;
        for (u64 k = 1; k < p; ++k)
            if (((ell_ - 1) * k + 1) % p == 0) {
                e = ((ell_ - 1) * k + 1) / p;
                break;
            }
        return pow(lambda, e);
    }
    if (pow(lambda, (ell_ - 1) / p) != 1)
        fail("no_pth_root", "no p-th root: " + std::to_string(lambda) + " has no " + std::to_string(p) +
                                "-th root mod " + std::to_string(ell_));
    u64 k = dlog(lambda);
    return pow(g_, k / p);
}

i64 PrimeField::centered(u64 a) const {
    return a > ell_ / 2 ? static_cast<i64>(a) - static_cast<i64>(ell_) : static_cast<i64>(a);
}

namespace {
void same_modulus(PrimeFieldScalar a, PrimeFieldScalar b) {
    if (a.modulus != b.modulus) fail("backend_mismatch", "prime field moduli differ");
}
} // namespace

PrimeFieldScalar pf_add(PrimeFieldScalar a, PrimeFieldScalar b) {
    same_modulus(a, b);
    return {a.modulus, (a.value + b.value) % a.modulus};
}
PrimeFieldScalar pf_mul(PrimeFieldScalar a, PrimeFieldScalar b) {
    same_modulus(a, b);
    return {a.modulus, mulmod(a.value, b.value, a.modulus)};
}
PrimeFieldScalar pf_inv(PrimeFieldScalar a) { return {a.modulus, PrimeField(a.modulus).inv(a.value)}; }
PrimeFieldScalar pf_pow(PrimeFieldScalar a, u64 e) { return {a.modulus, powmod(a.value, e, a.modulus)}; }
PrimeFieldScalar pf_pth_root(PrimeFieldScalar lambda, u64 p) {
    return {lambda.modulus, PrimeField(lambda.modulus).pth_root(lambda.value, p)};
}

} // namespace solvarep
