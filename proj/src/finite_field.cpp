#include "solvarep/finite_field.hpp"

#include "solvarep/cyclo.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace solvarep {

namespace {

// polynomial arithmetic over F_p on coordinate vectors, used to build F_q
using PP = std::vector<u64>;

PP pp_mulmod(const PP& a, const PP& b, const PP& h, u64 p) {
    const std::size_t k = h.size() - 1;
    std::vector<u64> t(2 * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        if (a[i])
            for (std::size_t j = 0; j < k; ++j) t[i + j] = (t[i + j] + a[i] * b[j]) % p;
    for (std::size_t d = 2 * k - 1; d >= k; --d) {
        u64 c = t[d];
        if (!c) continue;
        for (std::size_t j = 0; j <= k; ++j) t[d - k + j] = (t[d - k + j] + (p - c) * h[j]) % p;
    }
    t.resize(k);
    return t;
}

u64 pp_index(const PP& a, u64 p) {
    u64 v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * p + a[i];
    return v;
}

PP pp_coords(u64 v, u64 p, int k) {
    PP a(k, 0);
    for (int i = 0; i < k; ++i) {
        a[i] = v % p;
        v /= p;
    }
    return a;
}

} // namespace

GFq::GFq(u64 q) : q_(q) {
    auto f = factorize(q);
    if (q < 2 || f.size() != 1) fail("bad_field", "F_q needs a prime power q, got " + std::to_string(q));
    if (q > kMaxOrder) fail("bad_field", "F_q with q > 2^20 is not supported");
    p_ = f[0].first;
    k_ = f[0].second;
    log_.assign(q_, 0);
    exp_.assign(q_, 0);
    if (k_ == 1) {
        h_ = {0, 1};
        PrimeField P(p_);
        u64 g = P.primitive_root(), x = 1;
        for (u64 i = 0; i + 1 < q_; ++i) {
            exp_[i] = x;
            log_[x] = i;
            x = x * g % p_;
        }
        return;
    }
    // first monic irreducible of degree k over F_p, then the first element of order q - 1
    const GFq Fp(p_);
    for (u64 idx = 0;; ++idx) {
        PP h = pp_coords(idx, p_, k_);
        h.push_back(1);
        if (!gfpoly::is_irreducible(Fp, h)) continue;
        bool found = false;
        for (u64 cand = 1; cand < q_ && !found; ++cand) {
            PP g = pp_coords(cand, p_, k_), x = pp_coords(1, p_, k_);
            std::vector<char> seen(q_, 0);
            u64 i = 0;
            for (; i + 1 < q_; ++i) {
                u64 v = pp_index(x, p_);
                if (v == 0 || seen[v]) break;
                seen[v] = 1;
                exp_[i] = v;
                log_[v] = i;
                x = pp_mulmod(x, g, h, p_);
            }
            if (i + 1 == q_ && pp_index(x, p_) == 1) found = true;
        }
        if (!found) fail("internal", "no primitive element in F_" + std::to_string(q_));
        h_ = h;
        return;
    }
}

u64 GFq::add(u64 a, u64 b) const {
    if (k_ == 1) {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 r = 0, w = 1;
    while (a || b) {
        u64 d = (a % p_ + b % p_) % p_;
        r += d * w;
        w *= p_;
        a /= p_;
        b /= p_;
    }
    return r;
}

u64 GFq::neg(u64 a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    u64 r = 0, w = 1;
    while (a) {
        u64 d = a % p_;
        r += (d ? p_ - d : 0) * w;
        w *= p_;
        a /= p_;
    }
    return r;
}

u64 GFq::inv(u64 a) const {
    if (a == 0) fail("domain", "inverse of zero in F_" + std::to_string(q_));
    u64 l = log_[a];
    return exp_[l == 0 ? 0 : q_ - 1 - l];
}

u64 GFq::pow(u64 a, u64 e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[static_cast<u64>((static_cast<unsigned __int128>(log_[a]) * e) % (q_ - 1))];
}

std::vector<u64> GFq::coords(u64 a) const { return pp_coords(a, p_, k_); }

std::string GFq::to_text(u64 a) const {
    if (k_ == 1) return std::to_string(a);
    auto c = coords(a);
    std::string s;
    for (int i = k_ - 1; i >= 0; --i) {
        if (!c[i]) continue;
        if (!s.empty()) s += "+";
        if (i == 0) s += std::to_string(c[i]);
        else {
            if (c[i] != 1) s += std::to_string(c[i]);
            s += i == 1 ? "a" : "a^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

namespace {
std::mutex g_mu;
}

const GFq& gf(u64 q) {
    static std::map<u64, std::unique_ptr<GFq>> cache;
    std::lock_guard<std::mutex> lk(g_mu);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<GFq>(q);
    return *slot;
}

nlohmann::json GFqField::to_json(V a) const {
    if (F->degree() == 1) return a;
    return F->coords(a);
}

const GFqField& gf_field(u64 q) {
    static std::map<u64, std::unique_ptr<GFqField>> cache;
    const GFq& F = gf(q);
    std::lock_guard<std::mutex> lk(g_mu);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<GFqField>(F);
    return *slot;
}

// ---- polynomials over F_q --------------------------------------------------

namespace gfpoly {

void trim(P& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

P mul(const GFq& F, const P& a, const P& b) {
    if (a.empty() || b.empty()) return {};
    P r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    trim(r);
    return r;
}

P sub(const GFq& F, P a, const P& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
    trim(a);
    return a;
}

P mod(const GFq& F, P a, const P& m) {
    trim(a);
    if (m.empty()) fail("domain", "polynomial division by zero");
    const u64 li = F.inv(m.back());
    while (a.size() >= m.size()) {
        u64 c = F.mul(a.back(), li);
        std::size_t s = a.size() - m.size();
        for (std::size_t j = 0; j < m.size(); ++j) a[s + j] = F.sub(a[s + j], F.mul(c, m[j]));
        trim(a);
    }
    return a;
}

P gcd(const GFq& F, P a, P b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        P r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        u64 li = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, li);
    }
    return a;
}

P mulmod(const GFq& F, const P& a, const P& b, const P& m) { return mod(F, mul(F, a, b), m); }

P powmod(const GFq& F, P a, u64 e, const P& m) {
    P r = {1};
    a = mod(F, a, m);
    while (e) {
        if (e & 1) r = mulmod(F, r, a, m);
        e >>= 1;
        if (e) a = mulmod(F, a, a, m);
    }
    return r;
}

// distinct-degree test: no factor of degree <= deg/2
bool is_irreducible(const GFq& F, const P& g) {
    const std::size_t m = g.size() - 1;
    if (m == 0) return false;
    if (m == 1) return true;
    if (g[0] == 0) return false;
    const P Y = {0, 1};
    P x = Y;
    for (std::size_t i = 1; i <= m / 2; ++i) {
        x = powmod(F, x, F.order(), g);
        P d = gcd(F, sub(F, x, Y), g);
        if (d.size() > 1) return false;
    }
    return true;
}

} // namespace gfpoly

// ---- F_{q^m} ---------------------------------------------------------------

GFqExt::GFqExt(const GFq& base, int m) : B_(&base), m_(m) {
    if (m < 1) fail("domain", "extension degree must be positive");
    const u64 q = base.order();
    std::vector<u64> c(m, 0);
    for (;;) {
        gfpoly::P g = c;
        g.push_back(1);
        if (gfpoly::is_irreducible(base, g)) {
            g_ = g;
            return;
        }
        std::size_t i = 0;
        while (i < c.size() && ++c[i] == q) c[i++] = 0;
        if (i == c.size()) fail("internal", "no irreducible polynomial found");
    }
}

mpz_class GFqExt::order() const {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), B_->order(), static_cast<unsigned long>(m_));
    return r;
}

GFqExt::Elem GFqExt::one() const {
    Elem e(m_, 0);
    e[0] = 1;
    return e;
}

GFqExt::Elem GFqExt::from_base(u64 c) const {
    Elem e(m_, 0);
    e[0] = c;
    return e;
}

GFqExt::Elem GFqExt::from_index(const mpz_class& idx) const {
    Elem e(m_, 0);
    mpz_class v = idx, q = static_cast<unsigned long>(B_->order());
    for (int i = 0; i < m_; ++i) {
        mpz_class r = v % q;
        e[i] = r.get_ui();
        v /= q;
    }
    return e;
}

bool GFqExt::is_base(const Elem& a) const {
    for (int i = 1; i < m_; ++i)
        if (a[i]) return false;
    return true;
}

GFqExt::Elem GFqExt::add(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (int i = 0; i < m_; ++i) r[i] = B_->add(a[i], b[i]);
    return r;
}

GFqExt::Elem GFqExt::sub(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (int i = 0; i < m_; ++i) r[i] = B_->sub(a[i], b[i]);
    return r;
}

GFqExt::Elem GFqExt::neg(const Elem& a) const {
    Elem r(m_);
    for (int i = 0; i < m_; ++i) r[i] = B_->neg(a[i]);
    return r;
}

GFqExt::Elem GFqExt::mul(const Elem& a, const Elem& b) const {
    const GFq& F = *B_;
    std::vector<u64> t(2 * m_ - 1, 0);
    for (int i = 0; i < m_; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < m_; ++j)
            if (b[j]) t[i + j] = F.add(t[i + j], F.mul(a[i], b[j]));
    }
    for (int d = 2 * m_ - 2; d >= m_; --d) {
        u64 c = t[d];
        if (!c) continue;
        for (int j = 0; j < m_; ++j) t[d - m_ + j] = F.sub(t[d - m_ + j], F.mul(c, g_[j]));
    }
    t.resize(m_);
    return t;
}

GFqExt::Elem GFqExt::pow(const Elem& a, const mpz_class& e) const {
    Elem r = one();
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
}

bool GFqExt::is_zero(const Elem& a) const {
    for (u64 c : a)
        if (c) return false;
    return true;
}

bool GFqExt::is_one(const Elem& a) const {
    if (a[0] != 1) return false;
    return is_base(a);
}

const GFqExt& gf_ext(u64 q, int m) {
    static std::map<std::pair<u64, int>, std::unique_ptr<GFqExt>> cache;
    const GFq& F = gf(q);
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[{q, m}];
    if (!slot) slot = std::make_unique<GFqExt>(F, m);
    return *slot;
}

} // namespace solvarep
