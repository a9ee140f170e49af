#include "solvarep/abelian.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "solvarep/catalog.hpp"

namespace solvarep {

namespace {

std::mutex g_cache_mu;

using EPoly = std::vector<Cyclotomic>;

void trim(EPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

EPoly emul(const EPoly& a, const EPoly& b, int level) {
    if (a.empty() || b.empty()) return {};
    EPoly c(a.size() + b.size() - 1, Cyclotomic(level));
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero())
            for (std::size_t j = 0; j < b.size(); ++j)
                if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

// remainder of a modulo a monic m
EPoly emod(EPoly a, const EPoly& m) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm && !a.empty()) {
        Cyclotomic c = a.back();
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t j = 0; j <= dm; ++j) a[shift + j] -= c * m[j];
        trim(a);
    }
    return a;
}

void check_char(u64 n, const FieldDescriptor& F) {
    if (F.kind == FieldDescriptor::Kind::Finite && n % gf(F.q).characteristic() == 0)
        fail("char_divides_n", "characteristic of " + F.name() + " divides " + std::to_string(n));
}

std::string field_key(const FieldDescriptor& F) { return F.name(); }

// [F(zeta_d) : F]
u64 field_degree(u64 d, const FieldDescriptor& F) {
    switch (F.kind) {
    case FieldDescriptor::Kind::Rational: return euler_phi(d);
    case FieldDescriptor::Kind::Real: return d <= 2 ? 1 : 2;
    case FieldDescriptor::Kind::Complex: return 1;
    case FieldDescriptor::Kind::Finite: return mult_order(F.q % d, d);
    }
    return 1;
}

std::string extension_name(u64 d, const FieldDescriptor& F) {
    switch (F.kind) {
    case FieldDescriptor::Kind::Rational: return d <= 2 ? "Q" : "Q(zeta_" + std::to_string(d) + ")";
    case FieldDescriptor::Kind::Real: return d <= 2 ? "R" : "C";
    case FieldDescriptor::Kind::Complex: return "C";
    case FieldDescriptor::Kind::Finite: {
        u64 m = field_degree(d, F);
        mpz_class qm;
        mpz_ui_pow_ui(qm.get_mpz_t(), F.q, m);
        return "F" + qm.get_str();
    }
    }
    return "?";
}

std::vector<Poly> factor_cyclotomic_uncached(u64 n, const FieldDescriptor& F) {
    std::vector<Poly> out;
    const int N = static_cast<int>(n);
    auto base = [&](int level) {
        Poly f;
        f.field = F;
        f.level = level;
        f.d = n;
        return f;
    };
    switch (F.kind) {
    case FieldDescriptor::Kind::Rational: {
        Poly f = base(1);
        for (auto& c : cyclotomic_polynomial(static_cast<unsigned>(n))) f.exact.push_back(Cyclotomic(1, Rational(c)));
        out.push_back(std::move(f));
        break;
    }
    case FieldDescriptor::Kind::Complex:
        for (u64 k = 0; k < n; ++k) {
            if (gcd_u(k, n) != 1) continue;
            Poly f = base(N);
            f.exact = {-Cyclotomic::zeta(N, static_cast<long>(k)), Cyclotomic(N, 1L)};
            out.push_back(std::move(f));
        }
        break;
    case FieldDescriptor::Kind::Real:
        if (n <= 2) {
            Poly f = base(N);
            f.exact = {Cyclotomic(N, n == 1 ? -1L : 1L), Cyclotomic(N, 1L)};
            out.push_back(std::move(f));
            break;
        }
        for (u64 k = 1; 2 * k < n; ++k) {
            if (gcd_u(k, n) != 1) continue;
            Poly f = base(N);
            Cyclotomic t = Cyclotomic::zeta(N, static_cast<long>(k)) + Cyclotomic::zeta(N, -static_cast<long>(k));
            f.exact = {Cyclotomic(N, 1L), -t, Cyclotomic(N, 1L)};
            out.push_back(std::move(f));
        }
        break;
    case FieldDescriptor::Kind::Finite: {
        const u64 q = F.q;
        const int m = static_cast<int>(mult_order(q % n, n));
        const GFqExt& E = gf_ext(q, m);
        const mpz_class qm = E.order();
        const mpz_class cof = (qm - 1) / mpz_class(static_cast<unsigned long>(n));
        const auto primes = prime_factors(n);
        // beta: the first gamma in index order whose power gamma^((q^m - 1)/n) has order exactly n
        GFqExt::Elem beta;
        bool found = false;
        for (mpz_class idx = 1; idx < qm && !found; ++idx) {
            GFqExt::Elem b = E.pow(E.from_index(idx), cof);
            bool ok = !E.is_zero(b);
            for (u64 l : primes)
                if (ok && E.is_one(E.pow(b, mpz_class(static_cast<unsigned long>(n / l))))) ok = false;
            if (ok) {
                beta = b;
                found = true;
            }
        }
        if (!found) fail("internal", "no element of order " + std::to_string(n) + " in the extension");
        std::vector<char> used(n, 0);
        for (u64 j0 = 0; j0 < n; ++j0) {
            if (used[j0] || gcd_u(j0, n) != 1) continue;
            std::vector<GFqExt::Elem> c = {E.one()};
            u64 j = j0;
            do {
                used[j] = 1;
                GFqExt::Elem r = E.pow(beta, mpz_class(static_cast<unsigned long>(j)));
                std::vector<GFqExt::Elem> nc(c.size() + 1, E.zero());
                for (std::size_t i = 0; i < c.size(); ++i) {
                    nc[i + 1] = E.add(nc[i + 1], c[i]);
                    nc[i] = E.sub(nc[i], E.mul(r, c[i]));
                }
                c = std::move(nc);
                j = mulmod(j, q % n, n);
            } while (j != j0);
            Poly f = base(1);
            for (auto& e : c) {
                if (!E.is_base(e)) fail("internal", "factor coefficient outside F_" + std::to_string(q));
                f.finite.push_back(e[0]);
            }
            out.push_back(std::move(f));
        }
        break;
    }
    }
    // all factors have the degree of F(zeta_n) over F
    for (auto& f : out)
        if (f.degree() != field_degree(n, F))
            fail("internal", "factor of Phi_" + std::to_string(n) + " has unexpected degree");
    return out;
}

} // namespace

const CycloField& cyclo_field(int N) {
    static std::map<int, std::unique_ptr<CycloField>> cache;
    if (N < 1) fail("domain", "cyclotomic level must be positive");
    std::lock_guard<std::mutex> lk(g_cache_mu);
    auto& slot = cache[N];
    if (!slot) slot = std::make_unique<CycloField>(N);
    return *slot;
}

// ---- Poly -------------------------------------------------------------------

std::size_t Poly::degree() const {
    std::size_t s = is_finite() ? finite.size() : exact.size();
    return s == 0 ? 0 : s - 1;
}

std::string Poly::to_text() const {
    const std::size_t m = degree();
    std::string out;
    auto mono = [](std::size_t i) { return i == 0 ? std::string() : i == 1 ? std::string("X") : "X^" + std::to_string(i); };
    for (std::size_t i = m + 1; i-- > 0;) {
        if (is_finite()) {
            u64 c = finite[i];
            if (!c) continue;
            if (!out.empty()) out += " + ";
            const GFq& F = gf(field.q);
            bool simple = F.degree() == 1;
            std::string cs = F.to_text(c);
            if (i == 0)
                out += cs;
            else if (c == 1)
                out += mono(i);
            else
                out += (simple ? cs : "(" + cs + ")") + "*" + mono(i);
            continue;
        }
        const Cyclotomic& c = exact[i];
        if (c.is_zero()) continue;
        if (c.is_rational()) {
            Rational v = c.coord(0);
            bool neg = v < 0;
            Rational a = abs(v);
            out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            if (i == 0)
                out += rational_str(a);
            else if (a == 1)
                out += mono(i);
            else
                out += rational_str(a) + "*" + mono(i);
        } else {
            out += out.empty() ? "" : " + ";
            out += "(" + c.to_text() + ")" + (i == 0 ? "" : "*" + mono(i));
        }
    }
    return out.empty() ? "0" : out;
}

nlohmann::json Poly::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    if (is_finite()) {
        const GFqField& f = gf_field(field.q);
        for (u64 c : finite) cs.push_back(f.to_json(c));
    } else {
        for (auto& c : exact) {
            if (field.kind == FieldDescriptor::Kind::Rational)
                cs.push_back(rational_str(c.coord(0)));
            else
                cs.push_back(c.to_json());
        }
    }
    return {{"field", field.name()}, {"d", d}, {"degree", degree()}, {"coefficients", cs}, {"text", to_text()}};
}

bool Poly::operator==(const Poly& o) const {
    if (!(field == o.field) || degree() != o.degree()) return false;
    if (is_finite()) return finite == o.finite;
    const int L = static_cast<int>(lcm_u(level, o.level));
    for (std::size_t i = 0; i < exact.size(); ++i)
        if (exact[i].at_level(L) != o.exact[i].at_level(L)) return false;
    return true;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (!(a.field == b.field)) fail("backend_mismatch", "polynomials over " + a.field.name() + " and " + b.field.name());
    Poly r;
    r.field = a.field;
    r.d = lcm_u(a.d, b.d);
    if (a.is_finite()) {
        r.finite = gfpoly::mul(gf(a.field.q), a.finite, b.finite);
        return r;
    }
    r.level = static_cast<int>(lcm_u(a.level, b.level));
    EPoly x, y;
    for (auto& c : a.exact) x.push_back(c.at_level(r.level));
    for (auto& c : b.exact) y.push_back(c.at_level(r.level));
    r.exact = emul(x, y, r.level);
    return r;
}

Poly xn_minus_1(u64 n, const FieldDescriptor& F) {
    if (n == 0) fail("domain", "X^n - 1 needs n >= 1");
    Poly f;
    f.field = F;
    f.d = n;
    if (F.kind == FieldDescriptor::Kind::Finite) {
        const GFq& Fq = gf(F.q);
        f.finite.assign(n + 1, 0);
        f.finite[0] = Fq.neg(1);
        f.finite[n] = 1;
        return f;
    }
    f.level = F.kind == FieldDescriptor::Kind::Rational ? 1 : static_cast<int>(n);
    f.exact.assign(n + 1, Cyclotomic(f.level));
    f.exact[0] = Cyclotomic(f.level, -1L);
    f.exact[n] = Cyclotomic(f.level, 1L);
    return f;
}

std::vector<Poly> factor_cyclotomic(u64 n, const FieldDescriptor& F) {
    if (n == 0) fail("domain", "Phi_n needs n >= 1");
    if (F.kind == FieldDescriptor::Kind::Finite) gf(F.q);
    check_char(n, F);
    static std::map<std::pair<u64, std::string>, std::vector<Poly>> cache;
    const auto key = std::make_pair(n, field_key(F));
    {
        std::lock_guard<std::mutex> lk(g_cache_mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto out = factor_cyclotomic_uncached(n, F);
    std::lock_guard<std::mutex> lk(g_cache_mu);
    cache.emplace(key, out);
    return out;
}

std::vector<Poly> factor_xn_minus_1(u64 n, const FieldDescriptor& F) {
    if (n == 0) fail("domain", "X^n - 1 needs n >= 1");
    check_char(n, F);
    std::vector<Poly> out;
    const bool lift = F.kind == FieldDescriptor::Kind::Real || F.kind == FieldDescriptor::Kind::Complex;
    for (u64 d : divisors(n))
        for (auto f : factor_cyclotomic(d, F)) {
            if (lift) {
                for (auto& c : f.exact) c = c.at_level(static_cast<int>(n));
                f.level = static_cast<int>(n);
            }
            out.push_back(std::move(f));
        }
    return out;
}

// ---- matrices -----------------------------------------------------------------

std::size_t FieldMatrix::rows() const { return exact ? exact->rows() : finite ? finite->rows() : 0; }

bool FieldMatrix::is_identity() const {
    if (exact) return *exact == ExactMatrix<CycloField>::identity(exact->field(), exact->rows());
    if (finite) return *finite == ExactMatrix<GFqField>::identity(finite->field(), finite->rows());
    return false;
}

FieldMatrix FieldMatrix::pow(long e) const {
    FieldMatrix r;
    if (exact) r.exact = exact->pow(e);
    if (finite) r.finite = finite->pow(e);
    return r;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& b) const {
    FieldMatrix r;
    if (exact && b.exact) {
        if (!exact->field().same(b.exact->field())) fail("backend_mismatch", "matrices over different levels");
        r.exact = *exact * *b.exact;
    } else if (finite && b.finite) {
        if (!finite->field().same(b.finite->field())) fail("backend_mismatch", "matrices over different fields");
        r.finite = *finite * *b.finite;
    } else {
        fail("backend_mismatch", "exact and finite matrices do not multiply");
    }
    return r;
}

bool FieldMatrix::operator==(const FieldMatrix& b) const {
    if (exact && b.exact) return exact->field().same(b.exact->field()) && *exact == *b.exact;
    if (finite && b.finite) return finite->field().same(b.finite->field()) && *finite == *b.finite;
    return false;
}

nlohmann::json FieldMatrix::to_json() const {
    if (exact) return exact->to_json();
    if (finite) return finite->to_json();
    return nullptr;
}

FieldMatrix companion_matrix(const Poly& f) {
    const std::size_t m = f.degree();
    if (m == 0) fail("domain", "companion matrix of a constant");
    FieldMatrix M;
    if (f.is_finite()) {
        const GFqField& K = gf_field(f.field.q);
        if (f.finite.back() != 1) fail("domain", "companion matrix needs a monic polynomial");
        ExactMatrix<GFqField> C(K, m, m);
        for (std::size_t i = 0; i + 1 < m; ++i) C(i + 1, i) = 1;
        for (std::size_t i = 0; i < m; ++i) C(i, m - 1) = K.neg(f.finite[i]);
        M.finite = std::move(C);
    } else {
        const CycloField& K = cyclo_field(f.level);
        if (!f.exact.back().is_one()) fail("domain", "companion matrix needs a monic polynomial");
        ExactMatrix<CycloField> C(K, m, m);
        for (std::size_t i = 0; i + 1 < m; ++i) C(i + 1, i) = K.one();
        for (std::size_t i = 0; i < m; ++i) C(i, m - 1) = -f.exact[i].at_level(f.level);
        M.exact = std::move(C);
    }
    return M;
}

FieldMatrix poly_at(const Poly& f, const FieldMatrix& M) {
    const std::size_t n = M.rows();
    FieldMatrix R;
    if (f.is_finite()) {
        if (!M.finite) fail("backend_mismatch", "finite polynomial at an exact matrix");
        const GFqField& K = M.finite->field();
        ExactMatrix<GFqField> acc(K, n, n);
        for (std::size_t i = f.finite.size(); i-- > 0;) {
            acc = acc * *M.finite;
            ExactMatrix<GFqField> c(K, n, n);
            for (std::size_t k = 0; k < n; ++k) c(k, k) = f.finite[i];
            acc = acc + c;
        }
        R.finite = std::move(acc);
    } else {
        if (!M.exact) fail("backend_mismatch", "exact polynomial at a finite matrix");
        const CycloField& K = M.exact->field();
        ExactMatrix<CycloField> acc(K, n, n);
        for (std::size_t i = f.exact.size(); i-- > 0;) {
            acc = acc * *M.exact;
            ExactMatrix<CycloField> c(K, n, n);
            for (std::size_t k = 0; k < n; ++k) c(k, k) = f.exact[i].at_level(K.N);
            acc = acc + c;
        }
        R.exact = std::move(acc);
    }
    return R;
}

std::vector<CyclicIrrep> cyclic_irreps(u64 n, const FieldDescriptor& F) {
    std::vector<CyclicIrrep> out;
    for (auto& f : factor_xn_minus_1(n, F)) {
        CyclicIrrep r;
        r.factor = f;
        r.matrix = companion_matrix(f);
        r.faithful = f.d == n;
        out.push_back(std::move(r));
    }
    return out;
}

// ---- shapes and groups ----------------------------------------------------------

int AbelianShape::log_order() const {
    int s = 0;
    for (auto [r, l] : components) s += r * l;
    return s;
}

int AbelianShape::exponent_log() const { return components.empty() ? 0 : components.front().first; }

int AbelianShape::a(int r) const {
    for (auto [s, l] : components)
        if (s == r) return l;
    return 0;
}

int AbelianShape::b(int r) const {
    int s = 0;
    for (auto [t, l] : components)
        if (t >= r) s += l;
    return s;
}

int AbelianShape::c(int r) const {
    int s = 0;
    for (auto [t, l] : components)
        if (t < r) s += t * l;
    return s;
}

AbelianShape AbelianShape::from_partition(u64 p, std::vector<int> parts) {
    if (!is_prime(p)) fail("bad_group", "shape prime " + std::to_string(p) + " is not prime");
    std::map<int, int, std::greater<int>> cnt;
    for (int r : parts) {
        if (r < 0) fail("bad_group", "negative exponent in a shape");
        if (r > 0) ++cnt[r];
    }
    AbelianShape s;
    s.p = p;
    for (auto [r, l] : cnt) s.components.push_back({r, l});
    return s;
}

std::string AbelianShape::to_text() const {
    if (components.empty()) return "C1";
    std::string out;
    for (auto [r, l] : components) {
        if (!out.empty()) out += " x ";
        u64 pr = 1;
        for (int i = 0; i < r; ++i) pr *= p;
        out += "C" + std::to_string(pr);
        if (l > 1) out += "^" + std::to_string(l);
    }
    return out;
}

AbelianGroup AbelianGroup::from_shapes(const std::vector<AbelianShape>& shapes) {
    AbelianGroup G;
    for (auto& s : shapes)
        for (auto [r, l] : s.components) {
            u64 pr = 1;
            for (int i = 0; i < r; ++i) pr *= s.p;
            for (int j = 0; j < l; ++j) G.cyclic.push_back(pr);
        }
    return G;
}

AbelianGroup AbelianGroup::parse(const std::string& list) {
    AbelianGroup G;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (...) {
            used = 0;
        }
        if (used != tok.size() || v == 0) fail("bad_group", "invalid invariant '" + tok + "'");
        if (v > 1) G.cyclic.push_back(v);
        tok.clear();
    };
    for (char ch : list) {
        if (ch == ',' || ch == 'x' || ch == ' ' || ch == '*')
            flush();
        else
            tok += ch;
    }
    flush();
    if (G.order() > 1000000) fail("bad_group", "abelian group order above 10^6");
    return G;
}

std::vector<AbelianShape> AbelianGroup::shapes() const {
    std::map<u64, std::vector<int>> parts;
    for (u64 n : cyclic)
        for (auto [p, e] : factorize(n)) parts[p].push_back(e);
    std::vector<AbelianShape> out;
    for (auto& [p, v] : parts) out.push_back(AbelianShape::from_partition(p, v));
    return out;
}

u64 AbelianGroup::order() const {
    u64 n = 1;
    for (u64 c : cyclic) n *= c;
    return n;
}

std::vector<u64> AbelianGroup::element(u64 index) const {
    std::vector<u64> t(cyclic.size());
    for (std::size_t i = 0; i < cyclic.size(); ++i) {
        t[i] = index % cyclic[i];
        index /= cyclic[i];
    }
    return t;
}

u64 AbelianGroup::index(const std::vector<u64>& t) const {
    u64 v = 0;
    for (std::size_t i = cyclic.size(); i-- > 0;) v = v * cyclic[i] + t[i] % cyclic[i];
    return v;
}

u64 AbelianGroup::elt_order(u64 idx) const {
    auto t = element(idx);
    u64 o = 1;
    for (std::size_t i = 0; i < t.size(); ++i) o = lcm_u(o, cyclic[i] / gcd_u(t[i], cyclic[i]));
    return o;
}

std::string AbelianGroup::to_text() const {
    if (cyclic.empty()) return "C1";
    std::string out;
    for (u64 c : cyclic) out += (out.empty() ? "C" : " x C") + std::to_string(c);
    return out;
}

namespace {

void partitions(int n, int maxpart, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int k = std::min(n, maxpart); k >= 1; --k) {
        cur.push_back(k);
        partitions(n - k, k, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<AbelianShape> pgroup_shapes(u64 p, int N) {
    std::vector<std::vector<int>> ps;
    std::vector<int> cur;
    partitions(N, N, cur, ps);
    std::vector<AbelianShape> out;
    for (auto& v : ps) out.push_back(AbelianShape::from_partition(p, v));
    return out;
}

std::vector<AbelianGroup> abelian_groups_of_order(u64 n) {
    if (n == 0) fail("domain", "group order must be positive");
    std::vector<std::vector<AbelianShape>> choices;
    for (auto [p, e] : factorize(n)) choices.push_back(pgroup_shapes(p, e));
    std::vector<AbelianGroup> out;
    std::vector<std::size_t> pick(choices.size(), 0);
    for (;;) {
        std::vector<AbelianShape> s;
        for (std::size_t i = 0; i < choices.size(); ++i) s.push_back(choices[i][pick[i]]);
        out.push_back(AbelianGroup::from_shapes(s));
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return out;
}

std::vector<CyclicQuotient> cyclic_quotients(const AbelianGroup& G) {
    const u64 n = G.order();
    const std::size_t k = G.cyclic.size();
    std::set<std::vector<u64>> seen;
    std::vector<CyclicQuotient> out;
    for (u64 ai = 0; ai < n; ++ai) {
        auto a = G.element(ai);
        const u64 d = G.elt_order(ai);
        CyclicQuotient cq;
        cq.d = d;
        for (std::size_t i = 0; i < k; ++i) cq.image.push_back(a[i] * d / G.cyclic[i] % d);
        for (u64 gi = 0; gi < n; ++gi) {
            auto g = G.element(gi);
            u64 v = 0;
            for (std::size_t i = 0; i < k; ++i) v = (v + cq.image[i] * g[i]) % d;
            if (v == 0) cq.kernel.push_back(gi);
        }
        if (!seen.insert(cq.kernel).second) continue;
        out.push_back(std::move(cq));
    }
    std::stable_sort(out.begin(), out.end(), [](const CyclicQuotient& x, const CyclicQuotient& y) { return x.d < y.d; });
    return out;
}

nlohmann::json AbelianIrrep::to_json(const AbelianGroup& G) const {
    nlohmann::json ker = nlohmann::json::array();
    for (u64 h : quotient.kernel) ker.push_back(G.element(h));
    nlohmann::json gs = nlohmann::json::array();
    for (std::size_t i = 0; i < gens.size(); ++i)
        gs.push_back({{"order", G.cyclic[i]}, {"image", quotient.image[i]}, {"matrix", gens[i].to_json()}});
    return {{"d", quotient.d}, {"kernel_size", quotient.kernel.size()}, {"kernel", ker},
            {"factor", factor.to_json()}, {"degree", degree()}, {"generators", gs}};
}

std::vector<AbelianIrrep> abelian_irreps(const AbelianGroup& G, const FieldDescriptor& F) {
    check_char(G.order(), F);
    std::vector<AbelianIrrep> out;
    for (auto& cq : cyclic_quotients(G))
        for (auto& f : factor_cyclotomic(cq.d, F)) {
            AbelianIrrep r;
            r.quotient = cq;
            r.factor = f;
            FieldMatrix C = companion_matrix(f);
            for (u64 im : cq.image) r.gens.push_back(C.pow(static_cast<long>(im)));
            out.push_back(std::move(r));
        }
    return out;
}

// ---- rational diagram of an abelian p-group -------------------------------------

namespace {

LongPresentation chain_presentation(const std::vector<AbelianShape>& shapes, const std::string& name) {
    LongPresentation pres;
    pres.name = name;
    static const char* letters = "xyzwvutsrqponm";
    int blocks = 0;
    for (auto& s : shapes) {
        if (!is_prime(s.p)) fail("bad_group", "shape prime is not prime");
        for (auto [r, l] : s.components) blocks += l;
    }
    int b = 0;
    for (auto& s : shapes)
        for (auto [r, l] : s.components)
            for (int j = 0; j < l; ++j, ++b) {
                std::string stem = blocks <= 14 ? std::string(1, letters[b]) : "b" + std::to_string(b + 1) + "_";
                for (int a = 1; a <= r; ++a) {
                    std::string g = r == 1 ? stem : stem + std::to_string(a);
                    Word pow;
                    if (a > 1) pow = Word{{pres.rank() - 1, 1}};
                    pres.add_gen(g, static_cast<int>(s.p), pow);
                }
            }
    return pres;
}

} // namespace

LongPresentation abelian_long_presentation(const AbelianShape& shape) { return chain_presentation({shape}, shape.to_text()); }

LongPresentation abelian_long_presentation(const AbelianGroup& G) {
    return chain_presentation(G.shapes(), G.to_text());
}

namespace {

// (1 + x + ... + x^{p-1}) / p at the given level
CycloElement e_of(const PcGroup& G, const CycloField& f, int level, PcGroup::Elt x, u64 p) {
    std::vector<Cyclotomic> dense(G.level_order(level), f.zero());
    PcGroup::Elt y = 0;
    const Cyclotomic w(f.N, Rational(1, static_cast<long>(p)));
    for (u64 k = 0; k < p; ++k) {
        dense[y] += w;
        y = G.mul(y, x);
    }
    return CycloElement::from_dense(G, f, level, dense);
}

std::string elt_label(const PcGroup& G, PcGroup::Elt x) { return G.elt_name(x); }

} // namespace

std::string EProduct::to_text(const PcGroup& G) const {
    std::string out;
    if (!subgroup.empty()) out += "e_K(" + std::to_string(subgroup.size()) + ")";
    for (auto x : plain) out += "e(" + elt_label(G, x) + ")";
    if (primed) out += "e'(" + elt_label(G, *primed) + ")";
    return out.empty() ? "1" : out;
}

CycloElement EProduct::expand(const PcGroup& G, const CycloField& f, int level) const {
    const u64 p = G.rank() ? static_cast<u64>(G.prime(0)) : 1;
    CycloElement e = CycloElement::one(G, f, level);
    if (!subgroup.empty()) {
        auto eK = CycloElement::from_support(G, f, level, subgroup,
                                             Cyclotomic(f.N, Rational(1, static_cast<long>(subgroup.size()))));
        e = e * eK;
    }
    for (auto x : plain) e = e * e_of(G, f, level, x, p);
    if (primed) e = e * (CycloElement::one(G, f, level) - e_of(G, f, level, *primed, p));
    return e.at_level(level);
}

QDiagram::QDiagram(const AbelianShape& shape, RuleMode mode) : shape_(shape) {
    G_ = std::make_unique<PcGroup>(abelian_long_presentation(shape));
    const PcGroup& G = *G_;
    const CycloField& f = cyclo_field(1);
    const u64 p = shape.p;
    const int n = G.rank();
    QNode root;
    root.rule = "root";
    root.e = CycloElement::one(G, f, 0);
    levels_.push_back({root});
    for (int l = 0; l < n; ++l) {
        const PcGroup::Elt u = G.gen(l);
        const std::size_t ord_l = G.level_order(l);
        std::vector<QNode> next;
        auto push = [&](const QNode& parent, EProduct lab, const std::string& rule, int pid) {
            QNode c;
            c.level = l + 1;
            c.id = static_cast<int>(next.size());
            c.parents = {pid};
            c.rule = rule;
            c.e = rule == "rule3" ? parent.e.at_level(l + 1) : lab.expand(G, f, l + 1);
            c.label = std::move(lab);
            next.push_back(std::move(c));
        };
        for (const QNode& node : levels_[l]) {
            const int pid = node.id;
            if (!node.label.primed) {
                EProduct a = node.label, b = node.label;
                a.plain.push_back(u);
                b.primed = u;
                push(node, a, "rule2", pid);
                push(node, b, "rule2", pid);
                continue;
            }
            const PcGroup::Elt z = *node.label.primed;
            bool stays = false;
            PcGroup::Elt w = u;
            if (mode == RuleMode::Literal) {
                PcGroup::Elt y = G.pow(u, static_cast<long>(p));
                for (u64 s = 1; y != 0 || s == 1; ++s) {
                    if (y == z) stays = true;
                    if (y == 0) break;
                    y = G.pow(y, static_cast<long>(p));
                }
            } else {
                // K = {g in G_l : g e = e}; coefficients of e are constant on K-cosets
                std::vector<char> inK(ord_l, 0);
                const Cyclotomic e1 = node.e.coeff(0);
                for (PcGroup::Elt g = 0; g < ord_l; ++g) inK[g] = node.e.coeff(g) == e1;
                stays = true;
                for (PcGroup::Elt v = 0; v < ord_l && stays; ++v) {
                    PcGroup::Elt cand = G.mul(u, v);
                    if (inK[G.pow(cand, static_cast<long>(p))]) {
                        w = cand;
                        stays = false;
                    }
                }
            }
            if (stays) {
                push(node, node.label, "rule3", pid);
                continue;
            }
            PcGroup::Elt zi = 0;
            for (u64 i = 0; i < p; ++i) {
                EProduct a = node.label;
                a.plain.push_back(G.mul(zi, w));
                push(node, a, "rule4", pid);
                zi = G.mul(zi, z);
            }
        }
        // children are nonzero idempotents summing to their parent
        CycloElement total(G, f, l + 1);
        std::vector<CycloElement> sums(levels_[l].size(), CycloElement(G, f, l + 1));
        for (const QNode& c : next) {
            const std::string where = "level " + std::to_string(l + 1) + " node " + c.label.to_text(G);
            if (c.e.is_zero() || !c.e.is_idempotent()) fail("rule_failure", where + " is not a nonzero idempotent");
            sums[c.parents[0]] += c.e;
            total += c.e;
        }
        for (std::size_t k = 0; k < sums.size(); ++k)
            if (sums[k] != levels_[l][k].e.at_level(l + 1))
                fail("rule_failure", "children of level " + std::to_string(l) + " node " + std::to_string(k) +
                                         " do not sum to it");
        if (total != CycloElement::one(G, f, l + 1))
            fail("rule_failure", "level " + std::to_string(l + 1) + " is not a partition of 1");
        for (std::size_t i = 0; i < next.size(); ++i)
            for (std::size_t j = i + 1; j < next.size(); ++j)
                if (next[i].parents == next[j].parents && !(next[i].e * next[j].e).is_zero())
                    fail("rule_failure", "siblings at level " + std::to_string(l + 1) + " are not orthogonal");
        levels_.push_back(std::move(next));
    }
}

std::unique_ptr<QDiagram> pgroup_pci_diagram_Q(const AbelianShape& shape, RuleMode mode) {
    return std::make_unique<QDiagram>(shape, mode);
}

nlohmann::json QDiagram::to_json() const {
    nlohmann::json lv = nlohmann::json::array();
    for (int i = 0; i <= depth(); ++i) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const QNode& c : levels_[i])
            nodes.push_back({{"id", c.id},
                             {"label", c.label.to_text(*G_)},
                             {"rule", c.rule},
                             {"parents", c.parents},
                             {"idempotent", c.e.to_json()}});
        lv.push_back({{"level", i}, {"order", G_->level_order(i)}, {"nodes", nodes}});
    }
    return {{"group", shape_.to_text()}, {"p", shape_.p}, {"field", "Q"},
            {"presentation", print_presentation(G_->presentation())}, {"levels", lv}};
}

std::string QDiagram::to_text() const {
    std::ostringstream os;
    os << "PCI diagram of " << shape_.to_text() << " over Q\n";
    for (int i = 0; i <= depth(); ++i) {
        os << "level " << i << " (|G_" << i << "| = " << G_->level_order(i) << "): " << levels_[i].size()
           << " nodes\n";
        for (const QNode& c : levels_[i]) {
            os << "  [" << c.id << "] " << c.rule << " parents=";
            for (std::size_t k = 0; k < c.parents.size(); ++k) os << (k ? "," : "") << c.parents[k];
            os << " " << c.label.to_text(*G_) << "\n";
        }
    }
    return os.str();
}

std::string QDiagram::to_dot() const {
    std::ostringstream os;
    os << "digraph PCI {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n";
    for (int i = 0; i <= depth(); ++i) {
        os << "  { rank=same;";
        for (const QNode& c : levels_[i]) os << " n" << i << "_" << c.id << ";";
        os << " }\n";
        for (const QNode& c : levels_[i])
            os << "  n" << i << "_" << c.id << " [label=\"" << c.label.to_text(*G_) << "\"];\n";
    }
    for (int i = 1; i <= depth(); ++i)
        for (const QNode& c : levels_[i])
            for (int par : c.parents) os << "  n" << i - 1 << "_" << par << " -> n" << i << "_" << c.id << ";\n";
    os << "}\n";
    return os.str();
}

CycloElement pullback_idempotent(const CycloElement& lift, const std::vector<PcGroup::Elt>& K) {
    const PcGroup& G = lift.group();
    const CycloField& f = lift.field();
    std::vector<PcGroup::Elt> k = K;
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    if (k.empty() || k.front() != 0) fail("not_subgroup", "K must contain the identity");
    int level = lift.level();
    for (auto x : k) level = std::max(level, G.level_of(x));
    std::vector<char> in(G.level_order(level), 0);
    for (auto x : k) in[x] = 1;
    for (auto x : k)
        for (auto y : k)
            if (!in[G.mul(x, y)]) fail("not_subgroup", "K is not closed under multiplication");
    for (int g = 0; g < level; ++g)
        for (auto x : k)
            if (!in[G.conj(x, G.gen(g))]) fail("not_normal", "K is not normal");
    const auto eK = CycloElement::from_support(G, f, level, k, Cyclotomic(f.N, Rational(1, static_cast<long>(k.size()))));
    const CycloElement lv = lift.at_level(level);
    CycloElement e = eK * lv;
    if (e.is_zero() || !e.is_idempotent()) fail("not_idempotent", "image in F[G/K] is not a nonzero idempotent");
    // a second lift: the terms of the first shifted inside their K-cosets
    if (k.size() > 1) {
        CycloElement other = lv.right_mul(k[1]);
        if (eK * other != e) fail("internal", "pull back depends on the lift");
    }
    return e;
}

// ---- Newton idempotents -------------------------------------------------------------

FactorIdempotent pci_from_factor(const Poly& f, u64 n) {
    if (n == 0) fail("domain", "C_n needs n >= 1");
    check_char(n, f.field);
    const std::size_t m = f.degree();
    if (m == 0) fail("not_a_factor", "constant polynomial");
    FactorIdempotent out;
    out.G = std::make_unique<PcGroup>(cyclic_presentation(static_cast<unsigned>(n)));
    const PcGroup& G = *out.G;
    const int top = G.rank();
    const PcGroup::Elt x = top ? G.gen(top - 1) : 0;
    std::vector<PcGroup::Elt> xk(n);
    {
        PcGroup::Elt y = 0;
        for (u64 k = 0; k < n; ++k) {
            xk[k] = y;
            y = G.mul(y, x);
        }
    }
    if (f.is_finite()) {
        const GFq& F = gf(f.field.q);
        const GFqField& K = gf_field(f.field.q);
        if (f.finite.back() != 1) fail("not_a_factor", "factor must be monic");
        if (!gfpoly::mod(F, xn_minus_1(n, f.field).finite, f.finite).empty())
            fail("not_a_factor", f.to_text() + " does not divide X^" + std::to_string(n) + " - 1");
        const u64 c0inv = F.inv(f.finite[0]);
        std::vector<u64> g(m + 1); // reciprocal, monic: X^m + g_1 X^{m-1} + ... + g_m
        for (std::size_t i = 1; i <= m; ++i) g[i] = F.mul(f.finite[i], c0inv);
        std::vector<u64> P(n);
        P[0] = F.from_int(static_cast<long>(m % F.characteristic()));
        for (u64 k = 1; k < n; ++k) {
            u64 s = 0;
            for (u64 i = 1; i <= std::min<u64>(k - 1, m); ++i) s = F.add(s, F.mul(g[i], P[k - i]));
            if (k <= m) s = F.add(s, F.mul(F.from_int(static_cast<long>(k % F.characteristic())), g[k]));
            P[k] = F.neg(s);
        }
        const u64 ninv = F.inv(F.from_int(static_cast<long>(n % F.characteristic())));
        std::vector<u64> dense(G.order(), 0);
        for (u64 k = 0; k < n; ++k) dense[xk[k]] = F.mul(P[k], ninv);
        auto e = AlgebraElement<GFqField>::from_dense(G, K, top, dense);
        std::vector<u64> fx(G.order(), 0);
        for (std::size_t i = 0; i <= m; ++i) fx[xk[i % n]] = F.add(fx[xk[i % n]], f.finite[i]);
        auto fe = AlgebraElement<GFqField>::from_dense(G, K, top, fx);
        if (e.is_zero() || !e.is_idempotent() || !(e * fe).is_zero())
            fail("internal", "Newton idempotent check failed for " + f.to_text());
        for (u64 k = 0; k < n; ++k) out.power_sums.push_back(F.to_text(P[k]));
        out.finite = std::move(e);
        return out;
    }
    const int L = f.level;
    const CycloField& K = cyclo_field(L);
    EPoly fe;
    for (auto& c : f.exact) fe.push_back(c.at_level(L));
    if (!fe.back().is_one()) fail("not_a_factor", "factor must be monic");
    {
        EPoly xn(n + 1, Cyclotomic(L));
        xn[0] = Cyclotomic(L, -1L);
        xn[n] = Cyclotomic(L, 1L);
        if (!emod(xn, fe).empty()) fail("not_a_factor", f.to_text() + " does not divide X^" + std::to_string(n) + " - 1");
    }
    const Cyclotomic c0inv = fe[0].inv();
    std::vector<Cyclotomic> g(m + 1, Cyclotomic(L));
    for (std::size_t i = 1; i <= m; ++i) g[i] = fe[i] * c0inv;
    std::vector<Cyclotomic> P(n, Cyclotomic(L));
    P[0] = Cyclotomic(L, static_cast<long>(m));
    for (u64 k = 1; k < n; ++k) {
        Cyclotomic s(L);
        for (u64 i = 1; i <= std::min<u64>(k - 1, m); ++i) s += g[i] * P[k - i];
        if (k <= m) s += g[k].scaled(Rational(static_cast<long>(k)));
        P[k] = -s;
    }
    std::vector<Cyclotomic> dense(G.order(), K.zero());
    const Rational inv_n(1, static_cast<long>(n));
    for (u64 k = 0; k < n; ++k) dense[xk[k]] = P[k].scaled(inv_n);
    auto e = CycloElement::from_dense(G, K, top, dense);
    std::vector<Cyclotomic> fx(G.order(), K.zero());
    for (std::size_t i = 0; i <= m; ++i) fx[xk[i % n]] += fe[i];
    auto fxe = CycloElement::from_dense(G, K, top, fx);
    if (e.is_zero() || !e.is_idempotent() || !(e * fxe).is_zero())
        fail("internal", "Newton idempotent check failed for " + f.to_text());
    for (auto& v : P) out.power_sums.push_back(v.to_text());
    out.exact = std::move(e);
    return out;
}

// ---- Wedderburn counts ----------------------------------------------------------

nlohmann::json WedderburnReport::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (auto& t : terms) a.push_back({{"d", t.d}, {"copies", t.copies}, {"field", t.field}});
    return a;
}

nlohmann::json WedderburnReport::checks_json() const {
    nlohmann::json cf = nlohmann::json::array();
    for (auto& c : closed_forms)
        cf.push_back({{"p", c.p},
                      {"r", c.r},
                      {"oracle", c.oracle},
                      {"theorem", c.theorem.get_str()},
                      {"corollary", c.corollary.get_str()},
                      {"theorem_matches", c.theorem_matches},
                      {"corollary_matches", c.corollary_matches}});
    return {{"field", field.name()}, {"dimension_ok", dimension_ok}, {"quotients_ok", quotients_ok},
            {"closed_forms", cf}};
}

WedderburnReport wedderburn_counts(const AbelianGroup& G, const FieldDescriptor& F) {
    const u64 n = G.order();
    check_char(n, F);
    WedderburnReport rep;
    rep.field = F;
    std::map<u64, u64> count;
    for (u64 g = 0; g < n; ++g) ++count[G.elt_order(g)];
    u64 dim = 0;
    for (auto [d, nd] : count) {
        WedderburnTerm t;
        t.d = d;
        t.field_degree = field_degree(d, F);
        if (nd % t.field_degree) fail("internal", "element count not divisible by the field degree");
        t.copies = nd / t.field_degree;
        t.field = extension_name(d, F);
        dim += t.copies * t.field_degree;
        rep.terms.push_back(t);
    }
    rep.dimension_ok = dim == n;
    if (F.kind == FieldDescriptor::Kind::Rational) {
        std::map<u64, u64> quot;
        for (auto& cq : cyclic_quotients(G)) ++quot[cq.d];
        rep.quotients_ok = quot.size() == rep.terms.size();
        for (auto& t : rep.terms) rep.quotients_ok = rep.quotients_ok && quot[t.d] == t.copies;
        auto sh = G.shapes();
        if (sh.size() == 1) {
            const AbelianShape& s = sh[0];
            const u64 p = s.p;
            for (int r = 1; r <= s.exponent_log(); ++r) {
                ClosedFormCheck c;
                c.p = p;
                c.r = r;
                u64 pr = 1;
                for (int i = 0; i < r; ++i) pr *= p;
                c.oracle = count.count(pr) ? count[pr] / euler_phi(pr) : 0;
                mpz_class geo, pw;
                mpz_ui_pow_ui(geo.get_mpz_t(), p, static_cast<unsigned long>(s.b(r)));
                geo = (geo - 1) / mpz_class(static_cast<unsigned long>(p - 1));
                const int br1 = r >= 2 ? s.b(r - 1) : s.b(1);
                mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(s.c(r) + (r - 1) * br1));
                c.theorem = pw * geo;
                mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(s.c(r) + (r - 1) * (s.b(r) - 1)));
                c.corollary = pw * geo;
                c.theorem_matches = c.theorem == mpz_class(static_cast<unsigned long>(c.oracle));
                c.corollary_matches = c.corollary == mpz_class(static_cast<unsigned long>(c.oracle));
                rep.closed_forms.push_back(c);
            }
        }
    }
    return rep;
}

} // namespace solvarep
