#pragma once

#include <algorithm>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "solvarep/cyclo.hpp"
#include "solvarep/pcgroup.hpp"

namespace solvarep {

// ---- scalar backends ------------------------------------------------------
// A backend exposes V plus zero/one/from_int/from_rational/zeta and the field
// operations. zeta(k) is the image of zeta_N^k.

struct CycloField {
    using V = Cyclotomic;
    int N = 1;

    CycloField() = default;
    explicit CycloField(int n) : N(n) { cyclo_level(n); }

    V zero() const { return Cyclotomic(N); }
    V one() const { return Cyclotomic(N, 1L); }
    V from_int(long v) const { return Cyclotomic(N, v); }
    V from_rational(const Rational& q) const { return Cyclotomic(N, q); }
    V zeta(long k) const { return Cyclotomic::zeta(N, k); }
    V add(const V& a, const V& b) const { return a + b; }
    V sub(const V& a, const V& b) const { return a - b; }
    V mul(const V& a, const V& b) const { return a * b; }
    V neg(const V& a) const { return -a; }
    V inv(const V& a) const { return a.inv(); }
    void add_to(V& acc, const V& a, const V& b) const { acc += a * b; }
    bool is_zero(const V& a) const { return a.is_zero(); }
    bool eq(const V& a, const V& b) const { return a == b; }
    bool same(const CycloField& o) const { return N == o.N; }
    std::string backend() const { return "cyclotomic:" + std::to_string(N); }
    nlohmann::json to_json(const V& a) const { return a.to_json(); }
    std::string to_text(const V& a) const { return a.to_text(); }
};

struct ModField {
    using V = u64;
    PrimeField P;
    int N = 1;
    u64 omega = 1; // fixed element of order N, the image of zeta_N

    ModField() = default;
    ModField(u64 ell, int n);

    u64 modulus() const { return P.modulus(); }
    V zero() const { return 0; }
    V one() const { return 1; }
    V from_int(long v) const { return P.reduce(v); }
    V from_rational(const Rational& q) const { return P.from_rational(q); }
    V zeta(long k) const { return P.pow(omega, static_cast<u64>(mod_floor(k, N))); }
    V add(V a, V b) const { return P.add(a, b); }
    V sub(V a, V b) const { return P.sub(a, b); }
    V mul(V a, V b) const { return P.mul(a, b); }
    V neg(V a) const { return P.neg(a); }
    V inv(V a) const { return P.inv(a); }
    void add_to(V& acc, V a, V b) const { acc = P.add(acc, P.mul(a, b)); }
    bool is_zero(V a) const { return a == 0; }
    bool eq(V a, V b) const { return a == b; }
    bool same(const ModField& o) const { return modulus() == o.modulus() && omega == o.omega; }
    std::string backend() const { return "modl:" + std::to_string(modulus()); }
    nlohmann::json to_json(V a) const { return a; }
    std::string to_text(V a) const { return std::to_string(a); }
    // Reduction of an exact value whose denominators are prime to ell.
    V reduce(const Cyclotomic& a) const;
};

namespace detail {
using CycloTerms = std::vector<std::pair<PcGroup::Elt, Cyclotomic>>;
// Convolution over Q(zeta_N) with machine-integer accumulation; nullopt when
// the coefficient bounds do not fit, so the caller falls back to Cyclotomic.
std::optional<CycloTerms> cyclo_convolve(const PcGroup& G, int N, std::size_t target_order, const CycloTerms& a,
                                         const CycloTerms& b);
} // namespace detail

// ---- group algebra elements ----------------------------------------------
// Elements keep raw pointers to their group and backend; both must outlive them.

template <class F>
class AlgebraElement {
public:
    using V = typename F::V;
    using Elt = PcGroup::Elt;
    using Term = std::pair<Elt, V>;

    AlgebraElement() = default;
    AlgebraElement(const PcGroup& G, const F& f, int level) : G_(&G), f_(&f), level_(level) {}

    static AlgebraElement delta(const PcGroup& G, const F& f, Elt g, int level = -1) {
        AlgebraElement a(G, f, level < 0 ? G.level_of(g) : level);
        a.check_index(g);
        a.terms_.push_back({g, f.one()});
        return a;
    }
    static AlgebraElement one(const PcGroup& G, const F& f, int level = 0) { return delta(G, f, 0, level); }
    // sum of the given elements with a common coefficient
    static AlgebraElement from_support(const PcGroup& G, const F& f, int level, std::vector<Elt> support,
                                       const V& c) {
        AlgebraElement a(G, f, level);
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        if (f.is_zero(c)) return a;
        for (Elt g : support) {
            a.check_index(g);
            a.terms_.push_back({g, c});
        }
        return a;
    }
    // Class sum of g in G_level, embedded in G_level.
    static AlgebraElement class_sum(const PcGroup& G, const F& f, int level, Elt g) {
        return from_support(G, f, level, G.class_sum_support(level, g), f.one());
    }
    static AlgebraElement from_dense(const PcGroup& G, const F& f, int level, const std::vector<V>& c) {
        AlgebraElement a(G, f, level);
        for (Elt g = 0; g < c.size(); ++g)
            if (!f.is_zero(c[g])) {
                a.check_index(g);
                a.terms_.push_back({g, c[g]});
            }
        return a;
    }

    const PcGroup& group() const { return *G_; }
    const F& field() const { return *f_; }
    int level() const { return level_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }

    V coeff(Elt g) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), g,
                                   [](const Term& t, Elt x) { return t.first < x; });
        return it != terms_.end() && it->first == g ? it->second : f_->zero();
    }
    std::vector<V> dense() const {
        std::vector<V> out(G_->level_order(level_), f_->zero());
        for (auto& [g, c] : terms_) out[g] = c;
        return out;
    }

    AlgebraElement at_level(int j) const {
        if (j < level_) {
            for (auto& t : terms_)
                if (t.first >= G_->level_order(j)) fail("domain", "support escapes level " + std::to_string(j));
        }
        AlgebraElement r = *this;
        r.level_ = j;
        return r;
    }

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) { return a.combine(b, false); }
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return a.combine(b, true); }
    AlgebraElement operator-() const { return scale(f_->neg(f_->one())); }
    AlgebraElement& operator+=(const AlgebraElement& b) { return *this = *this + b; }
    AlgebraElement& operator-=(const AlgebraElement& b) { return *this = *this - b; }

    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
        a.check_compatible(b);
        const int lvl = std::max(a.level_, b.level_);
        AlgebraElement r(*a.G_, *a.f_, lvl);
        if (a.is_zero() || b.is_zero()) return r;
        const F& f = *a.f_;
        const PcGroup& G = *a.G_;
        if constexpr (std::is_same_v<F, CycloField>) {
            auto fast = detail::cyclo_convolve(G, f.N, G.level_order(lvl), a.terms_, b.terms_);
            if (fast) {
                r.terms_ = std::move(*fast);
                return r;
            }
        }
        std::vector<V> acc(G.level_order(lvl), f.zero());
        std::vector<char> hit(acc.size(), 0);
        for (auto& [g, x] : a.terms_)
            for (auto& [h, y] : b.terms_) {
                Elt gh = G.mul(g, h);
                f.add_to(acc[gh], x, y);
                hit[gh] = 1;
            }
        for (Elt t = 0; t < acc.size(); ++t)
            if (hit[t] && !f.is_zero(acc[t])) r.terms_.push_back({t, std::move(acc[t])});
        return r;
    }
    AlgebraElement& operator*=(const AlgebraElement& b) { return *this = *this * b; }

    AlgebraElement scale(const V& s) const {
        AlgebraElement r(*G_, *f_, level_);
        if (f_->is_zero(s)) return r;
        r.terms_.reserve(terms_.size());
        for (auto& [g, c] : terms_) r.terms_.push_back({g, f_->mul(s, c)});
        return r;
    }
    // sum a_h h  ->  sum a_h g^-1 h g
    AlgebraElement conj_by(Elt g) const {
        AlgebraElement r(*G_, *f_, std::max(level_, G_->level_of(g)));
        for (auto& [h, c] : terms_) r.terms_.push_back({G_->conj(h, g), c});
        std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        return r;
    }
    // left multiplication by a single group element
    AlgebraElement left_mul(Elt g) const {
        AlgebraElement r(*G_, *f_, std::max(level_, G_->level_of(g)));
        for (auto& [h, c] : terms_) r.terms_.push_back({G_->mul(g, h), c});
        std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        return r;
    }
    AlgebraElement right_mul(Elt g) const {
        AlgebraElement r(*G_, *f_, std::max(level_, G_->level_of(g)));
        for (auto& [h, c] : terms_) r.terms_.push_back({G_->mul(h, g), c});
        std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        return r;
    }

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t k = 0; k < a.terms_.size(); ++k)
            if (a.terms_[k].first != b.terms_[k].first || !a.f_->eq(a.terms_[k].second, b.terms_[k].second))
                return false;
        return true;
    }
    friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

    bool is_idempotent() const { return *this * *this == *this; }
    // commutes with x_1..x_j, which generate G_j
    bool is_central_at(int j) const {
        if (j < level_) at_level(j);
        for (int k = 0; k < j; ++k)
            if (conj_by(G_->gen(k)) != *this) return false;
        return true;
    }

    std::string to_text() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [g, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + f_->to_text(c) + ")*" + G_->elt_name(g);
        }
        return out;
    }
    nlohmann::json to_json() const {
        nlohmann::json terms = nlohmann::json::array();
        for (auto& [g, c] : terms_) terms.push_back({{"elt", G_->elt_name(g)}, {"coef", f_->to_json(c)}});
        return {{"level", level_}, {"backend", f_->backend()}, {"terms", terms}};
    }

private:
    const PcGroup* G_ = nullptr;
    const F* f_ = nullptr;
    int level_ = 0;
    std::vector<Term> terms_; // ascending by element, no zero coefficients

    void check_index(Elt g) const {
        if (g >= G_->level_order(level_)) fail("domain", "element index outside level " + std::to_string(level_));
    }
    void check_compatible(const AlgebraElement& b) const {
        if (G_ != b.G_) fail("backend_mismatch", "group algebra elements over different groups");
        if (!f_->same(*b.f_)) fail("backend_mismatch", "mixed scalar backends " + f_->backend() + " and " + b.f_->backend());
    }
    AlgebraElement combine(const AlgebraElement& b, bool subtract) const {
        check_compatible(b);
        AlgebraElement r(*G_, *f_, std::max(level_, b.level_));
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < terms_.size() && terms_[i].first < b.terms_[j].first)) {
                r.terms_.push_back(terms_[i++]);
            } else if (i == terms_.size() || b.terms_[j].first < terms_[i].first) {
                auto& t = b.terms_[j++];
                r.terms_.push_back({t.first, subtract ? f_->neg(t.second) : t.second});
            } else {
                V s = subtract ? f_->sub(terms_[i].second, b.terms_[j].second)
                               : f_->add(terms_[i].second, b.terms_[j].second);
                if (!f_->is_zero(s)) r.terms_.push_back({terms_[i].first, std::move(s)});
                ++i;
                ++j;
            }
        }
        return r;
    }
};

using CycloElement = AlgebraElement<CycloField>;
using ModElement = AlgebraElement<ModField>;

// s with a = s*b, or nullopt; b must be nonzero.
template <class F>
std::optional<typename F::V> try_scalar_ratio(const AlgebraElement<F>& a, const AlgebraElement<F>& b) {
    if (b.is_zero()) fail("domain", "scalar_ratio with zero denominator");
    const F& f = b.field();
    if (a.is_zero()) return f.zero();
    const auto& [g0, c0] = b.terms().front();
    auto s = f.mul(a.coeff(g0), f.inv(c0));
    if (a == b.scale(s)) return s;
    return std::nullopt;
}

template <class F>
typename F::V scalar_ratio(const AlgebraElement<F>& a, const AlgebraElement<F>& b) {
    auto s = try_scalar_ratio(a, b);
    if (!s) fail("not_proportional", "elements are not proportional");
    return *s;
}

// ---- dense exact matrices ---------------------------------------------------

template <class F>
class ExactMatrix {
public:
    using V = typename F::V;

    ExactMatrix() = default;
    ExactMatrix(const F& f, std::size_t rows, std::size_t cols)
        : f_(&f), rows_(rows), cols_(cols), a_(rows * cols, f.zero()) {}
    static ExactMatrix identity(const F& f, std::size_t n) {
        ExactMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
        return m;
    }

    const F& field() const { return *f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    V& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const V& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend ExactMatrix operator*(const ExactMatrix& A, const ExactMatrix& B) {
        if (A.cols_ != B.rows_) fail("domain", "matrix shape mismatch");
        const F& f = *A.f_;
        ExactMatrix C(f, A.rows_, B.cols_);
        for (std::size_t i = 0; i < A.rows_; ++i)
            for (std::size_t k = 0; k < A.cols_; ++k) {
                const V& x = A(i, k);
                if (f.is_zero(x)) continue;
                for (std::size_t j = 0; j < B.cols_; ++j)
                    if (!f.is_zero(B(k, j))) f.add_to(C(i, j), x, B(k, j));
            }
        return C;
    }
    friend ExactMatrix operator+(const ExactMatrix& A, const ExactMatrix& B) {
        if (A.rows_ != B.rows_ || A.cols_ != B.cols_) fail("domain", "matrix shape mismatch");
        ExactMatrix C = A;
        for (std::size_t k = 0; k < C.a_.size(); ++k) C.a_[k] = A.f_->add(A.a_[k], B.a_[k]);
        return C;
    }
    friend bool operator==(const ExactMatrix& A, const ExactMatrix& B) {
        if (A.rows_ != B.rows_ || A.cols_ != B.cols_) return false;
        for (std::size_t k = 0; k < A.a_.size(); ++k)
            if (!A.f_->eq(A.a_[k], B.a_[k])) return false;
        return true;
    }
    friend bool operator!=(const ExactMatrix& A, const ExactMatrix& B) { return !(A == B); }

    ExactMatrix pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        ExactMatrix r = identity(*f_, rows_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    ExactMatrix transpose() const {
        ExactMatrix t(*f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    V trace() const {
        V s = f_->zero();
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s = f_->add(s, (*this)(i, i));
        return s;
    }
    bool is_diagonal() const {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (i != j && !f_->is_zero((*this)(i, j))) return false;
        return true;
    }

    // Reduced row echelon form in place; pivot = first nonzero column, smallest row.
    std::vector<std::size_t> rref() {
        const F& f = *f_;
        std::vector<std::size_t> piv;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && f.is_zero((*this)(p, c))) ++p;
            if (p == rows_) continue;
            if (p != r)
                for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
            V iv = f.inv((*this)(r, c));
            for (std::size_t j = c; j < cols_; ++j)
                if (!f.is_zero((*this)(r, j))) (*this)(r, j) = f.mul((*this)(r, j), iv);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || f.is_zero((*this)(i, c))) continue;
                V m = (*this)(i, c);
                for (std::size_t j = c; j < cols_; ++j)
                    if (!f.is_zero((*this)(r, j))) (*this)(i, j) = f.sub((*this)(i, j), f.mul(m, (*this)(r, j)));
            }
            piv.push_back(c);
            ++r;
        }
        return piv;
    }
    std::size_t rank() const {
        ExactMatrix t = *this;
        return t.rref().size();
    }
    // basis of {x : A x = 0}
    std::vector<std::vector<V>> kernel() const {
        ExactMatrix t = *this;
        auto piv = t.rref();
        std::vector<char> is_piv(cols_, 0);
        for (auto c : piv) is_piv[c] = 1;
        std::vector<std::vector<V>> basis;
        for (std::size_t free = 0; free < cols_; ++free) {
            if (is_piv[free]) continue;
            std::vector<V> v(cols_, f_->zero());
            v[free] = f_->one();
            for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = f_->neg(t(k, free));
            basis.push_back(std::move(v));
        }
        return basis;
    }
    // one x with A x = b; Error "inconsistent_system" when none exists
    std::vector<V> solve(const std::vector<V>& b) const {
        if (b.size() != rows_) fail("domain", "right-hand side has the wrong length");
        ExactMatrix aug(*f_, rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_) = b[i];
        }
        auto piv = aug.rref();
        if (!piv.empty() && piv.back() == cols_) fail("inconsistent_system", "linear system has no solution");
        std::vector<V> x(cols_, f_->zero());
        for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug(k, cols_);
        return x;
    }
    ExactMatrix inverse() const {
        if (rows_ != cols_) fail("domain", "inverse of a non-square matrix");
        ExactMatrix aug(*f_, rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_ + i) = f_->one();
        }
        auto piv = aug.rref();
        if (piv.size() < rows_ || piv[rows_ - 1] != rows_ - 1) fail("singular_matrix", "matrix is singular");
        ExactMatrix inv(*f_, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
        return inv;
    }

    nlohmann::json to_json() const {
        nlohmann::json m = nlohmann::json::array();
        for (std::size_t i = 0; i < rows_; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t j = 0; j < cols_; ++j) row.push_back(f_->to_json((*this)(i, j)));
            m.push_back(row);
        }
        return m;
    }

private:
    const F* f_ = nullptr;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<V> a_;
};

// Rank of a family of algebra elements.
template <class F>
std::size_t span_rank(const std::vector<AlgebraElement<F>>& vs) {
    if (vs.empty()) return 0;
    const auto& G = vs.front().group();
    int lvl = 0;
    for (auto& v : vs) lvl = std::max(lvl, v.level());
    ExactMatrix<F> M(vs.front().field(), vs.size(), G.level_order(lvl));
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (auto& [g, c] : vs[i].terms()) M(i, g) = c;
    return M.rank();
}

// Coordinates with respect to an independent family, via its pivot columns.
template <class F>
class SpanSolver {
public:
    using V = typename F::V;
    using Elt = PcGroup::Elt;

    explicit SpanSolver(std::vector<AlgebraElement<F>> basis) : basis_(std::move(basis)) {
        if (basis_.empty()) fail("domain", "empty basis");
        const F& f = basis_.front().field();
        const auto& G = basis_.front().group();
        int lvl = 0;
        for (auto& v : basis_) lvl = std::max(lvl, v.level());
        const std::size_t d = basis_.size();
        ExactMatrix<F> M(f, d, G.level_order(lvl));
        for (std::size_t i = 0; i < d; ++i)
            for (auto& [g, c] : basis_[i].terms()) M(i, g) = c;
        ExactMatrix<F> R = M;
        auto piv = R.rref();
        if (piv.size() != d) fail("dependent_basis", "basis vectors are linearly dependent");
        cols_.assign(piv.begin(), piv.end());
        ExactMatrix<F> S(f, d, d); // S(i, k) = coefficient of basis_i at pivot k
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) S(i, k) = M(i, cols_[k]);
        Sinv_ = S.inverse();
    }

    const std::vector<AlgebraElement<F>>& basis() const { return basis_; }

    // c with w = sum_i c_i basis_i, verified exactly; nullopt when w escapes the span
    std::optional<std::vector<V>> coords(const AlgebraElement<F>& w) const {
        const F& f = basis_.front().field();
        const std::size_t d = basis_.size();
        std::vector<V> rhs(d);
        for (std::size_t k = 0; k < d; ++k) rhs[k] = w.coeff(static_cast<Elt>(cols_[k]));
        std::vector<V> c(d, f.zero());
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                if (!f.is_zero(rhs[k]) && !f.is_zero(Sinv_(k, i))) f.add_to(c[i], rhs[k], Sinv_(k, i));
        AlgebraElement<F> back(w.group(), f, w.level());
        for (std::size_t i = 0; i < d; ++i)
            if (!f.is_zero(c[i])) back += basis_[i].scale(c[i]);
        if (back != w) return std::nullopt;
        return c;
    }

private:
    std::vector<AlgebraElement<F>> basis_;
    std::vector<std::size_t> cols_;
    ExactMatrix<F> Sinv_;
};

// Matrix of v -> a v on span(basis); column j holds the coordinates of a*basis_j.
template <class F>
ExactMatrix<F> left_regular_matrix(const AlgebraElement<F>& a, const SpanSolver<F>& solver) {
    const auto& basis = solver.basis();
    const std::size_t d = basis.size();
    ExactMatrix<F> M(a.field(), d, d);
    for (std::size_t j = 0; j < d; ++j) {
        auto c = solver.coords(a * basis[j]);
        if (!c) fail("escapes_span", "image of basis vector " + std::to_string(j) + " escapes the span");
        for (std::size_t i = 0; i < d; ++i) M(i, j) = (*c)[i];
    }
    return M;
}

template <class F>
ExactMatrix<F> left_regular_matrix(const AlgebraElement<F>& a, const std::vector<AlgebraElement<F>>& basis) {
    return left_regular_matrix(a, SpanSolver<F>(basis));
}

} // namespace solvarep
