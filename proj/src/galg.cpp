#include "solvarep/galg.hpp"

namespace solvarep {

ModField::ModField(u64 ell, int n) : P(ell), N(n) {
    if ((ell - 1) % static_cast<u64>(n) != 0)
        fail("bad_prime", "prime " + std::to_string(ell) + " is not 1 mod " + std::to_string(n));
    omega = P.pow(P.primitive_root(), (ell - 1) / static_cast<u64>(n));
}

u64 ModField::reduce(const Cyclotomic& a) const {
    if (a.is_zero()) return 0;
    const u64 ell = modulus();
    Integer den = a.denominator() % Integer(static_cast<unsigned long>(ell)); // denominators are positive
    if (den == 0) fail("bad_prime", "denominator divisible by " + std::to_string(ell));
    u64 acc = 0;
    for (auto& [i, c] : a.terms()) {
        u64 r = mpz_fdiv_ui(c.get_mpz_t(), ell);
        acc = P.add(acc, P.mul(r, P.pow(omega, static_cast<u64>(i))));
    }
    return P.mul(acc, P.inv(den.get_ui()));
}

} // namespace solvarep

namespace solvarep::detail {

namespace {

struct ScaledTerms {
    Integer den = 1;
    // per term: sparse numerator polynomial (position, value) over the common denominator
    std::vector<std::vector<std::pair<int, i64>>> num;
    i64 max_abs = 0;
    std::size_t max_nnz = 0;
};

bool scale_terms(const CycloTerms& t, ScaledTerms& out) {
    for (auto& [g, c] : t) mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), c.denominator().get_mpz_t());
    out.num.resize(t.size());
    Integer m;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Cyclotomic& c = t[k].second;
        Integer f = out.den / c.denominator();
        for (auto& [i, nv] : c.terms()) {
            m = nv * f;
            if (!m.fits_slong_p()) return false;
            i64 v = m.get_si();
            out.num[k].push_back({i, v});
            out.max_abs = std::max<i64>(out.max_abs, v < 0 ? -v : v);
        }
        out.max_nnz = std::max(out.max_nnz, out.num[k].size());
    }
    return true;
}

template <class Acc>
CycloTerms convolve_with(const PcGroup& G, int N, std::size_t target_order, const CycloTerms& a,
                         const CycloTerms& b, const ScaledTerms& A, const ScaledTerms& B) {
    const CycloLevel& L = cyclo_level(N);
    const int phi = L.phi;
    const int width = 2 * phi - 1;
    std::vector<Acc> acc(target_order * static_cast<std::size_t>(width), 0);
    std::vector<char> hit(target_order, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto g = a[i].first;
        const auto& an = A.num[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto t = G.mul(g, b[j].first);
            hit[t] = 1;
            Acc* row = &acc[static_cast<std::size_t>(t) * width];
            for (auto& [pa, va] : an)
                for (auto& [pb, vb] : B.num[j]) row[pa + pb] += static_cast<Acc>(va) * vb;
        }
    }
    CycloTerms out;
    const Integer den = A.den * B.den;
    std::vector<Acc> poly(phi);
    for (std::size_t t = 0; t < target_order; ++t) {
        if (!hit[t]) continue;
        const Acc* row = &acc[t * width];
        std::fill(poly.begin(), poly.end(), 0);
        bool nonzero = false;
        for (int k = 0; k < width; ++k) {
            if (row[k] == 0) continue;
            nonzero = true;
            int kk = k % N;
            if (kk < phi) {
                poly[kk] += row[k];
            } else {
                const auto& red = L.red[kk];
                for (int s = 0; s < phi; ++s)
                    if (red[s]) poly[s] += row[k] * red[s];
            }
        }
        if (!nonzero) continue;
        bool any = false;
        for (auto v : poly) any |= (v != 0);
        if (!any) continue;
        std::vector<Integer> num(phi);
        for (int s = 0; s < phi; ++s) {
            if constexpr (std::is_same_v<Acc, i64>) {
                num[s] = static_cast<long>(poly[s]);
            } else {
                // split the 128-bit value into two halves
                __int128 v = poly[s];
                bool neg = v < 0;
                unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
                Integer hi = static_cast<unsigned long>(static_cast<u64>(u >> 64));
                Integer lo = static_cast<unsigned long>(static_cast<u64>(u));
                num[s] = (hi << 64) + lo;
                if (neg) num[s] = -num[s];
            }
        }
        out.push_back({static_cast<PcGroup::Elt>(t), Cyclotomic::from_numerators(N, std::move(num), den)});
    }
    return out;
}

} // namespace

std::optional<CycloTerms> cyclo_convolve(const PcGroup& G, int N, std::size_t target_order, const CycloTerms& a,
                                         const CycloTerms& b) {
    ScaledTerms A, B;
    if (!scale_terms(a, A) || !scale_terms(b, B)) return std::nullopt;
    const CycloLevel& L = cyclo_level(N);
    if (target_order * static_cast<std::size_t>(2 * L.phi - 1) > (std::size_t{1} << 27)) return std::nullopt;
    // |accumulated coefficient| <= max|A| max|B| nnz_A nnz_B min(|a|,|b|), then reduction scales by C_Phi width
    long double bound = static_cast<long double>(A.max_abs) * B.max_abs * A.max_nnz * B.max_nnz *
                        std::min(a.size(), b.size()) * (1.0L + static_cast<long double>(L.C_Phi) * 2 * L.phi);
    if (bound < 9.0e18L) return convolve_with<i64>(G, N, target_order, a, b, A, B);
    if (bound < 1.7e38L) return convolve_with<__int128>(G, N, target_order, a, b, A, B);
    return std::nullopt;
}

} // namespace solvarep::detail
