#include "solvarep/pcgroup.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace solvarep {

int LongPresentation::gen_index(const std::string& g) const {
    for (int i = 0; i < rank(); ++i)
        if (gens[i] == g) return i;
    return -1;
}

void LongPresentation::add_gen(const std::string& g, int p, Word pow) {
    int i = rank();
    gens.push_back(g);
    primes.push_back(p);
    power_words.push_back(std::move(pow));
    std::vector<Word> acts;
    for (int j = 0; j < i; ++j) acts.push_back(Word{{j, 1}});
    conj_words.push_back(std::move(acts));
}

void LongPresentation::set_act(int i, int j, Word w) { conj_words.at(i).at(j) = std::move(w); }

std::string word_str(const LongPresentation& pres, const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (auto& t : w) {
        if (!out.empty()) out += ' ';
        out += pres.gens.at(t.gen);
        if (t.exp != 1) out += "^" + std::to_string(t.exp);
    }
    return out;
}

std::string print_presentation(const LongPresentation& pres) {
    std::ostringstream os;
    os << "group " << pres.name << "\n";
    for (int i = 0; i < pres.rank(); ++i) {
        os << "gen " << pres.gens[i] << " " << pres.primes[i];
        if (!pres.power_words[i].empty()) os << " pow " << word_str(pres, pres.power_words[i]);
        for (int j = 0; j < i; ++j) {
            const Word& w = pres.conj_words[i][j];
            if (w == Word{{j, 1}}) continue;
            os << " act " << pres.gens[j] << " -> " << word_str(pres, w);
        }
        os << "\n";
    }
    return os.str();
}

// ---- DSL parser -------------------------------------------------------------

namespace {

struct Tok {
    std::string text;
    int col;
};

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
    fail("parse_error", "line " + std::to_string(line) + " col " + std::to_string(col) + ": " + msg);
}

bool valid_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return s != "gen" && s != "pow" && s != "act" && s != "group";
}

std::vector<Tok> tokenize(const std::string& line) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

long parse_int(const Tok& t, std::size_t from, int line, const std::string& what) {
    std::string s = t.text.substr(from);
    std::size_t k = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) k = 1;
    if (k >= s.size()) parse_fail(line, t.col + static_cast<int>(from), "malformed " + what + " '" + t.text + "'");
    for (std::size_t m = k; m < s.size(); ++m)
        if (!std::isdigit(static_cast<unsigned char>(s[m])))
            parse_fail(line, t.col + static_cast<int>(from), "malformed " + what + " '" + t.text + "'");
    try {
        return std::stol(s);
    } catch (...) {
        parse_fail(line, t.col + static_cast<int>(from), "malformed " + what + " '" + t.text + "'");
    }
}

// Parses word tokens in [pos, end) stopping at the next 'act'.
Word parse_word(const LongPresentation& pres, int current, const std::vector<Tok>& toks, std::size_t& pos,
                int line) {
    Word w;
    std::size_t start = pos;
    while (pos < toks.size() && toks[pos].text != "act" && toks[pos].text != "pow") {
        const Tok& t = toks[pos];
        if (t.text == "1") {
            ++pos;
            continue;
        }
        std::size_t caret = t.text.find('^');
        std::string g = t.text.substr(0, caret);
        long e = 1;
        if (caret != std::string::npos) e = parse_int(t, caret + 1, line, "exponent");
        int gi = pres.gen_index(g);
        if (gi < 0 || gi >= current) {
            if (!valid_ident(g)) parse_fail(line, t.col, "malformed word token '" + t.text + "'");
            parse_fail(line, t.col, "forward generator reference '" + g + "'");
        }
        if (e != 0) w.push_back({gi, e});
        ++pos;
    }
    if (pos == start) {
        int col = pos < toks.size() ? toks[pos].col : (toks.empty() ? 1 : toks.back().col + 1);
        parse_fail(line, col, "expected a word");
    }
    return w;
}

} // namespace

LongPresentation parse_presentation(const std::string& text) {
    LongPresentation pres;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        auto toks = tokenize(raw);
        if (toks.empty()) continue;
        if (!have_header) {
            if (toks[0].text != "group") parse_fail(lineno, toks[0].col, "expected 'group <name>'");
            if (toks.size() != 2) parse_fail(lineno, toks[0].col, "expected 'group <name>'");
            pres.name = toks[1].text;
            have_header = true;
            continue;
        }
        if (toks[0].text != "gen") parse_fail(lineno, toks[0].col, "expected 'gen'");
        if (toks.size() < 3) parse_fail(lineno, toks[0].col, "expected 'gen <name> <prime>'");
        const std::string& g = toks[1].text;
        if (!valid_ident(g)) parse_fail(lineno, toks[1].col, "invalid generator name '" + g + "'");
        if (pres.gen_index(g) >= 0) parse_fail(lineno, toks[1].col, "duplicate generator '" + g + "'");
        long p = parse_int(toks[2], 0, lineno, "order");
        if (p < 2 || !is_prime(static_cast<u64>(p)))
            parse_fail(lineno, toks[2].col, "non-prime order " + toks[2].text);
        const int current = pres.rank();
        pres.add_gen(g, static_cast<int>(p));
        std::size_t pos = 3;
        bool seen_pow = false;
        std::vector<bool> seen_act(current, false);
        while (pos < toks.size()) {
            const Tok& kw = toks[pos];
            if (kw.text == "pow") {
                if (seen_pow) parse_fail(lineno, kw.col, "duplicate 'pow'");
                seen_pow = true;
                ++pos;
                pres.power_words[current] = parse_word(pres, current, toks, pos, lineno);
            } else if (kw.text == "act") {
                ++pos;
                if (pos + 1 >= toks.size()) parse_fail(lineno, kw.col, "expected 'act <gen> -> <word>'");
                int j = pres.gen_index(toks[pos].text);
                if (j < 0 || j >= current)
                    parse_fail(lineno, toks[pos].col, "forward generator reference '" + toks[pos].text + "'");
                if (seen_act[j]) parse_fail(lineno, toks[pos].col, "duplicate action on '" + toks[pos].text + "'");
                seen_act[j] = true;
                ++pos;
                if (toks[pos].text != "->") parse_fail(lineno, toks[pos].col, "expected '->'");
                ++pos;
                pres.conj_words[current][j] = parse_word(pres, current, toks, pos, lineno);
            } else {
                parse_fail(lineno, kw.col, "unexpected token '" + kw.text + "'");
            }
        }
    }
    if (!have_header) parse_fail(lineno + 1, 1, "missing 'group <name>' header");
    return pres;
}

// ---- PcGroup ----------------------------------------------------------------

PcGroup::PcGroup(LongPresentation pres, std::size_t limit) : pres_(std::move(pres)) {
    const int n = pres_.rank();
    if (static_cast<int>(pres_.primes.size()) != n || static_cast<int>(pres_.power_words.size()) != n ||
        static_cast<int>(pres_.conj_words.size()) != n)
        fail("domain", "presentation arrays have inconsistent lengths");
    sizes_.assign(1, 1);
    for (int k = 0; k < n; ++k) {
        if (!is_prime(static_cast<u64>(pres_.primes[k]))) fail("domain", "non-prime order for " + pres_.gens[k]);
        std::size_t next = sizes_.back() * static_cast<std::size_t>(pres_.primes[k]);
        if (next > limit)
            fail("group_too_large", "group order exceeds the configured limit of " + std::to_string(limit));
        sizes_.push_back(next);
    }
    phi_.resize(n + 1);
    phi_inv_pow_.resize(n + 1);
    w_.assign(n + 1, 0);
    inv_.assign(1, 0);
    table_.assign(1, 0);
    table_level_ = 0;
    for (int i = 1; i <= n; ++i) {
        build_level(i);
        const std::size_t m = sizes_[i];
        if (m <= kTableLimit) {
            std::vector<Elt> t(m * m);
            for (Elt g = 0; g < m; ++g)
                for (Elt h = 0; h < m; ++h) t[g * m + h] = mul_level(i, g, h);
            table_ = std::move(t);
            table_level_ = i;
        }
    }
    const std::size_t G = order();
    // element orders: g outside G_{i-1} has g^{p_i} in G_{i-1}
    order_.assign(G, 1);
    for (Elt g = 1; g < G; ++g) {
        int i = level_of(g);
        Elt gp = pow(g, pres_.primes[i - 1]);
        order_[g] = static_cast<u64>(pres_.primes[i - 1]) * order_[gp];
    }
    exponent_ = 1;
    for (Elt g = 0; g < G; ++g) exponent_ = lcm_u(exponent_, order_[g]);
    self_check();
    build_classes();
}

int PcGroup::level_of(Elt g) const {
    int i = 0;
    while (g >= sizes_[i]) ++i;
    return i;
}

PcGroup::Elt PcGroup::mul_level(int i, Elt g, Elt h) const {
    if (i <= table_level_) return table_[static_cast<std::size_t>(g) * sizes_[table_level_] + h];
    const std::size_t m = sizes_[i - 1];
    if (g < m && h < m) return mul_level(i - 1, g, h);
    const int p = pres_.primes[i - 1];
    Elt g0 = static_cast<Elt>(g % m), h0 = static_cast<Elt>(h % m);
    Elt a = static_cast<Elt>(g / m), b = static_cast<Elt>(h / m);
    Elt k = mul_level(i - 1, g0, phi_inv_pow_[i][a * m + h0]);
    Elt c = a + b;
    if (c >= static_cast<Elt>(p)) {
        c -= p;
        k = mul_level(i - 1, k, phi_inv_pow_[i][c * m + w_[i]]);
    }
    return static_cast<Elt>(k + c * m);
}

PcGroup::Elt PcGroup::mul(Elt g, Elt h) const {
    return mul_level(rank(), g, h);
}

PcGroup::Elt PcGroup::pow(Elt g, long e) const {
    if (e < 0) {
        g = inv_[g];
        e = -e;
    }
    Elt r = 0;
    while (e) {
        if (e & 1) r = mul(r, g);
        g = mul(g, g);
        e >>= 1;
    }
    return r;
}

std::vector<int> PcGroup::exps(Elt g) const {
    std::vector<int> a(rank(), 0);
    for (int k = 0; k < rank(); ++k) {
        a[k] = static_cast<int>(g % pres_.primes[k]);
        g /= pres_.primes[k];
    }
    return a;
}

PcGroup::Elt PcGroup::from_exps(const std::vector<int>& a) const {
    if (static_cast<int>(a.size()) != rank()) fail("domain", "exponent vector has the wrong length");
    std::size_t g = 0;
    for (int k = rank(); k-- > 0;) {
        if (a[k] < 0 || a[k] >= pres_.primes[k]) fail("domain", "exponent out of range");
        g = g * pres_.primes[k] + a[k];
    }
    return static_cast<Elt>(g);
}

PcGroup::Elt PcGroup::eval_word_level(int i, const Word& w) const {
    Elt r = 0;
    for (auto& t : w) {
        if (t.gen >= i) fail("domain", "word references a generator outside the level");
        Elt x = static_cast<Elt>(sizes_[t.gen]);
        long e = t.exp;
        Elt base = x;
        if (e < 0) {
            base = inv_[x];
            e = -e;
        }
        for (long s = 0; s < e; ++s) r = mul_level(i, r, base);
    }
    return r;
}

PcGroup::Elt PcGroup::eval_word(const Word& w) const { return eval_word_level(rank(), w); }

std::string PcGroup::elt_name(Elt g) const {
    if (g == 0) return "e";
    auto a = exps(g);
    std::string out;
    for (int k = 0; k < rank(); ++k) {
        if (a[k] == 0) continue;
        if (!out.empty()) out += "*";
        out += pres_.gens[k];
        if (a[k] != 1) out += "^" + std::to_string(a[k]);
    }
    return out;
}

void PcGroup::build_level(int i) {
    const int k = i - 1;
    const std::size_t m = sizes_[k];
    const int p = pres_.primes[k];
    const std::string& xname = pres_.gens[k];
    // images of x_1..x_{i-1} under conjugation by x_i
    std::vector<Elt> img(k);
    for (int j = 0; j < k; ++j) img[j] = eval_word_level(k, pres_.conj_words[k][j]);
    auto& ph = phi_[i];
    ph.assign(m, 0);
    for (Elt h = 1; h < m; ++h) {
        int l = level_of(h);
        std::size_t ml = sizes_[l - 1];
        Elt h0 = static_cast<Elt>(h % ml);
        Elt a = static_cast<Elt>(h / ml);
        Elt xa = 0;
        for (Elt s = 0; s < a; ++s) xa = mul_level(k, xa, img[l - 1]);
        ph[h] = mul_level(k, ph[h0], xa);
    }
    std::vector<Elt> phinv(m, 0);
    std::vector<char> hit(m, 0);
    for (Elt h = 0; h < m; ++h) {
        if (hit[ph[h]]) fail("inconsistent_presentation", "conjugation by " + xname + " is not a bijection");
        hit[ph[h]] = 1;
        phinv[ph[h]] = h;
    }
    // homomorphism check
    if (m <= 512) {
        for (Elt g = 0; g < m; ++g)
            for (Elt h = 0; h < m; ++h)
                if (ph[mul_level(k, g, h)] != mul_level(k, ph[g], ph[h]))
                    fail("inconsistent_presentation",
                         "conjugation by " + xname + " is not an automorphism");
    } else {
        for (Elt g = 0; g < m; ++g)
            for (int j = 0; j < k; ++j)
                if (ph[mul_level(k, g, static_cast<Elt>(sizes_[j]))] != mul_level(k, ph[g], img[j]))
                    fail("inconsistent_presentation",
                         "conjugation by " + xname + " is not an automorphism");
    }
    const Elt w = eval_word_level(k, pres_.power_words[k]);
    w_[i] = w;
    if (ph[w] != w)
        fail("inconsistent_presentation", "conjugation by " + xname + " does not fix its power relation");
    // phi^p must be conjugation by w, and x^{-1} acts as phi^{-1}
    const std::vector<Elt> inv_prev = inv_;
    const Elt winv = inv_prev[w];
    for (Elt h = 0; h < m; ++h) {
        Elt t = h;
        for (int s = 0; s < p; ++s) t = ph[t];
        if (t != mul_level(k, winv, mul_level(k, h, w)))
            fail("inconsistent_presentation", "power relation of " + xname + " is incompatible with its action");
        // cross-check: phi^{-1}(h) = phi^{p-1}(w h w^{-1})
        Elt u = mul_level(k, w, mul_level(k, h, winv));
        for (int s = 0; s < p - 1; ++s) u = ph[u];
        if (u != phinv[h]) fail("internal", "inverse automorphism cross-check failed");
    }
    auto& tab = phi_inv_pow_[i];
    tab.assign(m * p, 0);
    for (Elt h = 0; h < m; ++h) tab[h] = h;
    for (int a = 1; a < p; ++a)
        for (Elt h = 0; h < m; ++h) tab[a * m + h] = phinv[tab[(a - 1) * m + h]];
    // inverses in G_i: (h x^a)^{-1} = x^{-a} h^{-1}, x^{-a} = phi^{-(p-a)}(w^{-1}) x^{p-a}
    const std::size_t mi = m * p;
    std::vector<Elt> inv_i(mi);
    for (Elt g = 0; g < mi; ++g) {
        Elt h = static_cast<Elt>(g % m), a = static_cast<Elt>(g / m);
        if (a == 0) {
            inv_i[g] = inv_prev[h];
            continue;
        }
        Elt c = static_cast<Elt>(p) - a;
        Elt xma = static_cast<Elt>(tab[c * m + winv] + c * m);
        inv_i[g] = mul_level(i, xma, inv_prev[h]);
    }
    inv_ = std::move(inv_i);
}

void PcGroup::self_check() {
    const std::size_t G = order();
    for (Elt g = 0; g < G; ++g)
        if (mul(g, inv_[g]) != 0 || mul(inv_[g], g) != 0) fail("internal", "inverse table is wrong");
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<Elt> d(0, static_cast<Elt>(G - 1));
    for (int t = 0; t < 1000; ++t) {
        Elt a = d(rng), b = d(rng), c = d(rng);
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            fail("inconsistent_presentation", "associativity fails for " + elt_name(a) + ", " + elt_name(b) +
                                                  ", " + elt_name(c));
    }
}

void PcGroup::build_classes() {
    const int n = rank();
    classes_.assign(n + 1, {});
    class_of_.assign(n + 1, {});
    for (int i = 0; i <= n; ++i) {
        const std::size_t m = sizes_[i];
        auto& cof = class_of_[i];
        cof.assign(m, -1);
        for (Elt s = 0; s < m; ++s) {
            if (cof[s] >= 0) continue;
            ConjClass c;
            c.level = i;
            int id = static_cast<int>(classes_[i].size());
            std::vector<Elt> stack{s};
            cof[s] = id;
            while (!stack.empty()) {
                Elt g = stack.back();
                stack.pop_back();
                c.members.push_back(g);
                for (int k = 0; k < i; ++k) {
                    Elt h = conj(g, gen(k));
                    if (cof[h] < 0) {
                        cof[h] = id;
                        stack.push_back(h);
                    }
                }
            }
            std::sort(c.members.begin(), c.members.end());
            c.rep = c.members.front();
            classes_[i].push_back(std::move(c));
        }
    }
}

const std::vector<PcGroup::Elt>& PcGroup::class_sum_support(int level, Elt g) const {
    if (level < 0 || level > rank() || g >= sizes_[level])
        fail("domain", "element " + std::to_string(g) + " is not in level " + std::to_string(level));
    return classes_[level][class_of_[level][g]].members;
}

} // namespace solvarep
