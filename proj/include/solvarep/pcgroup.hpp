#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "solvarep/error.hpp"
#include "solvarep/ntheory.hpp"

namespace solvarep {

struct WordToken {
    int gen = 0; // 0-based generator index
    long exp = 1;
    bool operator==(const WordToken&) const = default;
};
using Word = std::vector<WordToken>; // empty word is the identity

struct LongPresentation {
    std::string name;
    std::vector<std::string> gens;
    std::vector<int> primes;
    std::vector<Word> power_words;             // x_i^{p_i} = w_i
    std::vector<std::vector<Word>> conj_words; // conj_words[i][j]: x_i^{-1} x_j x_i, j < i

    int rank() const { return static_cast<int>(gens.size()); }
    int gen_index(const std::string& g) const; // -1 when absent
    // Append a generator whose conjugation action defaults to the identity.
    void add_gen(const std::string& g, int p, Word pow = {});
    void set_act(int i, int j, Word w);

    bool operator==(const LongPresentation&) const = default;
};

LongPresentation parse_presentation(const std::string& text);
std::string print_presentation(const LongPresentation& pres);
std::string word_str(const LongPresentation& pres, const Word& w);

struct ConjClass {
    int level = 0;
    std::uint32_t rep = 0;
    std::vector<std::uint32_t> members; // ascending
};

class PcGroup {
public:
    using Elt = std::uint32_t;
    static constexpr std::size_t kDefaultLimit = 20000;

    explicit PcGroup(LongPresentation pres, std::size_t limit = kDefaultLimit);

    const LongPresentation& presentation() const { return pres_; }
    const std::string& name() const { return pres_.name; }
    int rank() const { return pres_.rank(); }
    int prime(int k) const { return pres_.primes[k]; } // k = 0-based generator
    std::size_t order() const { return sizes_.back(); }
    std::size_t level_order(int i) const { return sizes_.at(i); }
    u64 exponent() const { return exponent_; }

    Elt identity() const { return 0; }
    Elt gen(int k) const { return static_cast<Elt>(sizes_[k]); } // x_{k+1}
    int level_of(Elt g) const;

    Elt mul(Elt g, Elt h) const;
    Elt inv(Elt g) const { return inv_[g]; }
    Elt pow(Elt g, long e) const;
    Elt conj(Elt g, Elt h) const { return mul(inv_[h], mul(g, h)); } // h^-1 g h
    u64 elt_order(Elt g) const { return order_[g]; }

    std::vector<int> exps(Elt g) const;
    Elt from_exps(const std::vector<int>& a) const;
    Elt eval_word(const Word& w) const;
    std::string elt_name(Elt g) const;

    // phi_i: conjugation by x_i on G_{i-1}; level i in 1..n
    Elt phi(int i, Elt h) const { return phi_[i][h]; }
    Elt phi_inv(int i, Elt h) const { return phi_inv_pow_[i][h + sizes_[i - 1]]; }
    Elt power_relation(int i) const { return w_[i]; }

    const std::vector<ConjClass>& classes(int level) const { return classes_.at(level); }
    int class_of(int level, Elt g) const { return class_of_.at(level).at(g); }
    const std::vector<Elt>& class_sum_support(int level, Elt g) const;

    bool has_table() const { return table_level_ == rank(); }

private:
    LongPresentation pres_;
    std::vector<std::size_t> sizes_;                 // |G_i|, i = 0..n
    std::vector<std::vector<Elt>> phi_;              // phi_[i] on G_{i-1}
    std::vector<std::vector<Elt>> phi_inv_pow_;      // [i][a*|G_{i-1}| + h] = phi_i^{-a}(h)
    std::vector<Elt> w_;                             // w_[i] in G_{i-1}
    static constexpr std::size_t kTableLimit = 2048;
    std::vector<Elt> table_;                         // Cayley table of G_{table_level_}
    int table_level_ = 0;
    std::vector<Elt> inv_;
    std::vector<u64> order_;
    u64 exponent_ = 1;
    std::vector<std::vector<ConjClass>> classes_;
    std::vector<std::vector<int>> class_of_;

    Elt mul_level(int i, Elt g, Elt h) const;
    Elt eval_word_level(int i, const Word& w) const;
    void build_level(int i);
    void build_classes();
    void self_check();
};

} // namespace solvarep
