// Graded symmetric words over a finite graded basis, with one Koszul sign
// engine used by everything downstream: canonical words are ascending index
// sequences, odd letters never repeat, and every reordering sign is computed
// by explicit transposition counting on the letter degrees.
#pragma once

#include "forma/rational.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace forma {

struct GradedBasis {
    std::vector<std::string> keys;
    std::vector<int> degrees;

    int size() const { return static_cast<int>(keys.size()); }
    bool odd(int i) const { return degrees[i] % 2 != 0; }
};

using BasisPtr = std::shared_ptr<const GradedBasis>;

/// Canonical word: ascending letter indices; odd letters with multiplicity 1.
using SymWord = std::vector<int>;
/// Element of the basis span.
using VecSum = std::map<int, Rational>;
/// Element of Sym(V): formal sum of canonical words.
using WordSum = std::map<SymWord, Rational>;

void vsum_add(VecSum& v, int i, const Rational& c);
void wsum_add(WordSum& w, const SymWord& word, const Rational& c);
WordSum wsum_scale(const Rational& c, const WordSum& w);
VecSum vsum_scale(const Rational& c, const VecSum& v);

int word_degree(const GradedBasis& B, const SymWord& w);

struct Canon {
    bool zero = false;
    int sign = 1;
    SymWord word;
};

/// Sorts an arbitrary letter sequence into canonical order, counting Koszul
/// transpositions; zero when an odd letter repeats.
Canon canonicalize(const GradedBasis& B, const std::vector<int>& letters);

/// Koszul sign of pulling the letters at the given (ascending) positions of
/// w to the front, both blocks keeping their internal order.
int extraction_sign(const GradedBasis& B, const SymWord& w, const std::vector<int>& positions);

/// Shuffle comultiplication of a canonical word; the unit is the empty word.
std::map<std::pair<SymWord, SymWord>, Rational> comultiply(const GradedBasis& B, const SymWord& w);

/// All canonical words of exactly the given weight.
std::vector<SymWord> words_of_weight(const GradedBasis& B, int weight);
/// All canonical words of weight 1..max_weight.
std::vector<SymWord> words_up_to_weight(const GradedBasis& B, int max_weight);

}  // namespace forma
