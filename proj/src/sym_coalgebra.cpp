#include "forma/sym_coalgebra.hpp"

#include <algorithm>
#include <functional>

namespace forma {

void vsum_add(VecSum& v, int i, const Rational& c) {
    if (c.is_zero())
        return;
    auto it = v.find(i);
    if (it == v.end()) {
        v[i] = c;
    } else {
        it->second += c;
        if (it->second.is_zero())
            v.erase(it);
    }
}

void wsum_add(WordSum& w, const SymWord& word, const Rational& c) {
    if (c.is_zero())
        return;
    auto it = w.find(word);
    if (it == w.end()) {
        w[word] = c;
    } else {
        it->second += c;
        if (it->second.is_zero())
            w.erase(it);
    }
}

WordSum wsum_scale(const Rational& c, const WordSum& w) {
    WordSum out;
    if (c.is_zero())
        return out;
    for (const auto& [k, v] : w)
        out[k] = c * v;
    return out;
}

VecSum vsum_scale(const Rational& c, const VecSum& v) {
    VecSum out;
    if (c.is_zero())
        return out;
    for (const auto& [k, x] : v)
        out[k] = c * x;
    return out;
}

int word_degree(const GradedBasis& B, const SymWord& w) {
    int d = 0;
    for (int i : w)
        d += B.degrees[i];
    return d;
}

Canon canonicalize(const GradedBasis& B, const std::vector<int>& letters) {
    Canon c;
    c.word = letters;
    // insertion sort with transposition signs; stable so equal letters never
    // cross each other
    for (size_t i = 1; i < c.word.size(); ++i) {
        int x = c.word[i];
        size_t j = i;
        while (j > 0 && c.word[j - 1] > x) {
            if (B.odd(c.word[j - 1]) && B.odd(x))
                c.sign = -c.sign;
            c.word[j] = c.word[j - 1];
            --j;
        }
        c.word[j] = x;
    }
    for (size_t i = 1; i < c.word.size(); ++i)
        if (c.word[i] == c.word[i - 1] && B.odd(c.word[i])) {
            c.zero = true;
            return c;
        }
    return c;
}

int extraction_sign(const GradedBasis& B, const SymWord& w, const std::vector<int>& positions) {
    // each selected letter hops over the unselected letters before it
    int sign = 1;
    size_t sel = 0;
    int unselected_odd_before = 0;
    for (size_t pos = 0; pos < w.size(); ++pos) {
        if (sel < positions.size() && static_cast<int>(pos) == positions[sel]) {
            if (B.odd(w[pos]) && (unselected_odd_before % 2))
                sign = -sign;
            ++sel;
        } else {
            if (B.odd(w[pos]))
                ++unselected_odd_before;
        }
    }
    return sign;
}

std::map<std::pair<SymWord, SymWord>, Rational> comultiply(const GradedBasis& B,
                                                           const SymWord& w) {
    std::map<std::pair<SymWord, SymWord>, Rational> out;
    int k = static_cast<int>(w.size());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        SymWord left, right;
        std::vector<int> pos;
        for (int t = 0; t < k; ++t) {
            if (mask & (1u << t)) {
                left.push_back(w[t]);
                pos.push_back(t);
            } else {
                right.push_back(w[t]);
            }
        }
        int sign = extraction_sign(B, w, pos);
        auto key = std::make_pair(left, right);
        auto it = out.find(key);
        if (it == out.end())
            out[key] = Rational(sign);
        else {
            it->second += Rational(sign);
            if (it->second.is_zero())
                out.erase(it);
        }
    }
    return out;
}

std::vector<SymWord> words_of_weight(const GradedBasis& B, int weight) {
    std::vector<SymWord> out;
    SymWord cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == weight) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < B.size(); ++i) {
            if (!cur.empty() && cur.back() == i && B.odd(i))
                continue;
            cur.push_back(i);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<SymWord> words_up_to_weight(const GradedBasis& B, int max_weight) {
    std::vector<SymWord> out;
    for (int w = 1; w <= max_weight; ++w)
        for (auto& x : words_of_weight(B, w))
            out.push_back(std::move(x));
    return out;
}

}  // namespace forma
