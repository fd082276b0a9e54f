#pragma once

// Test-only oracle: evaluates twisted products through letter-by-letter words
// with explicit adjacent q-swaps, an independent route from the bilinear
// convolution in the library.

#include <map>
#include <vector>

#include "qtate/twisted.hpp"

namespace qtest {

// A letter is a signed basis vector: +(i+1) for e_i, -(i+1) for -e_i.
inline qtate::Exponent letter_exponent(int letter, int dim) {
  qtate::Exponent e(static_cast<size_t>(dim), 0);
  const int idx = (letter > 0 ? letter : -letter) - 1;
  e[static_cast<size_t>(idx)] = letter > 0 ? 1 : -1;
  return e;
}

inline std::vector<int> word_of(const qtate::Exponent& lambda) {
  std::vector<int> w;
  for (size_t i = 0; i < lambda.size(); ++i) {
    for (int k = 0; k < (lambda[i] < 0 ? -lambda[i] : lambda[i]); ++k)
      w.push_back(lambda[i] > 0 ? static_cast<int>(i) + 1 : -(static_cast<int>(i) + 1));
  }
  return w;
}

// Folds a word left to right with the monomial product rule, returning the
// q-exponent gamma such that (product of letters) = q^gamma * m(sum).
inline long fold_word(const std::vector<int>& w, const qtate::TwistForm& twist) {
  qtate::Exponent cur(static_cast<size_t>(twist.dim), 0);
  long gamma = 0;
  for (int letter : w) {
    const auto le = letter_exponent(letter, twist.dim);
    gamma += twist.apply(cur, le);
    for (size_t i = 0; i < cur.size(); ++i) cur[i] += le[i];
  }
  return gamma;
}

// Normal-orders a word by adjacent transpositions, each swap contributing the
// commutator exponent; returns the total q-exponent picked up.
inline long bubble_sort_word(std::vector<int>& w, const qtate::TwistForm& twist) {
  long swaps = 0;
  bool dirty = true;
  while (dirty) {
    dirty = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      const int ia = (w[i] > 0 ? w[i] : -w[i]);
      const int ib = (w[i + 1] > 0 ? w[i + 1] : -w[i + 1]);
      if (ia > ib) {
        const auto ea = letter_exponent(w[i], twist.dim);
        const auto eb = letter_exponent(w[i + 1], twist.dim);
        swaps += twist.commutator(ea, eb);
        std::swap(w[i], w[i + 1]);
        dirty = true;
      }
    }
  }
  return swaps;
}

// Oracle product: concatenate canonical words, bubble-sort, and re-read the
// sorted word as a basis monomial.
inline qtate::TwistedElement oracle_mul(const qtate::TwistedElement& f,
                                        const qtate::TwistedElement& g) {
  const auto& twist = f.twist();
  qtate::TwistedBuilder out(qtate::TwistedElement(twist, f.q(), f.domain()));
  for (const auto& [la, ca] : f.terms()) {
    for (const auto& [mu, cb] : g.terms()) {
      auto wa = word_of(la);
      auto wb = word_of(mu);
      // m(la) = q^{-fold(wa)} * (word product), same for mu.
      long qexp = -fold_word(wa, twist) - fold_word(wb, twist);
      std::vector<int> w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      qexp += bubble_sort_word(w, twist);
      qexp += fold_word(w, twist);
      qtate::Exponent sum(la.size());
      for (size_t i = 0; i < sum.size(); ++i) sum[i] = la[i] + mu[i];
      out.add(sum, ca * cb * f.q().pow(qexp));
    }
  }
  return std::move(out).build();
}

}  // namespace qtest
