#pragma once

// Test-only equality oracle for braid words, independent of the loop
// coordinate action: a braid acts on the free group F_n by
//   sigma_i:   x_i -> x_i x_{i+1} x_i^-1,   x_{i+1} -> x_i
//   sigma_i^-: x_i -> x_{i+1},              x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
// and two words are equal iff the induced automorphisms agree on every
// generator. Image lengths grow quickly, so keep oracle words short.

#include <vector>

#include "braidnav/braid.hpp"

namespace braidnav::testing {

using FreeWord = std::vector<int>;  // nonzero ints; sign = inverse flag

inline FreeWord free_reduce_word(const FreeWord& w) {
  FreeWord out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

inline std::vector<FreeWord> artin_images(const BraidWord& word) {
  const int n = word.strands();
  std::vector<FreeWord> images(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = {i + 1};

  for (const auto& g : word.letters()) {
    const int i = g.index;
    const auto map_letter = [&](int x) -> FreeWord {
      const int a = std::abs(x);
      FreeWord img;
      if (g.sign > 0) {
        if (a == i) img = {i, i + 1, -i};
        else if (a == i + 1) img = {i};
        else img = {a};
      } else {
        if (a == i) img = {i + 1};
        else if (a == i + 1) img = {-(i + 1), i, i + 1};
        else img = {a};
      }
      if (x < 0) {
        FreeWord inv;
        for (auto it = img.rbegin(); it != img.rend(); ++it) inv.push_back(-*it);
        return inv;
      }
      return img;
    };
    for (auto& img : images) {
      FreeWord next;
      for (int x : img) {
        const FreeWord sub = map_letter(x);
        next.insert(next.end(), sub.begin(), sub.end());
      }
      img = free_reduce_word(next);
    }
  }
  return images;
}

inline bool artin_equal(const BraidWord& a, const BraidWord& b) {
  return artin_images(a) == artin_images(b);
}

}  // namespace braidnav::testing
