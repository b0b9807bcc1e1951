#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "braidnav/errors.hpp"

namespace braidnav {

/// One letter of a braid word: the elementary crossing sigma_index (sign +1)
/// or its inverse (sign -1). index is 1-based and must satisfy
/// 1 <= index <= strands-1 of the word that owns the letter.
struct Generator {
  int index;
  int sign;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// A word in the braid group B_n: an ordered product of generators and
/// generator inverses. The empty word is the identity braid. Immutable
/// after construction.
class BraidWord {
 public:
  /// Identity braid on `strands` strands (strands >= 1).
  explicit BraidWord(int strands);
  BraidWord(int strands, std::vector<Generator> letters);

  /// Convenience: letters as signed indices, e.g. {3, 1, -2, -3, -1}.
  static BraidWord from_signed(int strands, const std::vector<int>& letters);

  int strands() const { return strands_; }
  const std::vector<Generator>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  friend bool operator==(const BraidWord&, const BraidWord&) = default;

 private:
  int strands_;
  std::vector<Generator> letters_;
};

/// Bijection on {1..n}. image(i) is the 1-based image of i.
class Permutation {
 public:
  explicit Permutation(int n);  // identity
  static Permutation from_images(const std::vector<int>& one_based_images);

  int size() const { return static_cast<int>(map_.size()); }
  int image(int i) const { return map_[static_cast<std::size_t>(i - 1)]; }
  bool is_identity() const;
  void swap_images(int i, int j);  // postcompose with the transposition (i j)

  /// Composition "apply *this first, then next".
  Permutation then(const Permutation& next) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> map_;
};

/// Integer coordinates of a multicurve in a punctured disk, on which
/// generators act by an exact piecewise-linear bijection. The braid on n
/// strands is embedded between two inert flanking punctures so the same
/// interior update rule covers every generator; coordinates are the n pairs
/// (a_i, b_i) stored flat. The orbit of the base multicurve separates braid
/// group elements, which is what decides the word problem below.
struct LoopCoordinates {
  std::vector<std::int64_t> coords;

  /// Coordinates of the relaxed base multicurve: (a_i, b_i) = (0, -1).
  static LoopCoordinates base(int strands);

  void apply(const Generator& g);
  void apply_word(const BraidWord& w);

  friend bool operator==(const LoopCoordinates&, const LoopCoordinates&) = default;
};

/// Opaque equality key: canonical_key(a) == canonical_key(b) iff a and b
/// are the same element of B_n. Ordered so it can key std::map.
struct BraidKey {
  int strands = 0;
  std::vector<std::int64_t> coords;

  auto operator<=>(const BraidKey&) const = default;
  std::string to_string() const;
};

/// Concatenation a then b. Throws StrandMismatchError.
BraidWord compose(const BraidWord& a, const BraidWord& b);

/// Reverse letter order and flip signs; compose(w, inverse(w)) is the identity.
BraidWord inverse(const BraidWord& w);

/// Cancel adjacent sigma_i sigma_i^-1 pairs until none remain.
BraidWord free_reduce(const BraidWord& w);

/// Permutation induced on strand positions, leftmost letter acting first.
/// Generator sign does not matter.
Permutation permutation_of(const BraidWord& w);

/// Exponent sum (sum of letter signs); full invariant for B_2.
std::int64_t exponent_sum(const BraidWord& w);

/// Exact word-problem decision: true iff a and b represent the same group
/// element (equal modulo the commutation and braid relations).
bool are_equal(const BraidWord& a, const BraidWord& b);

BraidKey canonical_key(const BraidWord& w);

/// Upper bound [2(n-1)]^D + 1 on the number of braids of depth at most D
/// that n agents can realize. Throws OverflowError instead of wrapping.
std::uint64_t mode_count_bound(int agents, int max_depth);

/// Textual format: whitespace-separated signed 1-based generator indices,
/// e.g. "3 1 -2 -3 -1". The identity braid prints as the empty string.
std::string to_text(const BraidWord& w);
BraidWord parse_word(int strands, std::string_view text);

}  // namespace braidnav
