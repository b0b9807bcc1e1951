#include "braidnav/braid.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace braidnav {

namespace {

void validate_letter(int strands, const Generator& g) {
  if (g.sign != 1 && g.sign != -1) {
    throw Error("generator sign must be +1 or -1");
  }
  if (g.index < 1 || g.index >= strands) {
    throw Error("generator index " + std::to_string(g.index) +
                " out of range for " + std::to_string(strands) + " strands");
  }
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) {
    throw OverflowError("loop coordinate overflow");
  }
  return r;
}

std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_sub_overflow(x, y, &r)) {
    throw OverflowError("loop coordinate overflow");
  }
  return r;
}

std::int64_t pos(std::int64_t x) { return x > 0 ? x : 0; }
std::int64_t neg(std::int64_t x) { return x < 0 ? x : 0; }

}  // namespace

BraidWord::BraidWord(int strands) : strands_(strands) {
  if (strands < 1) throw Error("strand count must be >= 1");
}

BraidWord::BraidWord(int strands, std::vector<Generator> letters)
    : strands_(strands), letters_(std::move(letters)) {
  if (strands < 1) throw Error("strand count must be >= 1");
  for (const auto& g : letters_) validate_letter(strands_, g);
}

BraidWord BraidWord::from_signed(int strands, const std::vector<int>& letters) {
  std::vector<Generator> gens;
  gens.reserve(letters.size());
  for (int v : letters) {
    if (v == 0) throw Error("generator index 0 is not a letter");
    gens.push_back(Generator{std::abs(v), v > 0 ? 1 : -1});
  }
  return BraidWord(strands, std::move(gens));
}

Permutation::Permutation(int n) : map_(static_cast<std::size_t>(n)) {
  if (n < 1) throw Error("permutation size must be >= 1");
  std::iota(map_.begin(), map_.end(), 1);
}

Permutation Permutation::from_images(const std::vector<int>& images) {
  Permutation p(static_cast<int>(images.size()));
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    int v = images[i];
    if (v < 1 || v > static_cast<int>(images.size()) || seen[static_cast<std::size_t>(v - 1)]) {
      throw Error("images do not form a bijection");
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
    p.map_[i] = v;
  }
  return p;
}

bool Permutation::is_identity() const {
  for (int i = 1; i <= size(); ++i) {
    if (image(i) != i) return false;
  }
  return true;
}

void Permutation::swap_images(int i, int j) {
  for (auto& v : map_) {
    if (v == i) v = j;
    else if (v == j) v = i;
  }
}

Permutation Permutation::then(const Permutation& next) const {
  if (size() != next.size()) throw Error("permutation size mismatch");
  Permutation r(size());
  for (int i = 1; i <= size(); ++i) {
    r.map_[static_cast<std::size_t>(i - 1)] = next.image(image(i));
  }
  return r;
}

LoopCoordinates LoopCoordinates::base(int strands) {
  LoopCoordinates lc;
  lc.coords.assign(static_cast<std::size_t>(2 * strands), 0);
  for (int i = 0; i < strands; ++i) lc.coords[static_cast<std::size_t>(2 * i + 1)] = -1;
  return lc;
}

void LoopCoordinates::apply(const Generator& g) {
  // Letter i touches coordinate pairs i and i+1 (1-based); with the flanking
  // punctures both pairs always exist.
  const std::size_t ia = static_cast<std::size_t>(2 * (g.index - 1));
  const std::size_t ib = ia + 1;
  const std::size_t ic = ia + 2;
  const std::size_t id = ia + 3;
  const std::int64_t a = coords[ia], b = coords[ib];
  const std::int64_t c = coords[ic], d = coords[id];
  if (g.sign > 0) {
    const std::int64_t t = checked_sub(checked_add(checked_sub(a, c), pos(d)), neg(b));
    coords[ia] = checked_add(checked_add(a, pos(b)), pos(checked_sub(pos(d), t)));
    coords[ib] = checked_sub(d, pos(t));
    coords[ic] = checked_add(checked_add(c, neg(d)), neg(checked_add(neg(b), t)));
    coords[id] = checked_add(b, pos(t));
  } else {
    const std::int64_t t = checked_sub(checked_add(checked_sub(c, a), pos(d)), neg(b));
    coords[ia] = checked_sub(checked_sub(a, pos(b)), pos(checked_sub(pos(d), t)));
    coords[ib] = checked_sub(d, pos(t));
    coords[ic] = checked_sub(checked_sub(c, neg(d)), neg(checked_add(neg(b), t)));
    coords[id] = checked_add(b, pos(t));
  }
}

void LoopCoordinates::apply_word(const BraidWord& w) {
  for (const auto& g : w.letters()) apply(g);
}

std::string BraidKey::to_string() const {
  std::ostringstream os;
  os << "B" << strands << ":[";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) os << ",";
    os << coords[i];
  }
  os << "]";
  return os.str();
}

BraidWord compose(const BraidWord& a, const BraidWord& b) {
  if (a.strands() != b.strands()) {
    throw StrandMismatchError("cannot compose words on " + std::to_string(a.strands()) +
                              " and " + std::to_string(b.strands()) + " strands");
  }
  std::vector<Generator> letters = a.letters();
  letters.insert(letters.end(), b.letters().begin(), b.letters().end());
  return BraidWord(a.strands(), std::move(letters));
}

BraidWord inverse(const BraidWord& w) {
  std::vector<Generator> letters(w.letters().rbegin(), w.letters().rend());
  for (auto& g : letters) g.sign = -g.sign;
  return BraidWord(w.strands(), std::move(letters));
}

BraidWord free_reduce(const BraidWord& w) {
  std::vector<Generator> out;
  out.reserve(w.size());
  for (const auto& g : w.letters()) {
    if (!out.empty() && out.back().index == g.index && out.back().sign == -g.sign) {
      out.pop_back();
    } else {
      out.push_back(g);
    }
  }
  return BraidWord(w.strands(), std::move(out));
}

Permutation permutation_of(const BraidWord& w) {
  // Track the position of each strand; letter sigma_i swaps whatever strands
  // currently sit at positions i and i+1.
  Permutation p(w.strands());
  std::vector<int> pos_of(static_cast<std::size_t>(w.strands()));
  std::iota(pos_of.begin(), pos_of.end(), 1);  // pos_of[s-1] = position of strand s
  std::vector<int> at(pos_of);                 // at[k-1] = strand at position k
  for (const auto& g : w.letters()) {
    int s1 = at[static_cast<std::size_t>(g.index - 1)];
    int s2 = at[static_cast<std::size_t>(g.index)];
    std::swap(at[static_cast<std::size_t>(g.index - 1)], at[static_cast<std::size_t>(g.index)]);
    std::swap(pos_of[static_cast<std::size_t>(s1 - 1)], pos_of[static_cast<std::size_t>(s2 - 1)]);
  }
  std::vector<int> images(static_cast<std::size_t>(w.strands()));
  for (int s = 1; s <= w.strands(); ++s) {
    images[static_cast<std::size_t>(s - 1)] = pos_of[static_cast<std::size_t>(s - 1)];
  }
  return Permutation::from_images(images);
}

std::int64_t exponent_sum(const BraidWord& w) {
  std::int64_t e = 0;
  for (const auto& g : w.letters()) e += g.sign;
  return e;
}

BraidKey canonical_key(const BraidWord& w) {
  BraidKey key;
  key.strands = w.strands();
  if (w.strands() <= 2) {
    // B_1 is trivial and B_2 is infinite cyclic: the exponent sum decides.
    if (w.strands() == 2) key.coords = {exponent_sum(w)};
    return key;
  }
  LoopCoordinates lc = LoopCoordinates::base(w.strands());
  lc.apply_word(w);
  key.coords = std::move(lc.coords);
  return key;
}

bool are_equal(const BraidWord& a, const BraidWord& b) {
  if (a.strands() != b.strands()) {
    throw StrandMismatchError("cannot compare words on different strand counts");
  }
  return canonical_key(a) == canonical_key(b);
}

std::uint64_t mode_count_bound(int agents, int max_depth) {
  if (agents < 2) throw Error("mode_count_bound requires at least 2 agents");
  if (max_depth < 0) throw Error("mode_count_bound requires depth >= 0");
  const std::uint64_t base = 2ull * static_cast<std::uint64_t>(agents - 1);
  std::uint64_t acc = 1;
  for (int i = 0; i < max_depth; ++i) {
    if (__builtin_mul_overflow(acc, base, &acc)) {
      throw OverflowError("mode_count_bound overflows 64 bits");
    }
  }
  std::uint64_t out;
  if (__builtin_add_overflow(acc, 1ull, &out)) {
    throw OverflowError("mode_count_bound overflows 64 bits");
  }
  return out;
}

std::string to_text(const BraidWord& w) {
  std::ostringstream os;
  bool first = true;
  for (const auto& g : w.letters()) {
    if (!first) os << ' ';
    os << g.sign * g.index;
    first = false;
  }
  return os.str();
}

BraidWord parse_word(int strands, std::string_view text) {
  std::vector<int> letters;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p != end) {
    while (p != end && (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r')) ++p;
    if (p == end) break;
    int value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || next == p) {
      throw Error("invalid braid word text: '" + std::string(text) + "'");
    }
    letters.push_back(value);
    p = next;
  }
  return BraidWord::from_signed(strands, letters);
}

}  // namespace braidnav
