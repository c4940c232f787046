#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace strew {

/// A letter is an index into the owning system's alphabet. Display symbols
/// live in the Alphabet; everything algorithmic works on ids.
struct Letter {
  std::uint8_t id = 0;

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter, Letter) = default;
};

/// An immutable-by-convention sequence of letters. The empty word is the
/// monoid identity. Ordering is shortlex, which makes ordered containers
/// of words deterministic and length-monotone.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}

  static Word single(Letter x) { return Word({x}); }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  const std::vector<Letter>& letters() const { return letters_; }

  Word subword(std::size_t pos, std::size_t len) const {
    return Word(std::vector<Letter>(letters_.begin() + pos,
                                    letters_.begin() + pos + len));
  }
  Word prefix(std::size_t len) const { return subword(0, len); }
  Word suffix(std::size_t len) const {
    return subword(letters_.size() - len, len);
  }

  /// Cyclic rotation: w[r:] + w[:r].
  Word rotated(std::size_t r) const {
    if (letters_.empty()) return *this;
    r %= letters_.size();
    std::vector<Letter> out;
    out.reserve(letters_.size());
    out.insert(out.end(), letters_.begin() + r, letters_.end());
    out.insert(out.end(), letters_.begin(), letters_.begin() + r);
    return Word(std::move(out));
  }

  Word repeated(std::size_t k) const {
    std::vector<Letter> out;
    out.reserve(letters_.size() * k);
    for (std::size_t i = 0; i < k; ++i)
      out.insert(out.end(), letters_.begin(), letters_.end());
    return Word(std::move(out));
  }

  Word& append(Letter x) {
    letters_.push_back(x);
    return *this;
  }
  Word& append(const Word& w) {
    letters_.insert(letters_.end(), w.letters_.begin(), w.letters_.end());
    return *this;
  }

  friend Word operator+(const Word& a, const Word& b) {
    Word out = a;
    out.append(b);
    return out;
  }
  friend Word operator+(const Word& a, Letter b) {
    Word out = a;
    out.append(b);
    return out;
  }

  /// True if `w` occurs as a contiguous subword starting at `pos`.
  bool contains_at(const Word& w, std::size_t pos) const {
    if (pos + w.size() > letters_.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (letters_[pos + i] != w[i]) return false;
    return true;
  }

  friend bool operator==(const Word&, const Word&) = default;

  /// Shortlex: length first, then letter ids.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters_.size() != b.letters_.size())
      return a.letters_.size() < b.letters_.size();
    return a.letters_ < b.letters_;
  }
  friend bool operator>(const Word& a, const Word& b) { return b < a; }
  friend bool operator<=(const Word& a, const Word& b) { return !(b < a); }
  friend bool operator>=(const Word& a, const Word& b) { return !(a < b); }

 private:
  std::vector<Letter> letters_;
};

}  // namespace strew
