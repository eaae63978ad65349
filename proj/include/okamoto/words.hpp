#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace okamoto {

enum class Alphabet { Binary, Ternary, Signed };

int alphabet_min(Alphabet a);
int alphabet_max(Alphabet a);
const char* to_string(Alphabet a);

class Word {
 public:
  Word() = default;
  explicit Word(Alphabet a, std::vector<int> symbols = {});
  static Word repeat(Alphabet a, int symbol, std::size_t n);

  Alphabet alphabet() const { return alphabet_; }
  const std::vector<int>& symbols() const { return s_; }
  std::size_t size() const { return s_.size(); }
  bool empty() const { return s_.empty(); }
  int operator[](std::size_t i) const { return s_[i]; }

  Word prefix(std::size_t n) const;
  Word suffix_from(std::size_t i) const;
  Word operator+(const Word& o) const;
  Word pow(std::size_t n) const;
  void push_back(int symbol);
  bool starts_with(const Word& p) const;

  bool operator==(const Word& o) const { return alphabet_ == o.alphabet_ && s_ == o.s_; }
  bool operator!=(const Word& o) const { return !(*this == o); }
  bool operator<(const Word& o) const { return s_ < o.s_; }

  // Compressed text form, e.g. "10^3".
  std::string str() const;
  // Plain digit string, e.g. "1000".
  std::string digits() const;

 private:
  Alphabet alphabet_ = Alphabet::Binary;
  std::vector<int> s_;
};

// Eventually periodic sequence pre . per per per ..., kept in canonical form.
class Tail {
 public:
  Tail();  // 0^inf over {0,1}
  Tail(Word pre, Word per);
  static Tail constant(Alphabet a, int symbol);

  Alphabet alphabet() const { return per_.alphabet(); }
  const Word& preperiod() const { return pre_; }
  const Word& period() const { return per_; }

  int at(std::size_t i) const;
  Word prefix(std::size_t n) const;
  Tail shift(std::size_t n) const;
  Tail prepend(const Word& w) const;

  bool operator==(const Tail& o) const { return pre_ == o.pre_ && per_ == o.per_; }
  bool operator!=(const Tail& o) const { return !(*this == o); }

  std::string str() const;

 private:
  Word pre_;
  Word per_;
  void canonicalize();
};

// Text syntax: tail := seq ['(' seq ')' '*'], item := atom ['^' n], atom := symbol | '(' seq ')'.
// Symbols are 0, 1, 2 or -1 depending on the alphabet.
Word parse_word(const std::string& text, Alphabet a = Alphabet::Binary);
Tail parse_tail(const std::string& text, Alphabet a = Alphabet::Binary);

bool avoids(const Word& w, const Word& factor);

enum class SubshiftKind { S, SHat, STilde };

struct SubshiftSpec {
  SubshiftKind kind = SubshiftKind::S;
  int k = 1;
};

bool member(const SubshiftSpec& spec, const Tail& t);
// Finite word avoids the forbidden factors of spec (tail condition ignored).
bool admissible_prefix(const SubshiftSpec& spec, const Word& w);

bool lex_consecutive(const Word& a, const Word& b);

Word reflect(const Word& w);
Tail reflect(const Tail& t);

}  // namespace okamoto
