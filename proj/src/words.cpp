#include "okamoto/words.hpp"

#include <algorithm>
#include <cctype>

#include "okamoto/numeric.hpp"

namespace okamoto {

int alphabet_min(Alphabet a) { return a == Alphabet::Signed ? -1 : 0; }
int alphabet_max(Alphabet a) { return a == Alphabet::Ternary ? 2 : 1; }

const char* to_string(Alphabet a) {
  switch (a) {
    case Alphabet::Binary: return "binary";
    case Alphabet::Ternary: return "ternary";
    case Alphabet::Signed: return "signed";
  }
  return "?";
}

namespace {

void check_symbol(Alphabet a, int s) {
  if (s < alphabet_min(a) || s > alphabet_max(a))
    throw Error("AlphabetMismatch",
                "symbol " + std::to_string(s) + " not in the " + to_string(a) + " alphabet");
}

void same_alphabet(const Word& a, const Word& b) {
  if (a.alphabet() != b.alphabet()) throw Error("AlphabetMismatch", "words over different alphabets");
}

void require_binary(Alphabet a) {
  if (a != Alphabet::Binary) throw Error("AlphabetMismatch", "binary alphabet required");
}

std::string symbol_text(int s) { return std::to_string(s); }

}  // namespace

// ---------------------------------------------------------------- Word

Word::Word(Alphabet a, std::vector<int> symbols) : alphabet_(a), s_(std::move(symbols)) {
  for (int s : s_) check_symbol(a, s);
}

Word Word::repeat(Alphabet a, int symbol, std::size_t n) {
  return Word(a, std::vector<int>(n, symbol));
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, s_.size());
  Word w;
  w.alphabet_ = alphabet_;
  w.s_.assign(s_.begin(), s_.begin() + n);
  return w;
}

Word Word::suffix_from(std::size_t i) const {
  i = std::min(i, s_.size());
  Word w;
  w.alphabet_ = alphabet_;
  w.s_.assign(s_.begin() + i, s_.end());
  return w;
}

Word Word::operator+(const Word& o) const {
  if (!o.empty() && !empty()) same_alphabet(*this, o);
  Word w = empty() ? Word(o.alphabet_) : *this;
  w.s_.insert(w.s_.end(), o.s_.begin(), o.s_.end());
  return w;
}

Word Word::pow(std::size_t n) const {
  Word w(alphabet_);
  w.s_.reserve(s_.size() * n);
  for (std::size_t i = 0; i < n; ++i) w.s_.insert(w.s_.end(), s_.begin(), s_.end());
  return w;
}

void Word::push_back(int symbol) {
  check_symbol(alphabet_, symbol);
  s_.push_back(symbol);
}

bool Word::starts_with(const Word& p) const {
  return p.size() <= size() && std::equal(p.s_.begin(), p.s_.end(), s_.begin());
}

std::string Word::str() const {
  std::string out;
  for (std::size_t i = 0; i < s_.size();) {
    std::size_t j = i;
    while (j < s_.size() && s_[j] == s_[i]) ++j;
    if (j - i == 1) {
      out += symbol_text(s_[i]);
    } else if (j < s_.size() && s_[j] >= 0) {
      // A digit right after the count would extend it.
      out += "(" + symbol_text(s_[i]) + "^" + std::to_string(j - i) + ")";
    } else {
      out += symbol_text(s_[i]) + "^" + std::to_string(j - i);
    }
    i = j;
  }
  return out;
}

std::string Word::digits() const {
  std::string out;
  for (int s : s_) out += symbol_text(s);
  return out;
}

// ---------------------------------------------------------------- Tail

Tail::Tail() : pre_(Alphabet::Binary), per_(Alphabet::Binary, {0}) {}

Tail::Tail(Word pre, Word per) : pre_(std::move(pre)), per_(std::move(per)) {
  if (per_.empty()) throw Error("InputError", "empty period");
  if (!pre_.empty()) same_alphabet(pre_, per_);
  pre_ = Word(per_.alphabet(), pre_.symbols());
  canonicalize();
}

Tail Tail::constant(Alphabet a, int symbol) { return Tail(Word(a), Word(a, {symbol})); }

void Tail::canonicalize() {
  const auto& p = per_.symbols();
  std::size_t n = p.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = p[i] == p[i - d];
    if (ok) {
      per_ = per_.prefix(d);
      break;
    }
  }
  std::vector<int> pre = pre_.symbols();
  std::vector<int> per = per_.symbols();
  while (!pre.empty() && pre.back() == per.back()) {
    pre.pop_back();
    std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
  }
  pre_ = Word(per_.alphabet(), std::move(pre));
  per_ = Word(per_.alphabet(), std::move(per));
}

int Tail::at(std::size_t i) const {
  if (i < pre_.size()) return pre_[i];
  return per_[(i - pre_.size()) % per_.size()];
}

Word Tail::prefix(std::size_t n) const {
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = at(i);
  return Word(alphabet(), std::move(s));
}

Tail Tail::shift(std::size_t n) const {
  if (n <= pre_.size()) return Tail(pre_.suffix_from(n), per_);
  std::size_t r = (n - pre_.size()) % per_.size();
  return Tail(Word(alphabet()), per_.suffix_from(r) + per_.prefix(r));
}

Tail Tail::prepend(const Word& w) const { return Tail(w + pre_, per_); }

std::string Tail::str() const { return pre_.str() + "(" + per_.str() + ")*"; }

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(const std::string& text, Alphabet a) : a_(a) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) t_ += c;
  }

  Tail tail() {
    std::vector<int> pre = seq();
    if (pos_ == t_.size()) fail("missing periodic part '(...)*'");
    expect('(');
    std::vector<int> per = seq();
    expect(')');
    expect('*');
    if (pos_ != t_.size()) fail("trailing characters");
    if (per.empty()) fail("empty period");
    return Tail(Word(a_, pre), Word(a_, per));
  }

  Word word() {
    std::vector<int> s = seq();
    if (pos_ != t_.size()) fail("unexpected character");
    return Word(a_, s);
  }

 private:
  std::string t_;
  std::size_t pos_ = 0;
  Alphabet a_;

  [[noreturn]] void fail(const std::string& why) {
    throw Error("InputError", "word syntax at offset " + std::to_string(pos_) + ": " + why);
  }

  void expect(char c) {
    if (pos_ >= t_.size() || t_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // A group whose closing parenthesis is followed by '*' is the periodic part.
  bool at_period() const {
    if (pos_ >= t_.size() || t_[pos_] != '(') return false;
    int depth = 0;
    for (std::size_t i = pos_; i < t_.size(); ++i) {
      if (t_[i] == '(') ++depth;
      if (t_[i] == ')' && --depth == 0) return i + 1 < t_.size() && t_[i + 1] == '*';
    }
    return false;
  }

  std::vector<int> seq() {
    std::vector<int> out;
    while (pos_ < t_.size() && t_[pos_] != ')' && !at_period()) {
      std::vector<int> item = atom();
      std::size_t n = 1;
      if (pos_ < t_.size() && t_[pos_] == '^') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
        if (start == pos_) fail("expected repetition count");
        std::string num = t_.substr(start, pos_ - start);
        if (num.size() > 6) fail("repetition count too large");
        n = std::stoul(num);
      }
      for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), item.begin(), item.end());
    }
    return out;
  }

  std::vector<int> atom() {
    char c = t_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<int> inner = seq();
      expect(')');
      return inner;
    }
    int s;
    if (c == '-') {
      ++pos_;
      if (pos_ >= t_.size() || t_[pos_] != '1') fail("expected '1' after '-'");
      s = -1;
    } else if (c >= '0' && c <= '9') {
      s = c - '0';
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
    ++pos_;
    if (s < alphabet_min(a_) || s > alphabet_max(a_))
      throw Error("AlphabetMismatch", "symbol " + std::to_string(s) + " not in the " +
                                          to_string(a_) + " alphabet");
    return {s};
  }
};

}  // namespace

Word parse_word(const std::string& text, Alphabet a) { return Parser(text, a).word(); }

Tail parse_tail(const std::string& text, Alphabet a) { return Parser(text, a).tail(); }

// ---------------------------------------------------------------- subshifts

bool avoids(const Word& w, const Word& factor) {
  same_alphabet(w, factor);
  if (factor.empty()) return false;
  const auto& s = w.symbols();
  const auto& f = factor.symbols();
  return std::search(s.begin(), s.end(), f.begin(), f.end()) == s.end();
}

namespace {

std::vector<Word> forbidden_factors(const SubshiftSpec& spec) {
  if (spec.k < 1) throw Error("InputError", "subshift parameter k must be >= 1");
  Alphabet b = Alphabet::Binary;
  std::size_t k = static_cast<std::size_t>(spec.k);
  if (spec.kind == SubshiftKind::STilde) return {Word::repeat(b, 0, k), Word::repeat(b, 1, k)};
  return {Word(b, {0}) + Word::repeat(b, 1, k), Word(b, {1}) + Word::repeat(b, 0, k)};
}

bool is_rotation(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  Word doubled = b + b;
  const auto& d = doubled.symbols();
  const auto& s = a.symbols();
  return std::search(d.begin(), d.end(), s.begin(), s.end()) != d.end();
}

}  // namespace

bool admissible_prefix(const SubshiftSpec& spec, const Word& w) {
  require_binary(w.alphabet());
  for (const auto& f : forbidden_factors(spec))
    if (!avoids(w, f)) return false;
  return true;
}

bool member(const SubshiftSpec& spec, const Tail& t) {
  require_binary(t.alphabet());
  std::size_t reps = (static_cast<std::size_t>(spec.k) + 1) / t.period().size() + 2;
  Word window = t.preperiod() + t.period().pow(reps);
  if (!admissible_prefix(spec, window)) return false;
  if (spec.kind == SubshiftKind::S) return true;
  Alphabet b = Alphabet::Binary;
  std::size_t k = static_cast<std::size_t>(spec.k);
  Word a = Word(b, {0}) + Word::repeat(b, 1, k - 1);
  Word c = Word(b, {1}) + Word::repeat(b, 0, k - 1);
  return !is_rotation(t.period(), a) && !is_rotation(t.period(), c);
}

bool lex_consecutive(const Word& a, const Word& b) {
  require_binary(a.alphabet());
  require_binary(b.alphabet());
  if (a.size() != b.size()) throw Error("LengthMismatch", "words of different lengths");
  if (a.empty()) return false;
  Integer va(a.digits(), 2), vb(b.digits(), 2);
  Integer d = va - vb;
  return d == 1 || d == -1;
}

Word reflect(const Word& w) {
  require_binary(w.alphabet());
  std::vector<int> s(w.symbols());
  for (int& v : s) v = 1 - v;
  return Word(Alphabet::Binary, std::move(s));
}

Tail reflect(const Tail& t) { return Tail(reflect(t.preperiod()), reflect(t.period())); }

}  // namespace okamoto
