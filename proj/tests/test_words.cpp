#include "doctest.h"
#include "okamoto/numeric.hpp"
#include "okamoto/words.hpp"

#include <map>
#include <random>
#include <set>

using namespace okamoto;

namespace {

Word bw(const std::string& s) { return parse_word(s); }
Tail bt(const std::string& s) { return parse_tail(s); }

std::vector<Word> all_words(std::size_t n) {
  std::vector<Word> out;
  for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (m >> (n - 1 - i)) & 1;
    out.emplace_back(Alphabet::Binary, s);
  }
  return out;
}

// Every (pre, per) pair over {0,1} with |pre| + |per| <= n and |per| >= 1.
std::vector<std::pair<Word, Word>> raw_tails(std::size_t n) {
  std::vector<std::pair<Word, Word>> out;
  for (std::size_t total = 1; total <= n; ++total)
    for (std::size_t lp = 1; lp <= total; ++lp)
      for (const auto& pre : all_words(total - lp))
        for (const auto& per : all_words(lp)) out.emplace_back(pre, per);
  return out;
}

std::vector<int> expand(const Word& pre, const Word& per, std::size_t n) {
  std::vector<int> s;
  for (std::size_t i = 0; i < n; ++i)
    s.push_back(i < pre.size() ? pre[i] : per[(i - pre.size()) % per.size()]);
  return s;
}

}  // namespace

TEST_CASE("avoids examples") {
  CHECK_FALSE(avoids(bw("01^9"), bw("01^9")));
  CHECK(avoids(bw("101010"), bw("0^9")));
  CHECK_FALSE(avoids(bw("10^91"), bw("10^9")));
  CHECK_THROWS_AS(avoids(bw("01"), parse_word("2", Alphabet::Ternary)), Error);
}

TEST_CASE("member examples") {
  CHECK(member({SubshiftKind::STilde, 3}, bt("(01)*")));
  CHECK_FALSE(member({SubshiftKind::SHat, 3}, bt("(011)*")));
  CHECK(member({SubshiftKind::S, 9}, bt("(1)*")));
  CHECK_FALSE(member({SubshiftKind::SHat, 3}, bt("1^5(101)*")));
  CHECK(member({SubshiftKind::S, 3}, bt("(011)*")));
  CHECK_FALSE(member({SubshiftKind::S, 3}, bt("0(1)*")));
  CHECK_THROWS_AS(member({SubshiftKind::S, 3}, parse_tail("(2)*", Alphabet::Ternary)), Error);
}

TEST_CASE("lex_consecutive examples") {
  CHECK(lex_consecutive(bw("011"), bw("100")));
  CHECK(lex_consecutive(bw("010"), bw("011")));
  CHECK_FALSE(lex_consecutive(bw("001"), bw("100")));
  CHECK_THROWS_AS(lex_consecutive(bw("01"), bw("100")), Error);
}

TEST_CASE("reflect examples") {
  CHECK(reflect(bw("0110")) == bw("1001"));
  CHECK(reflect(bt("(0)*")) == bt("(1)*"));
  CHECK(reflect(Word()).empty());
}

TEST_CASE("syntax round trip") {
  Tail t = bt("1(0^3)^2(01)*");
  CHECK(t.preperiod() == bw("1000000"));
  CHECK(t.period() == bw("01"));
  CHECK(t.str() == "10^6(01)*");
  CHECK(bt(t.str()) == t);
  Tail s = parse_tail("-10(1-1)*", Alphabet::Signed);
  CHECK(s.preperiod().symbols() == std::vector<int>{-1, 0});
  CHECK(parse_tail(s.str(), Alphabet::Signed) == s);
  CHECK_THROWS_AS(bt("0101"), Error);
  CHECK_THROWS_AS(bt("(01"), Error);
  CHECK_THROWS_AS(bt("2(0)*"), Error);
}

TEST_CASE("canonical form rolls back and shortens the period") {
  CHECK(bt("01(01)*") == bt("(01)*"));
  CHECK(bt("0(1010)*") == bt("(01)*"));
  CHECK(bt("11(1)*").preperiod().empty());
  CHECK(bt("1(0)*").preperiod() == bw("1"));
}

TEST_CASE("property: tails are equal iff their sequences agree") {
  // Sequences with preperiod <= 8 and period <= 8 agree iff they agree on 8 + lcm(1..8) symbols.
  const std::size_t horizon = 8 + 840;
  std::map<std::vector<int>, std::set<std::string>> by_sequence;
  std::map<std::string, std::vector<int>> by_form;
  for (const auto& [pre, per] : raw_tails(8)) {
    Tail t(pre, per);
    auto seq = expand(pre, per, horizon);
    by_sequence[seq].insert(t.str());
    auto [it, fresh] = by_form.emplace(t.str(), seq);
    if (!fresh) CHECK(it->second == seq);
    CHECK(bt(t.str()) == t);
    CHECK(Tail(t.preperiod(), t.period()).str() == t.str());
  }
  for (const auto& [seq, forms] : by_sequence) CHECK(forms.size() == 1);
}

TEST_CASE("property: subshift inclusions and reflection symmetry") {
  for (int k = 1; k <= 4; ++k) {
    for (const auto& [pre, per] : raw_tails(7)) {
      Tail t(pre, per);
      bool s = member({SubshiftKind::S, k}, t);
      bool h = member({SubshiftKind::SHat, k}, t);
      bool tl = member({SubshiftKind::STilde, k}, t);
      if (tl) CHECK(h);
      if (h) CHECK(s);
      for (auto kind : {SubshiftKind::S, SubshiftKind::SHat, SubshiftKind::STilde})
        CHECK(member({kind, k}, t) == member({kind, k}, reflect(t)));
    }
  }
}

TEST_CASE("property: S^k membership matches a brute-force factor scan") {
  for (int k = 2; k <= 4; ++k) {
    for (const auto& [pre, per] : raw_tails(7)) {
      Tail t(pre, per);
      auto seq = expand(pre, per, 60);
      bool bad = false;
      for (std::size_t i = 0; i + k + 1 <= seq.size(); ++i) {
        bool f0 = seq[i] == 0, f1 = seq[i] == 1;
        for (int j = 1; j <= k; ++j) {
          f0 = f0 && seq[i + j] == 1;
          f1 = f1 && seq[i + j] == 0;
        }
        bad = bad || f0 || f1;
      }
      CHECK(member({SubshiftKind::S, k}, t) == !bad);
    }
  }
}

TEST_CASE("property: lex_consecutive matches integer values") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + rng() % 12;
    std::uint64_t a = rng() % (1u << n), b = (rng() % 3 == 0) ? a + 1 : rng() % (1u << n);
    if (b >= (1u << n)) continue;
    auto to_word = [n](std::uint64_t v) {
      std::vector<int> s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = (v >> (n - 1 - i)) & 1;
      return Word(Alphabet::Binary, s);
    };
    bool expect = a + 1 == b || b + 1 == a;
    CHECK(lex_consecutive(to_word(a), to_word(b)) == expect);
  }
}

TEST_CASE("tail navigation") {
  Tail t = bt("10^2(01)*");
  CHECK(t.prefix(6) == bw("100010"));
  CHECK(t.shift(3) == bt("(01)*"));
  CHECK(t.shift(4) == bt("(10)*"));
  CHECK(t.prepend(bw("11")) == bt("1110^2(01)*"));
}
