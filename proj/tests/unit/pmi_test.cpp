#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "helpers.hpp"
#include "scriptcausal/pmi.hpp"
#include "scriptcausal/synth.hpp"

using namespace scriptcausal;

namespace {

using Chains = std::vector<std::vector<EventId>>;

OrderedCounts hand_counts() {
  OrderedCounts c;
  c.left_totals.assign(5, 0);
  c.right_totals.assign(5, 0);
  c.pairs[{3, 4}] = 3;
  c.left_totals[3] = 4;
  c.right_totals[4] = 3;
  c.grand_total = 10;
  return c;
}

}  // namespace

TEST_CASE("skip-bigram window enumeration") {
  const Chains abc{{3, 4, 5}};
  const auto w2 = count_skip_bigrams(abc, 6, 2);
  CHECK(w2.pairs.size() == 3);
  CHECK(w2.count(3, 4) == 1);
  CHECK(w2.count(3, 5) == 1);
  CHECK(w2.count(4, 5) == 1);
  CHECK(w2.count(4, 3) == 0);
  CHECK(w2.grand_total == 3);
  CHECK(w2.left_totals[3] == 2);
  CHECK(w2.right_totals[5] == 2);

  const Chains abcd{{3, 4, 5, 6}};
  const auto w1 = count_skip_bigrams(abcd, 7, 1);
  CHECK(w1.pairs.size() == 3);
  CHECK(w1.count(3, 4) == 1);
  CHECK(w1.count(4, 5) == 1);
  CHECK(w1.count(5, 6) == 1);

  const Chains aa{{3, 3}};
  CHECK(count_skip_bigrams(aa, 4, 2).count(3, 3) == 1);
  CHECK(count_skip_bigrams(aa, 4, 2, false).count(3, 3) == 0);
}

TEST_CASE("ordered PMI on a hand fixture") {
  const auto c = hand_counts();
  const double raw = std::log((3.0 / 10.0) / ((4.0 / 10.0) * (3.0 / 10.0)));
  CHECK(ordered_pmi(c, 3, 4, false) == doctest::Approx(raw).epsilon(1e-14));
  CHECK(ordered_pmi(c, 3, 4, false) == doctest::Approx(0.9163).epsilon(1e-4));
  const double discount = (3.0 / 4.0) * (3.0 / 4.0);
  CHECK(ordered_pmi(c, 3, 4, true) == doctest::Approx(raw * discount).epsilon(1e-14));
  CHECK(ordered_pmi(c, 3, 4, true) == doctest::Approx(0.5154).epsilon(1e-4));
  CHECK(ordered_pmi(c, 4, 3, false) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("discount shrinks every positive count") {
  const Chains chains{{3, 4, 3, 5, 4, 3, 6, 5}, {4, 4, 6, 3}};
  const auto c = count_skip_bigrams(chains, 7, 3);
  for (const auto& [pair, n] : c.pairs) {
    const double raw = ordered_pmi(c, pair.first, pair.second, false);
    const double disc = ordered_pmi(c, pair.first, pair.second, true);
    CHECK(std::abs(disc) < std::abs(raw) + 1e-15);
    if (raw != 0.0) CHECK(disc / raw > 0.0);
  }
}

TEST_CASE("counts are additive over corpus concatenation") {
  const Chains a{{3, 4, 5, 3}, {5, 5}};
  const Chains b{{4, 3}, {3, 5, 4, 4, 3}};
  Chains ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  auto merged = count_skip_bigrams(a, 6, 2);
  merged.merge(count_skip_bigrams(b, 6, 2));
  CHECK(merged == count_skip_bigrams(ab, 6, 2));
  CHECK(count_skip_bigrams(ab, 6, 2, true, 3) == count_skip_bigrams(ab, 6, 2, true, 1));
}

TEST_CASE("counts file round-trips") {
  const auto corpus = testing::make_corpus({{"a", "b", "c"}, {"b", "a"}});
  const auto vocab = build_vocab_from(corpus, 1);
  Chains ids;
  for (const auto& ch : corpus.chains) ids.push_back(chain_ids(ch, vocab));
  const auto c = count_skip_bigrams(ids, vocab.size(), 2);
  std::stringstream s;
  write_counts(s, c, vocab);
  const auto text = s.str();
  const auto back = read_counts(s, vocab, "unit");
  CHECK(back == c);
  std::ostringstream again;
  write_counts(again, back, vocab);
  CHECK(again.str() == text);
}

TEST_CASE("PMI picks up the confounded association") {
  const auto cbn = build_fixture("F-POPCORN");
  const auto corpus = sample_chains(cbn, 5000, 4, false);
  const auto vocab = build_vocab_from(corpus, 1);
  Chains ids;
  for (const auto& ch : corpus.chains) ids.push_back(chain_ids(ch, vocab));
  const auto c = count_skip_bigrams(ids, vocab.size(), 2);
  const auto popcorn = vocab.lookup(cbn.events[cbn.role("confounded_sibling")]);
  const auto cry = vocab.lookup(cbn.events[cbn.role("effect")]);
  CHECK(ordered_pmi(c, popcorn, cry, true) > 0.0);
}
