#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/errors.hpp"

using namespace scriptcausal;

namespace {

const char* kMixed =
    R"({"chain_id":"x","events":[{"pred":"eat","dep":"nsubj","fact":"pos"},)"
    R"({"pred":"ghost","dep":"nsubj","fact":"neg"},{"pred":"pay","dep":"nsubj","fact":"pos"}]})"
    "\n";

}  // namespace

TEST_CASE("factual filtering at load") {
  const auto kept = testing::parse_corpus(kMixed, true);
  REQUIRE(kept.chains.size() == 1);
  REQUIRE(kept.chains[0].events.size() == 2);
  CHECK(kept.chains[0].events[0].event.key() == "eat:nsubj");
  CHECK(kept.chains[0].events[1].event.key() == "pay:nsubj");

  const auto all = testing::parse_corpus(kMixed, false);
  CHECK(all.chains[0].events.size() == 3);
}

TEST_CASE("duplicate chain id is rejected with its name") {
  const std::string twice = std::string(kMixed) + kMixed;
  try {
    testing::parse_corpus(twice, true);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("'x'") != std::string::npos);
  }
}

TEST_CASE("malformed line reports the line number") {
  const std::string text = std::string(kMixed) + "{oops\n";
  try {
    testing::parse_corpus(text, true);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("unit:2") != std::string::npos);
  }
  CHECK_THROWS_AS(testing::parse_corpus(
                      R"({"chain_id":"y","events":[{"pred":"a","dep":"b","fact":"sure"}]})", true),
                  FormatError);
  CHECK_THROWS_AS(
      testing::parse_corpus(
          R"({"chain_id":"y","events":[{"pred":"a","dep":"b","fact":"pos","oot":[["c:d",5]]}]})",
          true),
      FormatError);
}

TEST_CASE("corpus write is byte stable") {
  const std::string text =
      R"({"chain_id":"a","events":[{"pred":"eat","dep":"nsubj","fact":"pos","text":["he","eats"],"oot":[["hungry:nsubj",3]]}]})"
      "\n";
  const auto corpus = testing::parse_corpus(text, false);
  std::ostringstream first;
  write_chains(first, corpus);
  const auto back = testing::parse_corpus(first.str(), false);
  CHECK(back.chains == corpus.chains);
  std::ostringstream second;
  write_chains(second, back);
  CHECK(second.str() == first.str());
}

TEST_CASE("split sizes, determinism and preconditions") {
  std::vector<std::vector<std::string>> chains(100, {"a", "b"});
  const auto corpus = testing::make_corpus(chains);
  const auto s = split_corpus(corpus, {0.9, 0.05, 0.05}, 7);
  CHECK(s.train.chains.size() == 90);
  CHECK(s.dev.chains.size() == 5);
  CHECK(s.test.chains.size() == 5);

  const auto again = split_corpus(corpus, {0.9, 0.05, 0.05}, 7);
  CHECK(again.train.chains == s.train.chains);
  CHECK(again.dev.chains == s.dev.chains);
  CHECK(again.test.chains == s.test.chains);

  CHECK_THROWS_AS(split_corpus(corpus, {0.8, 0.05, 0.05}, 7), InvalidArgument);
  CHECK_THROWS_AS(split_corpus(testing::make_corpus({{"a"}, {"b"}}), {0.5, 0.25, 0.25}, 1),
                  InvalidArgument);
}

TEST_CASE("vocabulary from a corpus") {
  const auto corpus = testing::make_corpus({{"a", "b", "c"}, {"a", "b", "c"}});
  CHECK(build_vocab_from(corpus, 2).num_events() == 3);
  CHECK(build_vocab_from(corpus, 3).num_events() == 0);
  const auto v = build_vocab_from(corpus, 1);
  const auto ids = chain_ids(corpus.chains[0], v);
  CHECK(ids == std::vector<EventId>{3, 4, 5});
}
