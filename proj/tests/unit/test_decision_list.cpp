#include <random>
#include <sstream>

#include "doctest.h"
#include "seqtag/decision_list.hpp"
#include "seqtag/error.hpp"
#include "support/oracles.hpp"

using namespace seqtag;

namespace {

constexpr TagId A = 0, B = 1, C = 2;
constexpr FeatureId f1 = 1, f2 = 2;

const TagSet& abc() {
  static const TagSet tags({"A", "B", "C"});
  return tags;
}

std::vector<LabeledExample> three_entry_examples() {
  return {{{f1}, A}, {{f1}, A}, {{f1}, A}, {{f1}, B}, {{f2}, C}};
}

}  // namespace

TEST_CASE("train_decision_list: scores are conditional frequencies") {
  auto model = train_decision_list(three_entry_examples(), abc());
  auto e = model.entries();
  REQUIRE(e.size() == 3);
  CHECK(e[0] == DecisionListEntry{f2, C, 1.0, 1});
  CHECK(e[1] == DecisionListEntry{f1, A, 0.75, 4});
  CHECK(e[2] == DecisionListEntry{f1, B, 0.25, 4});
  CHECK(model.fallback_tag() == A);
}

TEST_CASE("train_decision_list: single example") {
  std::vector<LabeledExample> one{{{f1}, A}};
  auto model = train_decision_list(one, abc());
  REQUIRE(model.entries().size() == 1);
  CHECK(model.entries()[0] == DecisionListEntry{f1, A, 1.0, 1});
  CHECK(model.fallback_tag() == A);
}

TEST_CASE("train_decision_list: no examples") {
  try {
    train_decision_list({}, abc());
    FAIL("expected NoExamples");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoExamples);
  }
}

TEST_CASE("train_decision_list: min_count drops rare pairs") {
  auto model = train_decision_list(three_entry_examples(), abc(), {2});
  REQUIRE(model.entries().size() == 1);
  CHECK(model.entries()[0] == DecisionListEntry{f1, A, 0.75, 4});
}

TEST_CASE("predict_decision_list walks the list from the top") {
  auto model = train_decision_list(three_entry_examples(), abc());
  CHECK(predict_decision_list(model, {f1}).tag == A);
  CHECK(predict_decision_list(model, {f1}).provenance == Provenance::kLearner);
  CHECK(predict_decision_list(model, {f2, f1}).tag == C);

  auto none = predict_decision_list(model, {});
  CHECK(none.tag == A);
  CHECK(none.provenance == Provenance::kFallback);
  CHECK(predict_decision_list(model, {99}).provenance == Provenance::kFallback);
}

TEST_CASE("predict_decision_list honours the allowed tags") {
  auto model = train_decision_list(three_entry_examples(), abc());
  const TagId only_b[] = {B};
  CHECK(predict_decision_list(model, {f2, f1}, only_b).tag == B);
  const TagId c_then_b[] = {C, B};
  auto d = predict_decision_list(model, {}, c_then_b);
  CHECK(d.tag == C);  // fallback A is not allowed, so the first allowed tag
  CHECK(d.provenance == Provenance::kFallback);
}

TEST_CASE("list order is a strict total order and scores lie in (0, 1]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<LabeledExample> ex;
    for (int k = 0; k < 60; ++k)
      ex.push_back({oracle::random_vector(rng, 10, 0.3), static_cast<TagId>(rng() % 3)});
    auto model = train_decision_list(ex, abc());
    auto e = model.entries();
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(e[i].score > 0.0);
      CHECK(e[i].score <= 1.0);
      if (i + 1 < e.size()) {
        CHECK(precedes(e[i], e[i + 1]));
        CHECK_FALSE(precedes(e[i + 1], e[i]));
      }
      CHECK_FALSE(precedes(e[i], e[i]));
    }
  }
}

TEST_CASE("predictions match the brute-force argmax evaluator") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto num_tags = 2 + rng() % 4;
    std::vector<std::string> names;
    for (std::size_t t = 0; t < num_tags; ++t) names.push_back("T" + std::to_string(t));
    TagSet tags(names);
    std::vector<LabeledExample> ex;
    const auto n = 1 + rng() % 120;
    for (std::size_t k = 0; k < n; ++k)
      ex.push_back({oracle::random_vector(rng, 20, 0.15), static_cast<TagId>(rng() % num_tags)});
    const std::size_t min_count = 1 + rng() % 2;
    auto model = train_decision_list(ex, tags, {min_count});
    oracle::DecisionListOracle brute(ex, min_count);
    CHECK(model.fallback_tag() == brute.majority());
    for (int q = 0; q < 50; ++q) {
      auto x = oracle::random_vector(rng, 22, 0.2);
      CHECK(predict_decision_list(model, x).tag == brute.predict(x, {}));
      std::vector<TagId> allowed{static_cast<TagId>(rng() % num_tags),
                                 static_cast<TagId>(rng() % num_tags)};
      CHECK(predict_decision_list(model, x, allowed).tag == brute.predict(x, allowed));
    }
  }
}

TEST_CASE("DecisionListModel save/load round-trip") {
  auto model = train_decision_list(three_entry_examples(), abc());
  std::stringstream io;
  model.save(io);
  std::istringstream text(io.str());
  std::string header;
  std::getline(text, header);
  CHECK(header == "fallback\t0");
  auto loaded = DecisionListModel::load(io);
  CHECK(loaded == model);
  CHECK(predict_decision_list(loaded, {f2, f1}).tag == C);

  std::istringstream bad("fallback\t0\n1\t0\t1.5\t2\n");
  CHECK_THROWS_AS(DecisionListModel::load(bad), CorruptModel);
  std::istringstream no_header("1\t0\t0.5\t2\n");
  CHECK_THROWS_AS(DecisionListModel::load(no_header), CorruptModel);
}
