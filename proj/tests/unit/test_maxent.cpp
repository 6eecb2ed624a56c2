#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "seqtag/error.hpp"
#include "seqtag/maxent.hpp"
#include "support/oracles.hpp"

using namespace seqtag;

namespace {

constexpr TagId A = 0, B = 1;
constexpr FeatureId f = 0;

const TagSet& ab() {
  static const TagSet tags({"A", "B"});
  return tags;
}

std::vector<LabeledExample> three_to_one() {
  return {{{f}, A}, {{f}, A}, {{f}, A}, {{f}, B}};
}

std::vector<LabeledExample> random_examples(std::mt19937_64& rng, std::size_t num_tags) {
  std::vector<LabeledExample> ex;
  const auto n = 5 + rng() % 40;
  for (std::size_t k = 0; k < n; ++k) {
    auto x = oracle::random_vector(rng, 8, 0.3);
    if (x.empty()) x = FeatureVector{static_cast<FeatureId>(rng() % 8)};
    ex.push_back({x, static_cast<TagId>(rng() % num_tags)});
  }
  return ex;
}

TagSet tag_set(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t t = 0; t < n; ++t) names.push_back("T" + std::to_string(t));
  return TagSet(names);
}

}  // namespace

TEST_CASE("train_gis: a certain label converges to probability near one") {
  std::vector<LabeledExample> ex{{{f}, A}};
  auto trained = train_gis(ex, ab(), {5000, 1e-3});
  REQUIRE(trained.report.converged);
  CHECK(trained.model.distribution({f})[A] >= 1.0 - 1e-3);
}

TEST_CASE("train_gis: A:3 / B:1 on one shared feature gives 0.75") {
  auto trained = train_gis(three_to_one(), ab(), {});
  REQUIRE(trained.report.converged);
  CHECK(std::abs(trained.model.distribution({f})[A] - 0.75) <= 1e-3);
  CHECK(trained.report.residual <= 1e-3);
}

TEST_CASE("train_gis: zero iterations leaves the uniform start") {
  auto trained = train_gis(three_to_one(), ab(), {0, 1e-3});
  CHECK(trained.report.iterations == 0);
  CHECK_FALSE(trained.report.converged);
  for (const auto& w : trained.model.weights()) CHECK(w.weight == 0.0);
  auto p = trained.model.distribution({f});
  CHECK(p[A] == doctest::Approx(0.5));
  CHECK(trained.report.residual == doctest::Approx(0.25));
  CHECK(trained.report.log_likelihood.size() == 1);
}

TEST_CASE("train_gis errors") {
  CHECK_THROWS_AS(train_gis({}, ab(), {}), Error);
  std::vector<LabeledExample> empty_context{{{}, A}};
  CHECK_THROWS_AS(train_gis(empty_context, ab(), {}), Error);
  std::vector<LabeledExample> bad_tag{{{f}, 7}};
  CHECK_THROWS_AS(train_gis(bad_tag, ab(), {}), Error);
  CHECK_THROWS_AS(train_gis(three_to_one(), ab(), {10, 0.0}), Error);
}

TEST_CASE("train_gis: correction constant covers the largest context") {
  std::vector<LabeledExample> ex{{{0, 1, 2}, A}, {{1}, B}};
  auto trained = train_gis(ex, ab(), {});
  CHECK(trained.model.correction_constant() == 3);
}

TEST_CASE("predict_maxent") {
  SUBCASE("all-zero weights over four tags are uniform") {
    MaxEntModel m(4, 1, {});
    auto d = predict_maxent(m, {3});
    for (double p : d.scores) CHECK(p == doctest::Approx(0.25));
    CHECK(d.tag == 0);  // ties to the lower id
  }
  SUBCASE("w(f,A) = ln 3 gives 3:1") {
    MaxEntModel m(2, 1, {{f, A, std::log(3.0)}, {f, B, 0.0}});
    auto d = predict_maxent(m, {f});
    CHECK(d.scores[A] == doctest::Approx(0.75));
    CHECK(d.scores[B] == doctest::Approx(0.25));
    CHECK(d.tag == A);
    CHECK(d.provenance == Provenance::kLearner);
    const TagId only_b[] = {B};
    CHECK(predict_maxent(m, {f}, only_b).tag == B);
  }
  SUBCASE("empty context is uniform with fallback provenance") {
    MaxEntModel m(2, 1, {{f, A, 2.0}});
    auto d = predict_maxent(m, {});
    CHECK(d.scores[A] == doctest::Approx(0.5));
    CHECK(d.provenance == Provenance::kFallback);
  }
}

TEST_CASE("check_constraints") {
  SUBCASE("zero weights on a balanced corpus") {
    std::vector<LabeledExample> ex{{{0}, A}, {{0}, B}, {{1, 0}, A}, {{1, 0}, B}};
    CHECK(check_constraints(MaxEntModel(2, 2, {}), ex) == doctest::Approx(0.0));
  }
  SUBCASE("zero weights on A:3 / B:1") {
    CHECK(check_constraints(MaxEntModel(2, 1, {}), three_to_one()) == doctest::Approx(0.25));
  }
  SUBCASE("agrees with an independent residual") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      auto tags = tag_set(2 + rng() % 3);
      auto ex = random_examples(rng, tags.size());
      auto trained = train_gis(ex, tags, {25, 1e-3});
      CHECK(check_constraints(trained.model, ex) ==
            doctest::Approx(oracle::maxent_residual(trained.model, ex)).epsilon(1e-9));
      CHECK(trained.report.residual ==
            doctest::Approx(oracle::maxent_residual(trained.model, ex)).epsilon(1e-9));
    }
  }
}

TEST_CASE("GIS properties on random corpora") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    auto tags = tag_set(2 + rng() % 4);
    auto ex = random_examples(rng, tags.size());
    auto trained = train_gis(ex, tags, {200, 1e-3});
    const auto& ll = trained.report.log_likelihood;
    REQUIRE(ll.size() == trained.report.iterations + 1);
    for (std::size_t i = 1; i < ll.size(); ++i) CHECK(ll[i] >= ll[i - 1] - 1e-12);
    CHECK(ll.back() == doctest::Approx(conditional_log_likelihood(trained.model, ex)));
    if (trained.report.converged) CHECK(check_constraints(trained.model, ex) <= 1e-3);
    for (const auto& e : ex) {
      auto p = trained.model.distribution(e.features);
      CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
      auto q = oracle::maxent_conditional(trained.model, e.features);
      for (std::size_t a = 0; a < p.size(); ++a) CHECK(p[a] == doctest::Approx(q[a]));
    }
    for (const auto& w : trained.model.weights()) CHECK(std::isfinite(w.weight));
  }
}

TEST_CASE("MaxEntModel save/load keeps full precision") {
  auto trained = train_gis(three_to_one(), ab(), {});
  std::stringstream io;
  trained.model.save(io);
  auto loaded = MaxEntModel::load(io);
  CHECK(loaded == trained.model);
  CHECK(loaded.distribution({f}) == trained.model.distribution({f}));

  std::istringstream bad("tags\t2\ncorrection\t1\n0\t5\t1.0\n");
  CHECK_THROWS_AS(MaxEntModel::load(bad), CorruptModel);
  std::istringstream inf("tags\t2\ncorrection\t1\n0\t0\tinf\n");
  CHECK_THROWS_AS(MaxEntModel::load(inf), CorruptModel);
}
