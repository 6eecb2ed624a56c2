#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "seqtag/error.hpp"
#include "seqtag/features.hpp"
#include "support/corpora.hpp"

using namespace seqtag;

namespace {

constexpr TagId kNoun = 0, kVerb = 1;

Lexicon run_lexicon() {
  return Lexicon({{"run", {{kVerb, 3}, {kNoun, 1}}}, {"fast", {{kVerb, 1}}}}, {1, 4});
}

Sentence words(std::initializer_list<const char*> ws) {
  Sentence s;
  for (const char* w : ws) s.tokens.push_back({w, std::nullopt});
  return s;
}

std::set<FeatureKey> key_set(const Sentence& s, std::size_t pos, const Lexicon& lex,
                             const FeatureConfig& cfg) {
  std::set<FeatureKey> keys;
  for (const auto& [k, alloc] : context_keys(s, pos, lex, cfg)) keys.insert(k);
  return keys;
}

}  // namespace

TEST_CASE("FeatureVector is sorted and duplicate-free") {
  FeatureVector v({5, 1, 3, 1, 5});
  CHECK(std::vector<FeatureId>(v.begin(), v.end()) == std::vector<FeatureId>{1, 3, 5});
  CHECK(v.contains(3));
  CHECK_FALSE(v.contains(4));
  CHECK(overlap(v, FeatureVector{3, 4, 5}) == 2);
  CHECK(overlap(v, FeatureVector{}) == 0);
}

TEST_CASE("extract: window 1 around a lone ambiguous word") {
  FeatureConfig cfg{1, true, true, true};
  const std::set<FeatureKey> expected = {
      FeatureKey::at_boundary(FeatureKind::kPos, -1),
      FeatureKey::at_boundary(FeatureKind::kPosOrder, -1),
      FeatureKey::at_boundary(FeatureKind::kWord, -1),
      FeatureKey::pos(0, kVerb),
      FeatureKey::pos(0, kNoun),
      FeatureKey::pos_order(0, kVerb, 1),
      FeatureKey::pos_order(0, kNoun, 2),
      FeatureKey::word_at(0, "run"),
      FeatureKey::at_boundary(FeatureKind::kPos, 1),
      FeatureKey::at_boundary(FeatureKind::kPosOrder, 1),
      FeatureKey::at_boundary(FeatureKind::kWord, 1),
  };
  auto s = words({"run"});
  CHECK(key_set(s, 0, run_lexicon(), cfg) == expected);

  FeatureVocabulary vocab;
  auto x = extract(s, 0, run_lexicon(), vocab, cfg);
  CHECK(x.size() == 11);
  CHECK(vocab.size() == 11);
  std::set<FeatureKey> interned;
  for (FeatureId id : x) interned.insert(vocab.key(id));
  CHECK(interned == expected);
}

TEST_CASE("extract: use_word off drops every WORD key") {
  FeatureConfig cfg{1, true, true, false};
  for (const auto& k : key_set(words({"run", "fast"}), 0, run_lexicon(), cfg))
    CHECK(k.kind != FeatureKind::kWord);
}

TEST_CASE("extract: an unknown neighbor contributes nothing") {
  FeatureConfig cfg{1, true, true, true};
  auto lex = run_lexicon();
  FeatureVocabulary vocab;
  auto with_unknown = extract(words({"zzz", "run"}), 1, lex, vocab, cfg);
  for (FeatureId id : with_unknown) CHECK(vocab.key(id).offset != -1);
  // Offset -1 exists in the sentence, so no boundary key either.
  CHECK(with_unknown.size() == 8);
}

TEST_CASE("extract: an unknown word already in the vocabulary keeps its WORD key") {
  FeatureConfig cfg{1, false, false, true};
  auto lex = run_lexicon();
  FeatureVocabulary vocab;
  vocab.intern(FeatureKey::word_at(-1, "zzz"));
  auto x = extract(words({"zzz", "run"}), 1, lex, vocab, cfg);
  CHECK(x.contains(0));
}

TEST_CASE("extract: ranks deeper than the cap share the last rank") {
  Lexicon::Entries entries;
  std::vector<Candidate> many;
  for (TagId t = 0; t < 12; ++t) many.push_back({t, 100 - t});
  entries.emplace("w", many);
  Lexicon lex(entries, std::vector<std::size_t>(12, 1));
  FeatureConfig cfg{0, false, true, false};
  std::vector<std::uint32_t> ranks;
  for (const auto& [k, alloc] : context_keys(words({"w"}), 0, lex, cfg)) ranks.push_back(k.rank);
  CHECK(ranks == std::vector<std::uint32_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 9});
}

TEST_CASE("extract: position out of range") {
  FeatureVocabulary vocab;
  try {
    extract(words({"run"}), 1, run_lexicon(), vocab, FeatureConfig{});
    FAIL("expected PositionOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPositionOutOfRange);
  }
}

TEST_CASE("extract: a frozen vocabulary never grows") {
  FeatureConfig cfg;
  auto lex = run_lexicon();
  FeatureVocabulary vocab;
  extract(words({"run", "fast"}), 0, lex, vocab, cfg);
  vocab.freeze();
  const auto before = vocab.size();
  auto x = extract(words({"fast", "fast", "run", "run", "fast"}), 2, lex, vocab, cfg);
  CHECK(vocab.size() == before);
  for (FeatureId id : x) CHECK(id < before);
  CHECK_FALSE(vocab.intern(FeatureKey::word_at(3, "nothing")));
}

TEST_CASE("extract is deterministic and the const overload matches") {
  FeatureConfig cfg;
  auto lex = run_lexicon();
  auto s = words({"fast", "run", "fast", "run"});
  FeatureVocabulary vocab;
  auto a = extract(s, 1, lex, vocab, cfg);
  auto b = extract(s, 1, lex, vocab, cfg);
  CHECK(a == b);
  const FeatureVocabulary& frozen = vocab;
  CHECK(extract(s, 1, lex, frozen, cfg) == a);
}

TEST_CASE("ablation: word-off keys are a subset of word-on keys") {
  std::mt19937_64 rng(7);
  auto lex = run_lexicon();
  const char* pool[] = {"run", "fast", "zzz"};
  for (int trial = 0; trial < 50; ++trial) {
    Sentence s;
    const int n = 1 + static_cast<int>(rng() % 7);
    for (int k = 0; k < n; ++k) s.tokens.push_back({pool[rng() % 3], std::nullopt});
    const std::size_t pos = rng() % s.size();
    FeatureConfig on{static_cast<int>(rng() % 4), true, true, true};
    FeatureConfig off = on;
    off.use_word = false;
    auto big = key_set(s, pos, lex, on), small = key_set(s, pos, lex, off);
    CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
  }
}

TEST_CASE("build_vocabulary") {
  SUBCASE("no ambiguous positions") {
    auto corpus = fixture::parse("a\tX\nb\tY\n");
    auto [lex, tags] = build_lexicon(corpus);
    try {
      build_vocabulary(corpus, lex, FeatureConfig{});
      FAIL("expected EmptyVocabulary");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyVocabulary);
    }
  }
  SUBCASE("one ambiguous position gives the key count of its context") {
    auto corpus = fixture::parse("run\tVERB\n");
    auto vocab = build_vocabulary(corpus, run_lexicon(), FeatureConfig{1, true, true, true});
    CHECK(vocab.size() == 11);
    CHECK(vocab.frozen());
  }
  SUBCASE("word features never shrink the vocabulary") {
    auto corpus = fixture::run_bank();
    auto [lex, tags] = build_lexicon(corpus);
    auto on = build_vocabulary(corpus, lex, FeatureConfig{3, true, true, true});
    auto off = build_vocabulary(corpus, lex, FeatureConfig{3, true, true, false});
    CHECK(on.size() > off.size());
  }
}

TEST_CASE("FeatureVocabulary save/load round-trip") {
  auto corpus = fixture::run_bank();
  auto [lex, tags] = build_lexicon(corpus);
  auto vocab = build_vocabulary(corpus, lex, FeatureConfig{});
  std::stringstream io;
  vocab.save(io);
  auto loaded = FeatureVocabulary::load(io);
  CHECK(loaded == vocab);
  for (FeatureId id = 0; id < vocab.size(); ++id) CHECK(*loaded.find(vocab.key(id)) == id);

  std::stringstream first_line;
  vocab.save(first_line);
  std::string line;
  std::getline(first_line, line);
  CHECK(line.rfind("0\t", 0) == 0);

  std::istringstream gap("0\tPOS\t0\t1\n2\tPOS\t0\t2\n");
  CHECK_THROWS_AS(FeatureVocabulary::load(gap), CorruptModel);
}

TEST_CASE("FeatureConfig::validate") {
  CHECK_NOTHROW(FeatureConfig{}.validate());
  CHECK_THROWS_AS((FeatureConfig{3, false, false, false}.validate()), Error);
  CHECK_THROWS_AS((FeatureConfig{-1, true, true, true}.validate()), Error);
  CHECK_THROWS_AS((FeatureConfig{4, true, true, true}.validate()), Error);
}

TEST_CASE("to_string names keys") {
  TagSet tags({"NOUN", "VERB"});
  CHECK(to_string(FeatureKey::pos(-2, kVerb), &tags).find("VERB") != std::string::npos);
  CHECK(to_string(FeatureKey::at_boundary(FeatureKind::kWord, 3)).find("boundary") !=
        std::string::npos);
}
