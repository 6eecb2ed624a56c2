#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>

#include "seqtag/error.hpp"
#include "seqtag/eval.hpp"

namespace seqtag {

namespace {

// Draws from the raw 64-bit engine output only: the standard distributions
// are implementation-defined, which would make corpora differ across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), n > 0, without modulo bias.
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Index drawn from a cumulative weight table.
  std::size_t pick(const std::vector<double>& cumulative) {
    const double u = unit() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
  }

  // `k` distinct values from [0, n) in random order.
  std::vector<std::size_t> choose(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + below(n - i)]);
    pool.resize(k);
    return pool;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

const char* const kTagNames[] = {"NOUN", "VERB", "ADJ",  "ADV", "PRON",
                                 "DET",  "ADP",  "CONJ", "NUM", "INTJ"};
constexpr const char* kCueTag = "PART";

std::string content_tag_name(std::size_t t) {
  if (t < std::size(kTagNames)) return kTagNames[t];
  return "TAG" + std::to_string(t);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<double> cumulative(const std::vector<double>& weights) {
  std::vector<double> c(weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) c[i] = (sum += weights[i]);
  return c;
}

struct AmbiguousWord {
  std::string word;
  std::vector<std::size_t> tags;  // content tag indices, prior order
  std::vector<std::size_t> cues;  // designated cue per candidate
  std::vector<double> prior;      // cumulative
};

}  // namespace

void SyntheticCorpusSpec::validate() const {
  auto bad = [](const std::string& what) { return Error(ErrorCode::kInvalidSpec, what); };
  if (sentences == 0) throw bad("sentences must be positive");
  if (vocabulary_sizes.size() < 2) throw bad("need at least two content tags");
  for (auto n : vocabulary_sizes)
    if (n == 0) throw bad("every tag needs a non-empty vocabulary");
  if (!(ambiguity_rate >= 0.0 && ambiguity_rate <= 1.0))
    throw bad("ambiguity rate must lie in [0, 1]");
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0))
    throw bad("signal strength must lie in [0, 1]");
  if (min_candidates < 2 || min_candidates > max_candidates ||
      max_candidates > vocabulary_sizes.size())
    throw bad("candidate counts must satisfy 2 <= min <= max <= tag count");
  if (cue_words <= max_candidates)
    throw bad("need more cue words than candidates per ambiguous word");
  if (min_length < 2 || min_length > max_length)
    throw bad("sentence lengths must satisfy 2 <= min <= max");
  if (!(prior_skew >= 0.0)) throw bad("prior skew must be non-negative");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw bad("test fraction must lie in [0, 1)");
}

SyntheticCorpus generate_synthetic(const SyntheticCorpusSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t num_tags = spec.vocabulary_sizes.size();

  std::vector<std::vector<std::string>> vocab(num_tags);
  std::vector<std::vector<double>> zipf(num_tags);
  for (std::size_t t = 0; t < num_tags; ++t) {
    const auto prefix = lower(content_tag_name(t));
    std::vector<double> w;
    for (std::size_t k = 0; k < spec.vocabulary_sizes[t]; ++k) {
      vocab[t].push_back(prefix + std::to_string(k));
      w.push_back(1.0 / static_cast<double>(k + 1));
    }
    zipf[t] = cumulative(w);
  }
  std::vector<std::string> cues;
  for (std::size_t c = 0; c < spec.cue_words; ++c) cues.push_back("cue" + std::to_string(c));

  std::vector<AmbiguousWord> ambiguous(spec.ambiguous_words);
  SyntheticCorpus out;
  for (std::size_t a = 0; a < ambiguous.size(); ++a) {
    auto& w = ambiguous[a];
    w.word = "amb" + std::to_string(a);
    const std::size_t k =
        spec.min_candidates + rng.below(spec.max_candidates - spec.min_candidates + 1);
    w.tags = rng.choose(num_tags, k);
    w.cues = rng.choose(spec.cue_words, k);
    std::vector<double> weights;
    for (std::size_t r = 0; r < k; ++r)
      weights.push_back(std::pow(1.0 / static_cast<double>(r + 1), spec.prior_skew));
    w.prior = cumulative(weights);
    auto& listing = out.cues[w.word];
    for (std::size_t r = 0; r < k; ++r)
      listing.emplace_back(content_tag_name(w.tags[r]), cues[w.cues[r]]);
  }

  auto ambiguous_pair = [&](const AmbiguousWord& w, std::size_t r) {
    std::size_t cue = w.cues[r];
    if (!(rng.unit() < spec.signal_strength)) {
      std::vector<std::size_t> others;
      for (std::size_t c = 0; c < spec.cue_words; ++c)
        if (std::find(w.cues.begin(), w.cues.end(), c) == w.cues.end()) others.push_back(c);
      cue = others[rng.below(others.size())];
    }
    return std::vector<Token>{{w.word, content_tag_name(w.tags[r])},
                              {cues[cue], std::string(kCueTag)}};
  };

  // Coverage: every content word, every cue, every (ambiguous word, tag).
  std::vector<std::vector<Token>> units;
  for (std::size_t t = 0; t < num_tags; ++t)
    for (const auto& word : vocab[t]) units.push_back({{word, content_tag_name(t)}});
  for (const auto& cue : cues) units.push_back({{cue, std::string(kCueTag)}});
  for (const auto& w : ambiguous)
    for (std::size_t r = 0; r < w.tags.size(); ++r) units.push_back(ambiguous_pair(w, r));
  rng.shuffle(units);
  Sentence current;
  for (auto& unit : units) {
    if (current.size() + unit.size() > spec.max_length) {
      out.sentences.push_back(std::move(current));
      current = Sentence{};
    }
    for (auto& token : unit) current.tokens.push_back(std::move(token));
  }
  if (!current.tokens.empty()) out.sentences.push_back(std::move(current));
  out.coverage_sentences = out.sentences.size();

  for (std::size_t s = 0; s < spec.sentences; ++s) {
    const std::size_t length =
        spec.min_length + rng.below(spec.max_length - spec.min_length + 1);
    Sentence sentence;
    while (sentence.size() < length) {
      if (!ambiguous.empty() && sentence.size() + 1 < length &&
          rng.unit() < spec.ambiguity_rate) {
        const auto& w = ambiguous[rng.below(ambiguous.size())];
        for (auto& token : ambiguous_pair(w, rng.pick(w.prior)))
          sentence.tokens.push_back(std::move(token));
      } else {
        const std::size_t t = rng.below(num_tags);
        sentence.tokens.push_back({vocab[t][rng.pick(zipf[t])], content_tag_name(t)});
      }
    }
    out.sentences.push_back(std::move(sentence));
  }
  return out;
}

Corpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  return generate_synthetic(spec).sentences;
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double test_fraction) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "test fraction must lie in [0, 1)");
  const auto n_test = static_cast<std::size_t>(
      std::floor(test_fraction * static_cast<double>(corpus.size())));
  const std::size_t n_train = corpus.size() - n_test;
  return {Corpus(corpus.begin(), corpus.begin() + static_cast<long>(n_train)),
          Corpus(corpus.begin() + static_cast<long>(n_train), corpus.end())};
}

std::optional<double> measured_signal(const SyntheticCorpus& corpus,
                                      std::span<const Sentence> sentences) {
  std::size_t total = 0, predictive = 0;
  for (const auto& sentence : sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      auto it = corpus.cues.find(sentence.tokens[i].word);
      if (it == corpus.cues.end() || !sentence.tokens[i].tag) continue;
      ++total;
      if (i + 1 >= sentence.size()) continue;
      for (const auto& [tag, cue] : it->second)
        if (tag == *sentence.tokens[i].tag && cue == sentence.tokens[i + 1].word)
          ++predictive;
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(predictive) / static_cast<double>(total);
}

}  // namespace seqtag
