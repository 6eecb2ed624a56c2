#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqtag/corpus.hpp"

namespace seqtag {

using FeatureId = std::uint32_t;

// Sorted, duplicate-free set of active binary features.
class FeatureVector {
 public:
  FeatureVector() = default;
  FeatureVector(std::initializer_list<FeatureId> ids)
      : FeatureVector(std::vector<FeatureId>(ids)) {}
  explicit FeatureVector(std::vector<FeatureId> ids);

  std::span<const FeatureId> ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(FeatureId id) const;
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<FeatureId> ids_;
};

// Number of shared features, i.e. the inner product of two binary vectors.
std::size_t overlap(const FeatureVector& a, const FeatureVector& b);

enum class FeatureKind : std::uint8_t { kPos, kPosOrder, kWord };

const char* feature_kind_name(FeatureKind kind);

// Candidate ranks deeper than this share the last rank value.
inline constexpr std::uint32_t kMaxRank = 9;
inline constexpr int kMaxWindow = 3;  // offsets stay within [-3, +3]

struct FeatureKey {
  FeatureKind kind = FeatureKind::kPos;
  int offset = 0;
  bool boundary = false;  // offset falls outside the sentence
  TagId tag = 0;          // kPos, kPosOrder
  std::uint32_t rank = 0; // kPosOrder, 1-based
  std::string word;       // kWord

  static FeatureKey at_boundary(FeatureKind kind, int offset);
  static FeatureKey pos(int offset, TagId tag);
  static FeatureKey pos_order(int offset, TagId tag, std::uint32_t rank);
  static FeatureKey word_at(int offset, std::string word);

  auto operator<=>(const FeatureKey&) const = default;
  bool operator==(const FeatureKey&) const = default;
};

std::string to_string(const FeatureKey& key, const TagSet* tags = nullptr);

class FeatureVocabulary {
 public:
  // Returns the id of `key`, allocating one unless the vocabulary is frozen.
  std::optional<FeatureId> intern(const FeatureKey& key);
  std::optional<FeatureId> find(const FeatureKey& key) const;

  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }
  std::size_t size() const noexcept { return keys_.size(); }
  const FeatureKey& key(FeatureId id) const { return keys_.at(id); }

  // Lines of `id<TAB>kind<TAB>offset<TAB>payload`. The payload is the tag id
  // (POS), `tag,rank` (POS_ORDER), the word (WORD), or empty for boundary keys.
  void save(std::ostream& out) const;
  // Reads the format written by save(); the result is frozen.
  static FeatureVocabulary load(std::istream& in);

  bool operator==(const FeatureVocabulary& other) const {
    return keys_ == other.keys_ && frozen_ == other.frozen_;
  }

 private:
  std::map<FeatureKey, FeatureId> ids_;
  std::vector<FeatureKey> keys_;
  bool frozen_ = false;
};

struct FeatureConfig {
  int window = 3;
  bool use_pos = true;
  bool use_pos_order = true;
  bool use_word = true;

  void validate() const;
  bool operator==(const FeatureConfig&) const = default;
};

// Keys describing the context of sentence[position]. The second member of
// each pair is false for keys that must never be allocated (words unknown to
// the lexicon).
std::vector<std::pair<FeatureKey, bool>> context_keys(
    const Sentence& sentence, std::size_t position, const Lexicon& lexicon,
    const FeatureConfig& config);

FeatureVector extract(const Sentence& sentence, std::size_t position,
                      const Lexicon& lexicon, FeatureVocabulary& vocab,
                      const FeatureConfig& config);
FeatureVector extract(const Sentence& sentence, std::size_t position,
                      const Lexicon& lexicon, const FeatureVocabulary& vocab,
                      const FeatureConfig& config);

// Vocabulary of every key emitted at the ambiguous positions of `training`;
// returned frozen.
FeatureVocabulary build_vocabulary(const Corpus& training,
                                   const Lexicon& lexicon,
                                   const FeatureConfig& config);

}  // namespace seqtag
