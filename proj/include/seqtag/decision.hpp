#pragma once

#include <span>
#include <vector>

#include "seqtag/corpus.hpp"
#include "seqtag/features.hpp"

namespace seqtag {

enum class Provenance { kDictionary, kLearner, kFallback };

const char* provenance_name(Provenance p);

struct TagDecision {
  TagId tag = 0;
  Provenance provenance = Provenance::kFallback;
  // Per-tag scores indexed by tag id when the learner produces them
  // (maxent probabilities, pairwise vote counts); empty otherwise.
  std::vector<double> scores;
};

// A training example: the context of one token and its gold tag.
struct LabeledExample {
  FeatureVector features;
  TagId tag;
};

// Restricts a prediction to a subset of tags; an empty span allows all.
using AllowedTags = std::span<const TagId>;

inline bool is_allowed(AllowedTags allowed, TagId tag) {
  if (allowed.empty()) return true;
  for (TagId t : allowed)
    if (t == tag) return true;
  return false;
}

}  // namespace seqtag
