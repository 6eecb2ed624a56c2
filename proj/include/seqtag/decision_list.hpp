#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "seqtag/decision.hpp"

namespace seqtag {

struct DecisionListConfig {
  std::size_t min_count = 1;  // minimum co-occurrence count of a (feature, tag) rule
};

struct DecisionListEntry {
  FeatureId feature;
  TagId tag;
  double score;               // count(feature, tag) / count(feature)
  std::size_t feature_count;  // count(feature)

  bool operator==(const DecisionListEntry&) const = default;
};

// Strict list order: score desc, feature count desc, feature id asc, tag asc.
bool precedes(const DecisionListEntry& a, const DecisionListEntry& b);

class DecisionListModel {
 public:
  DecisionListModel() = default;
  DecisionListModel(std::vector<DecisionListEntry> entries, TagId fallback_tag);

  std::span<const DecisionListEntry> entries() const noexcept { return entries_; }
  TagId fallback_tag() const noexcept { return fallback_; }

  // First entry (in list order) whose feature is active in `context` and
  // whose tag is allowed; nullptr if none.
  const DecisionListEntry* first_match(const FeatureVector& context,
                                       AllowedTags allowed = {}) const;

  // Header line `fallback<TAB>id`, then `feature<TAB>tag<TAB>score<TAB>count`.
  void save(std::ostream& out) const;
  static DecisionListModel load(std::istream& in);

  bool operator==(const DecisionListModel& o) const {
    return entries_ == o.entries_ && fallback_ == o.fallback_;
  }

 private:
  std::vector<DecisionListEntry> entries_;
  TagId fallback_ = 0;
  // Per feature id, indices of its entries in list order.
  std::vector<std::vector<std::size_t>> by_feature_;
};

DecisionListModel train_decision_list(std::span<const LabeledExample> examples,
                                      const TagSet& tags,
                                      const DecisionListConfig& config = {});

// With a non-empty `allowed` set and no matching rule, the fallback is the
// global fallback tag if allowed, else the first allowed tag.
TagDecision predict_decision_list(const DecisionListModel& model,
                                  const FeatureVector& context,
                                  AllowedTags allowed = {});

}  // namespace seqtag
