#include "seqtag/decision_list.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "seqtag/error.hpp"
#include "text_util.hpp"

namespace seqtag {

bool precedes(const DecisionListEntry& a, const DecisionListEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.feature_count != b.feature_count) return a.feature_count > b.feature_count;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.tag < b.tag;
}

DecisionListModel::DecisionListModel(std::vector<DecisionListEntry> entries,
                                     TagId fallback_tag)
    : entries_(std::move(entries)), fallback_(fallback_tag) {
  std::sort(entries_.begin(), entries_.end(), precedes);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto f = entries_[i].feature;
    if (f >= by_feature_.size()) by_feature_.resize(f + 1);
    by_feature_[f].push_back(i);
  }
}

const DecisionListEntry* DecisionListModel::first_match(
    const FeatureVector& context, AllowedTags allowed) const {
  std::size_t best = entries_.size();
  for (FeatureId f : context) {
    if (f >= by_feature_.size()) continue;
    for (std::size_t index : by_feature_[f]) {
      if (index >= best) break;
      if (is_allowed(allowed, entries_[index].tag)) {
        best = index;
        break;
      }
    }
  }
  return best < entries_.size() ? &entries_[best] : nullptr;
}

void DecisionListModel::save(std::ostream& out) const {
  out << "fallback\t" << fallback_ << '\n';
  for (const auto& e : entries_)
    out << e.feature << '\t' << e.tag << '\t' << detail::format_double(e.score)
        << '\t' << e.feature_count << '\n';
}

DecisionListModel DecisionListModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("fallback\t", 0) != 0)
    throw CorruptModel("decision-list", "missing fallback header");
  auto fallback = detail::parse_number<TagId>(std::string_view(line).substr(9));
  if (!fallback) throw CorruptModel("decision-list", "bad fallback tag");
  std::vector<DecisionListEntry> entries;
  while (std::getline(in, line)) {
    auto cols = detail::split_view(line, '\t');
    if (cols.size() != 4) throw CorruptModel("decision-list", "expected 4 columns");
    auto f = detail::parse_number<FeatureId>(cols[0]);
    auto t = detail::parse_number<TagId>(cols[1]);
    auto score = detail::parse_number<double>(cols[2]);
    auto count = detail::parse_number<std::size_t>(cols[3]);
    if (!f || !t || !score || !count || !(*score > 0.0 && *score <= 1.0))
      throw CorruptModel("decision-list", "bad entry '" + line + "'");
    entries.push_back({*f, *t, *score, *count});
  }
  return DecisionListModel(std::move(entries), *fallback);
}

DecisionListModel train_decision_list(std::span<const LabeledExample> examples,
                                      const TagSet& tags,
                                      const DecisionListConfig& config) {
  if (examples.empty())
    throw Error(ErrorCode::kNoExamples, "decision list: no training examples");
  std::map<FeatureId, std::size_t> feature_counts;
  std::map<std::pair<FeatureId, TagId>, std::size_t> pair_counts;
  std::vector<std::size_t> tag_counts(tags.size(), 0);
  for (const auto& ex : examples) {
    if (ex.tag >= tag_counts.size()) tag_counts.resize(ex.tag + 1, 0);
    ++tag_counts[ex.tag];
    for (FeatureId f : ex.features) {
      ++feature_counts[f];
      ++pair_counts[{f, ex.tag}];
    }
  }
  std::vector<DecisionListEntry> entries;
  for (const auto& [key, count] : pair_counts) {
    if (count < std::max<std::size_t>(config.min_count, 1)) continue;
    const auto total = feature_counts[key.first];
    entries.push_back({key.first, key.second,
                       static_cast<double>(count) / static_cast<double>(total),
                       total});
  }
  auto fallback = static_cast<TagId>(
      std::max_element(tag_counts.begin(), tag_counts.end()) - tag_counts.begin());
  return DecisionListModel(std::move(entries), fallback);
}

TagDecision predict_decision_list(const DecisionListModel& model,
                                  const FeatureVector& context,
                                  AllowedTags allowed) {
  TagDecision d;
  if (const auto* match = model.first_match(context, allowed)) {
    d.tag = match->tag;
    d.provenance = Provenance::kLearner;
    return d;
  }
  d.provenance = Provenance::kFallback;
  d.tag = is_allowed(allowed, model.fallback_tag()) ? model.fallback_tag()
                                                    : allowed.front();
  return d;
}

}  // namespace seqtag
