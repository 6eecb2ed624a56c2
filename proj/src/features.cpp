#include "seqtag/features.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "seqtag/error.hpp"
#include "text_util.hpp"

namespace seqtag {

FeatureVector::FeatureVector(std::vector<FeatureId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool FeatureVector::contains(FeatureId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::size_t overlap(const FeatureVector& a, const FeatureVector& b) {
  std::size_t n = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kPos:
      return "POS";
    case FeatureKind::kPosOrder:
      return "POS_ORDER";
    case FeatureKind::kWord:
      return "WORD";
  }
  return "?";
}

FeatureKey FeatureKey::at_boundary(FeatureKind kind, int offset) {
  FeatureKey k;
  k.kind = kind;
  k.offset = offset;
  k.boundary = true;
  return k;
}

FeatureKey FeatureKey::pos(int offset, TagId tag) {
  FeatureKey k;
  k.kind = FeatureKind::kPos;
  k.offset = offset;
  k.tag = tag;
  return k;
}

FeatureKey FeatureKey::pos_order(int offset, TagId tag, std::uint32_t rank) {
  FeatureKey k;
  k.kind = FeatureKind::kPosOrder;
  k.offset = offset;
  k.tag = tag;
  k.rank = rank;
  return k;
}

FeatureKey FeatureKey::word_at(int offset, std::string word) {
  FeatureKey k;
  k.kind = FeatureKind::kWord;
  k.offset = offset;
  k.word = std::move(word);
  return k;
}

namespace {

std::string payload(const FeatureKey& key) {
  if (key.boundary) return {};
  switch (key.kind) {
    case FeatureKind::kPos:
      return std::to_string(key.tag);
    case FeatureKind::kPosOrder:
      return std::to_string(key.tag) + "," + std::to_string(key.rank);
    case FeatureKind::kWord:
      return key.word;
  }
  return {};
}

}  // namespace

std::string to_string(const FeatureKey& key, const TagSet* tags) {
  std::string s = feature_kind_name(key.kind);
  s += '[';
  if (key.offset > 0) s += '+';
  s += std::to_string(key.offset);
  s += "]=";
  if (key.boundary) return s + "<boundary>";
  auto tag_name = [&](TagId t) {
    return tags != nullptr && t < tags->size() ? tags->name(t) : std::to_string(t);
  };
  switch (key.kind) {
    case FeatureKind::kPos:
      return s + tag_name(key.tag);
    case FeatureKind::kPosOrder:
      return s + tag_name(key.tag) + "#" + std::to_string(key.rank);
    case FeatureKind::kWord:
      return s + key.word;
  }
  return s;
}

std::optional<FeatureId> FeatureVocabulary::intern(const FeatureKey& key) {
  if (auto id = find(key)) return id;
  if (frozen_) return std::nullopt;
  auto id = static_cast<FeatureId>(keys_.size());
  keys_.push_back(key);
  ids_.emplace(key, id);
  return id;
}

std::optional<FeatureId> FeatureVocabulary::find(const FeatureKey& key) const {
  auto it = ids_.find(key);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void FeatureVocabulary::save(std::ostream& out) const {
  for (std::size_t id = 0; id < keys_.size(); ++id) {
    const auto& k = keys_[id];
    out << id << '\t' << feature_kind_name(k.kind) << '\t' << k.offset << '\t'
        << payload(k) << '\n';
  }
}

FeatureVocabulary FeatureVocabulary::load(std::istream& in) {
  FeatureVocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> CorruptModel {
    return CorruptModel("vocabulary",
                        "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto cols = detail::split_view(line, '\t');
    if (cols.size() != 4) throw fail("expected 4 columns");
    auto id = detail::parse_number<FeatureId>(cols[0]);
    auto offset = detail::parse_number<int>(cols[2]);
    if (!id || *id != vocab.keys_.size()) throw fail("ids must be contiguous");
    if (!offset) throw fail("bad offset");
    FeatureKind kind;
    if (cols[1] == "POS")
      kind = FeatureKind::kPos;
    else if (cols[1] == "POS_ORDER")
      kind = FeatureKind::kPosOrder;
    else if (cols[1] == "WORD")
      kind = FeatureKind::kWord;
    else
      throw fail("unknown kind");
    FeatureKey key;
    if (cols[3].empty()) {
      key = FeatureKey::at_boundary(kind, *offset);
    } else if (kind == FeatureKind::kPos) {
      auto tag = detail::parse_number<TagId>(cols[3]);
      if (!tag) throw fail("bad tag id");
      key = FeatureKey::pos(*offset, *tag);
    } else if (kind == FeatureKind::kPosOrder) {
      auto parts = detail::split_view(cols[3], ',');
      if (parts.size() != 2) throw fail("bad POS_ORDER payload");
      auto tag = detail::parse_number<TagId>(parts[0]);
      auto rank = detail::parse_number<std::uint32_t>(parts[1]);
      if (!tag || !rank || *rank < 1) throw fail("bad POS_ORDER payload");
      key = FeatureKey::pos_order(*offset, *tag, *rank);
    } else {
      key = FeatureKey::word_at(*offset, std::string(cols[3]));
    }
    if (vocab.ids_.count(key) != 0) throw fail("duplicate key");
    vocab.intern(key);
  }
  vocab.freeze();
  return vocab;
}

void FeatureConfig::validate() const {
  if (window < 0 || window > kMaxWindow)
    throw Error(ErrorCode::kInvalidArgument,
                "window must lie in [0, " + std::to_string(kMaxWindow) + "]");
  if (!use_pos && !use_pos_order && !use_word)
    throw Error(ErrorCode::kInvalidArgument,
                "at least one feature group must be enabled");
}

std::vector<std::pair<FeatureKey, bool>> context_keys(
    const Sentence& sentence, std::size_t position, const Lexicon& lexicon,
    const FeatureConfig& config) {
  if (position >= sentence.size())
    throw Error(ErrorCode::kPositionOutOfRange,
                "position " + std::to_string(position) + " outside sentence of " +
                    std::to_string(sentence.size()) + " tokens");
  std::vector<std::pair<FeatureKey, bool>> keys;
  const auto n = static_cast<long>(sentence.size());
  for (int offset = -config.window; offset <= config.window; ++offset) {
    long index = static_cast<long>(position) + offset;
    if (index < 0 || index >= n) {
      if (config.use_pos)
        keys.emplace_back(FeatureKey::at_boundary(FeatureKind::kPos, offset), true);
      if (config.use_pos_order)
        keys.emplace_back(FeatureKey::at_boundary(FeatureKind::kPosOrder, offset),
                          true);
      if (config.use_word)
        keys.emplace_back(FeatureKey::at_boundary(FeatureKind::kWord, offset), true);
      continue;
    }
    const auto& word = sentence.tokens[static_cast<std::size_t>(index)].word;
    const auto* candidates = lexicon.find(word);
    if (candidates != nullptr) {
      std::uint32_t rank = 0;
      for (const auto& c : *candidates) {
        rank = std::min(rank + 1, kMaxRank);
        if (config.use_pos) keys.emplace_back(FeatureKey::pos(offset, c.tag), true);
        if (config.use_pos_order)
          keys.emplace_back(FeatureKey::pos_order(offset, c.tag, rank), true);
      }
    }
    if (config.use_word)
      keys.emplace_back(FeatureKey::word_at(offset, word), candidates != nullptr);
  }
  return keys;
}

FeatureVector extract(const Sentence& sentence, std::size_t position,
                      const Lexicon& lexicon, FeatureVocabulary& vocab,
                      const FeatureConfig& config) {
  std::vector<FeatureId> ids;
  for (const auto& [key, allocatable] :
       context_keys(sentence, position, lexicon, config)) {
    auto id = allocatable ? vocab.intern(key) : vocab.find(key);
    if (id) ids.push_back(*id);
  }
  return FeatureVector(std::move(ids));
}

FeatureVector extract(const Sentence& sentence, std::size_t position,
                      const Lexicon& lexicon, const FeatureVocabulary& vocab,
                      const FeatureConfig& config) {
  std::vector<FeatureId> ids;
  for (const auto& [key, allocatable] :
       context_keys(sentence, position, lexicon, config)) {
    if (auto id = vocab.find(key)) ids.push_back(*id);
  }
  return FeatureVector(std::move(ids));
}

FeatureVocabulary build_vocabulary(const Corpus& training,
                                   const Lexicon& lexicon,
                                   const FeatureConfig& config) {
  config.validate();
  FeatureVocabulary vocab;
  auto partition = partition_tokens(training, lexicon);
  if (partition.ambiguous.empty())
    throw Error(ErrorCode::kEmptyVocabulary,
                "training corpus has no ambiguous words; nothing for a learner "
                "to classify (use --method baseline, or a corpus where some "
                "word carries more than one tag)");
  for (const auto& pos : partition.ambiguous)
    extract(training[pos.sentence], pos.token, lexicon, vocab, config);
  vocab.freeze();
  return vocab;
}

}  // namespace seqtag
