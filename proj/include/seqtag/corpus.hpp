#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seqtag {

using TagId = std::uint32_t;

// Dense tag inventory. Ids are assigned in ascending tag-name order when the
// set is built from a corpus; tags added later by a lexicon override are
// appended.
class TagSet {
 public:
  TagSet() = default;
  explicit TagSet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(TagId id) const { return names_.at(id); }
  std::optional<TagId> find(std::string_view name) const;
  TagId add(const std::string& name);
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool operator==(const TagSet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, TagId, std::less<>> index_;
};

struct Token {
  std::string word;
  std::optional<std::string> tag;  // gold tag; absent in raw tagging input

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

using Corpus = std::vector<Sentence>;

enum class CorpusFormat {
  kTabTagged,  // "tab-tagged": word<TAB>tag
  kTabWords,   // "tab-words": one word per line
};

CorpusFormat parse_corpus_format(std::string_view id);

// Reads sentences in file order. Blank lines separate sentences (runs of
// blank lines are harmless) and '#'-prefixed lines are comments.
Corpus load_corpus(std::istream& in, CorpusFormat format);
Corpus load_corpus_file(const std::string& path, CorpusFormat format);

// Writes tab-tagged text. Tokens without a gold tag are written as bare
// words, i.e. tab-words lines.
void write_corpus(std::ostream& out, const Corpus& corpus);

std::size_t token_count(const Corpus& corpus);

struct Candidate {
  TagId tag;
  std::size_t count;

  bool operator==(const Candidate&) const = default;
};

// Per-word candidate tags ordered by descending training count, ties by
// ascending tag name. The rank of a candidate is its 1-based position.
class Lexicon {
 public:
  using Entries = std::map<std::string, std::vector<Candidate>, std::less<>>;

  Lexicon() = default;
  Lexicon(Entries entries, std::vector<std::size_t> global_tag_counts);

  // nullptr for words absent from the lexicon.
  const std::vector<Candidate>* find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) != nullptr; }
  bool is_ambiguous(std::string_view word) const;

  const Entries& entries() const noexcept { return entries_; }
  std::span<const std::size_t> global_tag_counts() const noexcept {
    return global_tag_counts_;
  }
  // Most frequent tag overall; ties go to the lower tag id.
  TagId majority_tag() const noexcept { return majority_; }
  std::size_t size() const noexcept { return entries_.size(); }

  bool operator==(const Lexicon& other) const {
    return entries_ == other.entries_ &&
           global_tag_counts_ == other.global_tag_counts_;
  }

 private:
  Entries entries_;
  std::vector<std::size_t> global_tag_counts_;
  TagId majority_ = 0;
};

std::pair<Lexicon, TagSet> build_lexicon(const Corpus& training);

// Applies a `word<TAB>tag1,tag2,...` override file. Listed words get exactly
// the listed candidates in the listed order (rank follows file order);
// training counts are kept where the pair was observed, 0 otherwise. Unknown
// tag names are appended to `tags`.
Lexicon apply_lexicon_override(const Lexicon& base, TagSet& tags,
                               std::istream& in);

struct TokenPosition {
  std::size_t sentence;
  std::size_t token;

  auto operator<=>(const TokenPosition&) const = default;
};

struct Partition {
  std::vector<TokenPosition> ambiguous;
  std::vector<TokenPosition> unambiguous;
  std::vector<TokenPosition> unknown;
};

Partition partition_tokens(const Corpus& corpus, const Lexicon& lexicon);

}  // namespace seqtag
