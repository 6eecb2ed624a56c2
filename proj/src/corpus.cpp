#include "seqtag/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "seqtag/error.hpp"

namespace seqtag {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

TagSet::TagSet(std::vector<std::string> names) {
  for (auto& n : names)
    if (find(n) || add(n) != names_.size() - 1)
      throw Error(ErrorCode::kInvalidArgument, "duplicate tag name '" + n + "'");
}

std::optional<TagId> TagSet::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TagId TagSet::add(const std::string& name) {
  if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty tag name");
  if (auto existing = find(name)) return *existing;
  auto id = static_cast<TagId>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

CorpusFormat parse_corpus_format(std::string_view id) {
  if (id == "tab-tagged") return CorpusFormat::kTabTagged;
  if (id == "tab-words") return CorpusFormat::kTabWords;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown corpus format '" + std::string(id) + "'");
}

Corpus load_corpus(std::istream& in, CorpusFormat format) {
  Corpus corpus;
  Sentence current;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!current.tokens.empty()) corpus.push_back(std::move(current));
    current = Sentence{};
  };
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    auto tab = line.find('\t');
    Token token;
    if (format == CorpusFormat::kTabTagged) {
      if (tab == std::string::npos)
        throw MalformedLine(line_no, "expected word<TAB>tag");
      token.word = line.substr(0, tab);
      std::string tag = line.substr(tab + 1);
      if (token.word.empty()) throw MalformedLine(line_no, "empty word");
      if (tag.empty()) throw MalformedLine(line_no, "empty tag");
      if (tag.find('\t') != std::string::npos)
        throw MalformedLine(line_no, "more than two columns");
      token.tag = std::move(tag);
    } else {
      // Extra columns are ignored so that tagged files can be fed directly.
      token.word = line.substr(0, tab);
      if (token.word.empty()) throw MalformedLine(line_no, "empty word");
    }
    current.tokens.push_back(std::move(token));
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read error");
  flush();
  return corpus;
}

Corpus load_corpus_file(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return load_corpus(in, format);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) {
      out << token.word;
      if (token.tag) out << '\t' << *token.tag;
      out << '\n';
    }
    out << '\n';
  }
}

std::size_t token_count(const Corpus& corpus) {
  std::size_t n = 0;
  for (const auto& s : corpus) n += s.size();
  return n;
}

Lexicon::Lexicon(Entries entries, std::vector<std::size_t> global_tag_counts)
    : entries_(std::move(entries)),
      global_tag_counts_(std::move(global_tag_counts)) {
  for (const auto& [word, candidates] : entries_) {
    if (candidates.empty())
      throw Error(ErrorCode::kInvalidArgument,
                  "lexicon entry '" + word + "' has no candidates");
    for (const auto& c : candidates)
      if (c.tag >= global_tag_counts_.size())
        throw Error(ErrorCode::kInvalidArgument,
                    "lexicon entry '" + word + "' has an out-of-range tag");
  }
  majority_ = 0;
  for (std::size_t t = 1; t < global_tag_counts_.size(); ++t)
    if (global_tag_counts_[t] > global_tag_counts_[majority_])
      majority_ = static_cast<TagId>(t);
}

const std::vector<Candidate>* Lexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::is_ambiguous(std::string_view word) const {
  const auto* c = find(word);
  return c != nullptr && c->size() > 1;
}

std::pair<Lexicon, TagSet> build_lexicon(const Corpus& training) {
  std::set<std::string, std::less<>> tag_names;
  std::size_t tokens = 0;
  for (const auto& sentence : training) {
    for (const auto& token : sentence.tokens) {
      if (!token.tag)
        throw Error(ErrorCode::kMissingGoldTags,
                    "training token '" + token.word + "' has no tag");
      tag_names.insert(*token.tag);
      ++tokens;
    }
  }
  if (tokens == 0) throw Error(ErrorCode::kEmptyCorpus, "training corpus is empty");

  TagSet tags({tag_names.begin(), tag_names.end()});
  std::map<std::string, std::map<TagId, std::size_t>, std::less<>> counts;
  std::vector<std::size_t> global(tags.size(), 0);
  for (const auto& sentence : training) {
    for (const auto& token : sentence.tokens) {
      TagId t = *tags.find(*token.tag);
      ++counts[token.word][t];
      ++global[t];
    }
  }

  Lexicon::Entries entries;
  for (auto& [word, per_tag] : counts) {
    std::vector<Candidate> candidates;
    for (auto [tag, count] : per_tag) candidates.push_back({tag, count});
    // Tag ids follow name order here, so the id tie-break is the name tie-break.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const Candidate& a, const Candidate& b) {
                       if (a.count != b.count) return a.count > b.count;
                       return tags.name(a.tag) < tags.name(b.tag);
                     });
    entries.emplace(word, std::move(candidates));
  }
  return {Lexicon(std::move(entries), std::move(global)), std::move(tags)};
}

Lexicon apply_lexicon_override(const Lexicon& base, TagSet& tags,
                               std::istream& in) {
  Lexicon::Entries entries = base.entries();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line) || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw MalformedLine(line_no, "expected word<TAB>tag1,tag2,...");
    std::string word = line.substr(0, tab);
    std::vector<Candidate> candidates;
    for (const auto& name : split(std::string_view(line).substr(tab + 1), ',')) {
      if (name.empty()) throw MalformedLine(line_no, "empty tag in list");
      TagId id = tags.add(name);
      auto dup = std::find_if(candidates.begin(), candidates.end(),
                              [&](const Candidate& c) { return c.tag == id; });
      if (dup != candidates.end())
        throw MalformedLine(line_no, "duplicate tag '" + name + "'");
      std::size_t count = 0;
      if (const auto* known = base.find(word)) {
        for (const auto& c : *known)
          if (c.tag == id) count = c.count;
      }
      candidates.push_back({id, count});
    }
    entries[word] = std::move(candidates);
  }
  std::vector<std::size_t> global(base.global_tag_counts().begin(),
                                  base.global_tag_counts().end());
  global.resize(tags.size(), 0);
  return Lexicon(std::move(entries), std::move(global));
}

Partition partition_tokens(const Corpus& corpus, const Lexicon& lexicon) {
  Partition p;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (std::size_t t = 0; t < corpus[s].size(); ++t) {
      const auto* candidates = lexicon.find(corpus[s].tokens[t].word);
      TokenPosition pos{s, t};
      if (candidates == nullptr)
        p.unknown.push_back(pos);
      else if (candidates->size() > 1)
        p.ambiguous.push_back(pos);
      else
        p.unambiguous.push_back(pos);
    }
  }
  return p;
}

}  // namespace seqtag
