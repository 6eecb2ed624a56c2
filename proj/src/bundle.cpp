#include "seqtag/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <variant>

#include "seqtag/error.hpp"
#include "text_util.hpp"

namespace seqtag {

namespace {

constexpr const char* kMagic = "seqtag-bundle";

void write_section(std::ostream& out, const std::string& name, const std::string& body) {
  const auto lines = std::count(body.begin(), body.end(), '\n');
  out << '[' << name << "]\t" << lines << '\n' << body;
}

std::string features_body(const FeatureConfig& f) {
  std::ostringstream s;
  s << "window\t" << f.window << '\n'
    << "use_pos\t" << f.use_pos << '\n'
    << "use_pos_order\t" << f.use_pos_order << '\n'
    << "use_word\t" << f.use_word << '\n';
  return s.str();
}

std::string lexicon_body(const Lexicon& lexicon) {
  std::ostringstream s;
  for (const auto& [word, candidates] : lexicon.entries()) {
    s << word << '\t';
    for (std::size_t k = 0; k < candidates.size(); ++k)
      s << (k ? "," : "") << candidates[k].tag << ':' << candidates[k].count;
    s << '\n';
  }
  return s.str();
}

class SectionReader {
 public:
  explicit SectionReader(std::istream& in) : in_(in) {}

  // Lines of the next section, which must be called `name`.
  std::vector<std::string> read(const std::string& name) {
    std::string line;
    if (!std::getline(in_, line)) throw CorruptModel(name, "file ends before section");
    const std::string prefix = "[" + name + "]\t";
    if (line.rfind(prefix, 0) != 0)
      throw CorruptModel(name, "expected section header, found '" + line + "'");
    auto count = detail::parse_number<std::size_t>(std::string_view(line).substr(prefix.size()));
    if (!count) throw CorruptModel(name, "bad line count");
    std::vector<std::string> lines;
    lines.reserve(*count);
    for (std::size_t k = 0; k < *count; ++k) {
      if (!std::getline(in_, line))
        throw CorruptModel(name, "truncated after " + std::to_string(k) + " of " +
                                     std::to_string(*count) + " lines");
      lines.push_back(std::move(line));
    }
    return lines;
  }

  void expect_end() {
    std::string line;
    if (!std::getline(in_, line) || line != "[end]")
      throw CorruptModel("end", "missing end marker");
  }

 private:
  std::istream& in_;
};

std::istringstream join(const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) (text += l) += '\n';
  return std::istringstream(text);
}

std::pair<std::string, std::string> key_value(const std::string& line,
                                              const std::string& section) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) throw CorruptModel(section, "expected key<TAB>value");
  return {line.substr(0, tab), line.substr(tab + 1)};
}

FeatureConfig read_features(const std::vector<std::string>& lines) {
  FeatureConfig f;
  if (lines.size() != 4) throw CorruptModel("features", "expected 4 entries");
  auto flag = [](const std::string& v) {
    if (v == "1") return true;
    if (v == "0") return false;
    throw CorruptModel("features", "bad flag '" + v + "'");
  };
  for (const auto& line : lines) {
    auto [key, value] = key_value(line, "features");
    if (key == "window") {
      auto w = detail::parse_number<int>(value);
      if (!w) throw CorruptModel("features", "bad window");
      f.window = *w;
    } else if (key == "use_pos") {
      f.use_pos = flag(value);
    } else if (key == "use_pos_order") {
      f.use_pos_order = flag(value);
    } else if (key == "use_word") {
      f.use_word = flag(value);
    } else {
      throw CorruptModel("features", "unknown key '" + key + "'");
    }
  }
  try {
    f.validate();
  } catch (const Error& e) {
    throw CorruptModel("features", e.what());
  }
  return f;
}

Lexicon read_lexicon(const std::vector<std::string>& lexicon_lines,
                     const std::vector<std::string>& count_lines, std::size_t num_tags) {
  if (count_lines.size() != num_tags)
    throw CorruptModel("tag-counts", "expected one count per tag");
  std::vector<std::size_t> global;
  for (const auto& l : count_lines) {
    auto c = detail::parse_number<std::size_t>(l);
    if (!c) throw CorruptModel("tag-counts", "bad count '" + l + "'");
    global.push_back(*c);
  }
  Lexicon::Entries entries;
  for (const auto& line : lexicon_lines) {
    auto [word, list] = key_value(line, "lexicon");
    std::vector<Candidate> candidates;
    for (auto item : detail::split_view(list, ',')) {
      auto parts = detail::split_view(item, ':');
      std::optional<TagId> tag;
      std::optional<std::size_t> count;
      if (parts.size() == 2) {
        tag = detail::parse_number<TagId>(parts[0]);
        count = detail::parse_number<std::size_t>(parts[1]);
      }
      if (!tag || !count || *tag >= num_tags)
        throw CorruptModel("lexicon", "bad candidate in '" + line + "'");
      candidates.push_back({*tag, *count});
    }
    if (word.empty() || !entries.emplace(word, std::move(candidates)).second)
      throw CorruptModel("lexicon", "bad or duplicate word in '" + line + "'");
  }
  try {
    return Lexicon(std::move(entries), std::move(global));
  } catch (const Error& e) {
    throw CorruptModel("lexicon", e.what());
  }
}

}  // namespace

void save_bundle(std::ostream& out, const TaggerBundle& bundle) {
  out << kMagic << '\t' << kBundleFormatVersion << '\n';
  write_section(out, "method", std::string(method_name(bundle.method())) + "\n");
  write_section(out, "features", features_body(bundle.features));
  std::string tags;
  for (const auto& name : bundle.tags.names()) (tags += name) += '\n';
  write_section(out, "tags", tags);
  std::string counts;
  for (auto c : bundle.lexicon.global_tag_counts()) (counts += std::to_string(c)) += '\n';
  write_section(out, "tag-counts", counts);
  write_section(out, "lexicon", lexicon_body(bundle.lexicon));
  std::ostringstream vocab;
  bundle.vocabulary.save(vocab);
  write_section(out, "vocabulary", vocab.str());
  std::ostringstream model;
  std::visit(
      [&](const auto& m) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(m)>, BaselineLearner>) m.save(model);
      },
      bundle.learner);
  write_section(out, "model", model.str());
  out << "[end]\n";
}

void save_bundle_file(const std::string& path, const TaggerBundle& bundle) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  save_bundle(out, bundle);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

TaggerBundle load_bundle(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CorruptModel("header", "empty file");
  auto [magic, version_text] = key_value(line, "header");
  if (magic != kMagic) throw CorruptModel("header", "not a seqtag bundle");
  auto version = detail::parse_number<int>(version_text);
  if (!version) throw CorruptModel("header", "bad format version");
  if (*version != kBundleFormatVersion)
    throw Error(ErrorCode::kFormatVersionMismatch,
                "bundle format version " + std::to_string(*version) +
                    " is not supported (this build reads version " +
                    std::to_string(kBundleFormatVersion) + ")");

  SectionReader reader(in);
  TaggerBundle bundle;
  auto method_lines = reader.read("method");
  if (method_lines.size() != 1) throw CorruptModel("method", "expected one line");
  Method method;
  try {
    method = parse_method(method_lines.front());
  } catch (const Error& e) {
    throw CorruptModel("method", e.what());
  }
  bundle.features = read_features(reader.read("features"));
  try {
    bundle.tags = TagSet(reader.read("tags"));
  } catch (const CorruptModel&) {
    throw;
  } catch (const Error& e) {
    throw CorruptModel("tags", e.what());
  }
  auto counts = reader.read("tag-counts");
  bundle.lexicon = read_lexicon(reader.read("lexicon"), counts, bundle.tags.size());
  {
    auto text = join(reader.read("vocabulary"));
    bundle.vocabulary = FeatureVocabulary::load(text);
  }
  auto model_text = join(reader.read("model"));
  switch (method) {
    case Method::kBaseline:
      bundle.learner = BaselineLearner{};
      break;
    case Method::kDecisionList:
      bundle.learner = DecisionListModel::load(model_text);
      break;
    case Method::kMaxEnt:
      bundle.learner = MaxEntModel::load(model_text);
      break;
    case Method::kSvm:
      bundle.learner = PairwiseModel::load(model_text);
      break;
  }
  reader.expect_end();
  return bundle;
}

TaggerBundle load_bundle_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return load_bundle(in);
}

}  // namespace seqtag
