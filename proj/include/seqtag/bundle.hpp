#pragma once

#include <iosfwd>
#include <string>

#include "seqtag/tagger.hpp"

namespace seqtag {

inline constexpr int kBundleFormatVersion = 1;

// A single text file holding tag set, lexicon, feature config, vocabulary
// and learner. Starts with `seqtag-bundle<TAB>version`; each section is
// `[name]<TAB>line count` followed by that many lines; ends with `[end]`.
void save_bundle(std::ostream& out, const TaggerBundle& bundle);
void save_bundle_file(const std::string& path, const TaggerBundle& bundle);

// Throws kFormatVersionMismatch for other versions and CorruptModel (naming
// the section) for anything undecodable, including truncation.
TaggerBundle load_bundle(std::istream& in);
TaggerBundle load_bundle_file(const std::string& path);

}  // namespace seqtag
