#pragma once

#include <sstream>
#include <string>

#include "seqtag/corpus.hpp"

namespace fixture {

inline seqtag::Corpus parse(const std::string& text,
                            seqtag::CorpusFormat format = seqtag::CorpusFormat::kTabTagged) {
  std::istringstream in(text);
  return seqtag::load_corpus(in, format);
}

// run: VERB x3, NOUN x1; bank: NOUN x2, VERB x2; everything else unambiguous.
inline seqtag::Corpus run_bank() {
  return parse(
      "they\tPRON\nrun\tVERB\nfast\tADV\n\n"
      "we\tPRON\nrun\tVERB\nhome\tNOUN\n\n"
      "a\tDET\nrun\tNOUN\nended\tVERB\n\n"
      "dogs\tNOUN\nrun\tVERB\n\n"
      "the\tDET\nbank\tNOUN\nclosed\tVERB\n\n"
      "a\tDET\nbank\tNOUN\n\n"
      "planes\tNOUN\nbank\tVERB\nleft\tADV\n\n"
      "they\tPRON\nbank\tVERB\nhere\tADV\n");
}

}  // namespace fixture
