#include "seqtag/error.hpp"

namespace seqtag {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kPositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::kNoExamples: return "NoExamples";
    case ErrorCode::kDegenerateProblem: return "DegenerateProblem";
    case ErrorCode::kSingleCategory: return "SingleCategory";
    case ErrorCode::kUnknownMethod: return "UnknownMethod";
    case ErrorCode::kMissingGoldTags: return "MissingGoldTags";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kFormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::kCorruptModel: return "CorruptModel";
  }
  return "Unknown";
}

}  // namespace seqtag
