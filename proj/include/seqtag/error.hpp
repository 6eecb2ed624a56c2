#pragma once

#include <stdexcept>
#include <string>

namespace seqtag {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kMalformedLine,
  kEmptyCorpus,
  kEmptyVocabulary,
  kPositionOutOfRange,
  kNoExamples,
  kDegenerateProblem,
  kSingleCategory,
  kUnknownMethod,
  kMissingGoldTags,
  kInvalidSpec,
  kFormatVersionMismatch,
  kCorruptModel,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the corpus readers; carries the 1-based line number.
class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& detail)
      : Error(ErrorCode::kMalformedLine,
              "malformed line " + std::to_string(line) + ": " + detail),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Raised when a model or bundle file cannot be decoded; names the section.
class CorruptModel : public Error {
 public:
  CorruptModel(const std::string& section, const std::string& detail)
      : Error(ErrorCode::kCorruptModel,
              "corrupt model in section '" + section + "': " + detail),
        section_(section) {}
  const std::string& section() const noexcept { return section_; }

 private:
  std::string section_;
};

}  // namespace seqtag
