#pragma once

#include <stdexcept>
#include <string>

namespace jurisrank {

/// Base of every exception the library throws. `exit_code()` is the CLI
/// status the error maps to: 2 configuration, 3 data validation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 3; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// A pipeline stage failed; the message names the stage.
class StageFailure : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

#define JURISRANK_DATA_ERROR(Name)  \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  }

JURISRANK_DATA_ERROR(ParseError);
JURISRANK_DATA_ERROR(IdentityMismatch);
JURISRANK_DATA_ERROR(UnknownJudgment);
JURISRANK_DATA_ERROR(UnparseableJudgment);
JURISRANK_DATA_ERROR(MalformedOutline);
JURISRANK_DATA_ERROR(MalformedCitation);
JURISRANK_DATA_ERROR(InfeasibleSplit);
JURISRANK_DATA_ERROR(DimensionError);
JURISRANK_DATA_ERROR(MissingEmbedding);
JURISRANK_DATA_ERROR(DuplicateScore);
JURISRANK_DATA_ERROR(InvalidScore);
JURISRANK_DATA_ERROR(IncompleteScores);
JURISRANK_DATA_ERROR(UndefinedMetric);
JURISRANK_DATA_ERROR(MissingRanking);

#undef JURISRANK_DATA_ERROR

}  // namespace jurisrank
