#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eeq {

enum class ErrorCode {
  // ingest
  MissingColumn,
  DuplicateLocale,
  NonNumericCell,
  NegativeValue,
  EmptyTable,
  InvalidLocaleId,
  MalformedCsv,
  MissingTableKind,
  NoCommonLocales,
  Io,
  FormatVersionMismatch,
  IntegrityViolation,
  // burden
  NonPositiveIncome,
  InvalidInput,
  UnknownLocale,
  // xai
  InsufficientData,
  InvalidParams,
  DimensionMismatch,
  LengthMismatch,
  ZeroVarianceTarget,
  UnknownFeature,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `subject()` names the offending
/// entity (a column, a locale id, a file, a feature) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& detail);
  Error(ErrorCode code, std::string subject);

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace eeq
