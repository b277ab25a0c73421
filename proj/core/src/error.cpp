#include "eeq/error.hpp"

namespace eeq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::DuplicateLocale: return "DuplicateLocale";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::InvalidLocaleId: return "InvalidLocaleId";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::MissingTableKind: return "MissingTableKind";
    case ErrorCode::NoCommonLocales: return "NoCommonLocales";
    case ErrorCode::Io: return "Io";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::IntegrityViolation: return "IntegrityViolation";
    case ErrorCode::NonPositiveIncome: return "NonPositiveIncome";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UnknownLocale: return "UnknownLocale";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroVarianceTarget: return "ZeroVarianceTarget";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& subject,
                    const std::string& detail) {
  std::string out{to_string(code)};
  if (!subject.empty()) out += "(" + subject + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string subject, const std::string& detail)
    : std::runtime_error(compose(code, subject, detail)),
      code_(code),
      subject_(std::move(subject)) {}

Error::Error(ErrorCode code, std::string subject)
    : Error(code, std::move(subject), std::string{}) {}

}  // namespace eeq
