#include "forge/diagnostic.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace forge {

std::string_view code_name(DiagCode code) {
  switch (code) {
    case DiagCode::UnclosedList: return "UNCLOSED_LIST";
    case DiagCode::StrayClose: return "STRAY_CLOSE";
    case DiagCode::UnterminatedString: return "UNTERMINATED_STRING";
    case DiagCode::DepthExceeded: return "DEPTH_EXCEEDED";
    case DiagCode::NotIntent: return "NOT_INTENT";
    case DiagCode::MissingName: return "MISSING_NAME";
    case DiagCode::DuplicateName: return "DUPLICATE_NAME";
    case DiagCode::UnknownHead: return "UNKNOWN_HEAD";
    case DiagCode::DuplicateAttr: return "DUPLICATE_ATTR";
    case DiagCode::BadShape: return "BAD_SHAPE";
    case DiagCode::ExtraForm: return "EXTRA_FORM";
    case DiagCode::EmptyComponent: return "EMPTY_COMPONENT";
    case DiagCode::MissingSig: return "MISSING_SIG";
    case DiagCode::PillarMismatch: return "PILLAR_MISMATCH";
    case DiagCode::JsonSyntax: return "JSON_SYNTAX";
    case DiagCode::JsonSchema: return "JSON_SCHEMA";
    case DiagCode::YamlSyntax: return "YAML_SYNTAX";
    case DiagCode::BadRow: return "BAD_ROW";
    case DiagCode::DupRow: return "DUP_ROW";
    case DiagCode::EmptyInventory: return "EMPTY_INVENTORY";
    case DiagCode::EmptyDescriptor: return "EMPTY_DESCRIPTOR";
    case DiagCode::NoLeaves: return "NO_LEAVES";
    case DiagCode::IoError: return "IO_ERROR";
    case DiagCode::NoEligibleSite: return "NO_ELIGIBLE_SITE";
    case DiagCode::PathNotFound: return "PATH_NOT_FOUND";
  }
  return "UNKNOWN";
}

std::string_view severity_name(Severity severity) {
  return severity == Severity::Error ? "ERROR" : "WARNING";
}

Diagnostic make_error(DiagCode code, SourceSpan span, std::string message) {
  return Diagnostic{Severity::Error, code, span, std::move(message)};
}

Diagnostic make_warning(DiagCode code, SourceSpan span, std::string message) {
  return Diagnostic{Severity::Warning, code, span, std::move(message)};
}

bool has_errors(std::span<const Diagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

std::string format_diagnostic(const Diagnostic& d) {
  return fmt::format("{} {} {}:{}-{}:{} {}", severity_name(d.severity), code_name(d.code),
                     d.span.start_line, d.span.start_col, d.span.end_line, d.span.end_col,
                     d.message);
}

std::string format_diagnostics(std::span<const Diagnostic> diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    out += format_diagnostic(d);
    out += '\n';
  }
  return out;
}

}  // namespace forge
