#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

/// Position range in a source text. Lines and columns are 1-based; columns
/// count Unicode code points. `end_*` is exclusive: it names the position just
/// past the last character, so an end-of-input span has start == end.
/// `begin`/`end` are the matching byte offsets.
struct SourceSpan {
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const { return start_line == 0; }
  bool contains(const SourceSpan& other) const {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

// The closed set of diagnostic codes. Adding a code means adding it here and
// to code_name() in diagnostic.cpp.
enum class DiagCode {
  // lexer / parser
  UnclosedList,
  StrayClose,
  UnterminatedString,
  DepthExceeded,
  // schema build / validation
  NotIntent,
  MissingName,
  DuplicateName,
  UnknownHead,
  DuplicateAttr,
  BadShape,
  ExtraForm,
  EmptyComponent,
  MissingSig,
  PillarMismatch,
  // format bridges
  JsonSyntax,
  JsonSchema,
  YamlSyntax,
  // inventory
  BadRow,
  DupRow,
  EmptyInventory,
  // metrics / io
  EmptyDescriptor,
  NoLeaves,
  IoError,
  // lab / navigation
  NoEligibleSite,
  PathNotFound,
};

std::string_view code_name(DiagCode code);
std::string_view severity_name(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::BadShape;
  SourceSpan span;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Diagnostic make_error(DiagCode code, SourceSpan span, std::string message);
Diagnostic make_warning(DiagCode code, SourceSpan span, std::string message);

bool has_errors(std::span<const Diagnostic> diagnostics);

/// `SEVERITY CODE line:col-line:col message`, no trailing newline.
std::string format_diagnostic(const Diagnostic& diagnostic);

/// One formatted diagnostic per line, each terminated by '\n'.
std::string format_diagnostics(std::span<const Diagnostic> diagnostics);

/// Thrown for contract violations that are not document findings, such as
/// asking for an injection site that does not exist.
class ForgeError : public std::runtime_error {
 public:
  ForgeError(DiagCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  DiagCode code() const { return code_; }

 private:
  DiagCode code_;
};

}  // namespace forge
