#pragma once

// Seeded single-edit error injection and per-format outcome measurement.
//
// Error types and their edit per format:
//
//            E1 structural           E2 delimiter             E3 displacement
//   sexpr    delete one `)`          delete one `"`           swap a non-blank line
//   json     delete one `}` or `]`   delete one `,` or `:`    with the next
//   yaml     dedent a line by 2      delete a key's `:`       non-blank line
//   md       delete one heading `#`  delete a bullet `-`
//
// Sites inside string literals are never eligible for E1 or E2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/bridge.hpp"
#include "forge/intent.hpp"

namespace forge::resilience {

using bridge::Format;
using intent::IntentDoc;

enum class ErrorType { E1, E2, E3 };

inline constexpr Format kFormats[] = {Format::Sexpr, Format::Json, Format::Yaml, Format::Markdown};
inline constexpr ErrorType kErrorTypes[] = {ErrorType::E1, ErrorType::E2, ErrorType::E3};

std::string_view error_name(ErrorType type);
/// Accepts `e1`..`e3` in either case.
std::optional<ErrorType> parse_error_type(std::string_view text);

/// Byte offsets of every eligible edit site, ascending. For E3 a site is the
/// start of the first line of the pair.
std::vector<std::size_t> eligible_sites(std::string_view text, Format format, ErrorType type);

struct InjectionTrial {
  Format format = Format::Sexpr;
  ErrorType error_type = ErrorType::E1;
  std::uint64_t seed = 0;
  std::size_t site = 0;
  std::string corrupted_text;
};

/// Picks a site uniformly with a 64-bit Mersenne Twister seeded by `seed`.
/// Throws ForgeError(NO_ELIGIBLE_SITE) when there is none.
InjectionTrial inject(std::string_view text, Format format, ErrorType type, std::uint64_t seed);

enum class Verdict { Detected, SilentCorruption, Benign };
std::string_view verdict_name(Verdict verdict);

struct TrialOutcome {
  bool detected = false;
  bool silently_corrupted = false;
  double recovery = 0.0;
  Verdict classification = Verdict::Benign;
  std::vector<Diagnostic> diagnostics;
};

/// Reads the corrupted text back with the format's reader (sexpr: tolerant
/// parse and build). Recovery compares the S-expression renderings of the
/// original and recovered documents.
TrialOutcome evaluate(const InjectionTrial& trial, const IntentDoc& original);

struct CellReport {
  Format format = Format::Sexpr;
  std::optional<ErrorType> error_type;  // nullopt for the per-format total
  std::size_t trials = 0;               // evaluated trials
  std::size_t skipped = 0;              // requested trials with no eligible site
  std::size_t detected = 0;
  std::size_t silent = 0;
  std::size_t benign = 0;
  double recovery_sum = 0.0;

  double rate(std::size_t count) const;
  double mean_recovery() const;
};

struct CampaignReport {
  std::size_t trials_per_cell = 0;
  std::uint64_t base_seed = 0;
  std::vector<CellReport> cells;  // format-major, then E1..E3

  const CellReport& cell(Format format, ErrorType type) const;
  CellReport overall(Format format) const;
  std::size_t injections() const;
};

/// Trial i of every cell uses corpus[i % corpus.size()] and seed base_seed + i.
/// Runs on `threads` workers (0 picks the hardware count); the report does not
/// depend on scheduling.
CampaignReport run_campaign(std::span<const IntentDoc> corpus, std::size_t trials_per_cell,
                            std::uint64_t base_seed, unsigned threads = 0);

/// Rows: E1 detection, overall detection, silent corruption, benign, mean
/// recovery. One column per format.
std::string format_table(const CampaignReport& report);

/// `format,error_type,trials,detected,silent,benign,mean_recovery`; counts are
/// given as rates with three decimals. Each format ends with an `all` row.
std::string format_csv(const CampaignReport& report);

struct ContractResult {
  std::string name;
  bool ok = false;
};

/// The per-format failure-mode contracts: sexpr E1 always detected, JSON E1
/// always detected with nothing recovered, Markdown never detected, and YAML
/// E1 silently corrupting at least once.
std::vector<ContractResult> check_contracts(const CampaignReport& report);

}  // namespace forge::resilience
