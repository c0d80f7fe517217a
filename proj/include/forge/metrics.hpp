#pragma once

// Source versus descriptor line accounting.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/diagnostic.hpp"

namespace forge::metrics {

struct LineCount {
  std::uint64_t physical = 0;
  std::uint64_t nonblank = 0;
  std::uint64_t code_like = 0;  // nonblank minus full-line comments

  LineCount& operator+=(const LineCount& o) {
    physical += o.physical;
    nonblank += o.nonblank;
    code_like += o.code_like;
    return *this;
  }
  friend bool operator==(const LineCount&, const LineCount&) = default;
};

/// Extension (lowercase, no dot) to full-line comment prefixes.
using CommentMap = std::map<std::string, std::vector<std::string>>;
const CommentMap& default_comment_map();

/// A final line without '\n' still counts. Unknown extensions have no
/// comment syntax.
LineCount count_lines(std::string_view text, std::string_view extension,
                      const CommentMap& comments = default_comment_map());

/// source/descriptor rounded half away from zero first to hundredths and then
/// to an integer. nullopt when descriptor is 0.
std::optional<std::uint64_t> rounded_ratio(std::uint64_t source, std::uint64_t descriptor);
/// `N:1`, or `inf` when descriptor is 0.
std::string render_ratio(std::uint64_t source, std::uint64_t descriptor);

struct ProjectRow {
  std::string project;
  LineCount source;
  LineCount descriptor;
  std::uint64_t source_files = 0;
  std::uint64_t descriptor_files = 0;

  double raw_ratio() const;
};

struct CompressionReport {
  std::vector<ProjectRow> rows;
  std::vector<Diagnostic> diagnostics;  // IO_ERROR, EMPTY_DESCRIPTOR

  /// Sums of every row; its ratio comes from the summed counts.
  ProjectRow total() const;
};

struct CompressOptions {
  std::string project = "project";
  std::vector<std::string> include;  // empty means every file
  std::vector<std::string> exclude;
  CommentMap comments = default_comment_map();
};

/// Walks every source root in lexicographic order and counts each matching
/// regular file once. Globs match the root-relative path or the file name.
/// Unreadable files are skipped with IO_ERROR.
CompressionReport compress_report(const std::vector<std::string>& source_roots,
                                  const std::vector<std::string>& descriptor_paths,
                                  const CompressOptions& options = {});

/// Adds an EMPTY_DESCRIPTOR warning for each row without descriptor lines.
CompressionReport make_report(std::vector<ProjectRow> rows);

/// Aligned table with one row per project and a totals row.
std::string format_table(const CompressionReport& report);
/// `project,source_lines,descriptor_lines,descriptor_files,ratio` with the
/// unrounded ratio, then a `total` row.
std::string format_csv(const CompressionReport& report);

}  // namespace forge::metrics
