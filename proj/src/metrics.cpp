#include "forge/metrics.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace forge::metrics {

namespace fs = std::filesystem;

const CommentMap& default_comment_map() {
  static const CommentMap map = [] {
    CommentMap m;
    for (const char* ext : {"c", "cc", "cpp", "cxx", "h", "hh", "hpp", "hxx", "rs", "go", "java", "js",
                            "jsx", "ts", "tsx", "kt", "swift", "cs", "scala", "dart", "zig"}) {
      m[ext] = {"//"};
    }
    for (const char* ext : {"py", "sh", "bash", "zsh", "rb", "pl", "r", "toml", "yaml", "yml", "cmake",
                            "mk", "nix"}) {
      m[ext] = {"#"};
    }
    for (const char* ext : {"lisp", "el", "clj", "scm", "sexp", "rkt"}) m[ext] = {";"};
    for (const char* ext : {"sql", "hs", "lua", "elm"}) m[ext] = {"--"};
    return m;
  }();
  return map;
}

namespace {

std::string normalize_ext(std::string_view ext) {
  if (!ext.empty() && ext.front() == '.') ext.remove_prefix(1);
  std::string out(ext);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

LineCount count_lines(std::string_view text, std::string_view extension, const CommentMap& comments) {
  LineCount lc;
  const auto it = comments.find(normalize_ext(extension));
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lc.physical;
    std::size_t first = 0;
    while (first < line.size() && is_space(line[first])) ++first;
    if (first == line.size()) continue;
    ++lc.nonblank;
    line.remove_prefix(first);
    bool comment = false;
    if (it != comments.end()) {
      for (const auto& prefix : it->second) {
        if (line.substr(0, prefix.size()) == prefix) comment = true;
      }
    }
    if (!comment) ++lc.code_like;
  }
  return lc;
}

std::optional<std::uint64_t> rounded_ratio(std::uint64_t source, std::uint64_t descriptor) {
  if (descriptor == 0) return std::nullopt;
  const std::uint64_t hundredths = (200 * source + descriptor) / (2 * descriptor);
  return (hundredths + 50) / 100;
}

std::string render_ratio(std::uint64_t source, std::uint64_t descriptor) {
  const auto r = rounded_ratio(source, descriptor);
  return r ? fmt::format("{}:1", *r) : std::string("inf");
}

double ProjectRow::raw_ratio() const {
  if (descriptor.physical == 0) return 0.0;
  return static_cast<double>(source.physical) / static_cast<double>(descriptor.physical);
}

ProjectRow CompressionReport::total() const {
  ProjectRow t;
  t.project = "total";
  for (const auto& r : rows) {
    t.source += r.source;
    t.descriptor += r.descriptor;
    t.source_files += r.source_files;
    t.descriptor_files += r.descriptor_files;
  }
  return t;
}

CompressionReport make_report(std::vector<ProjectRow> rows) {
  CompressionReport report;
  report.rows = std::move(rows);
  for (const auto& r : report.rows) {
    if (r.descriptor.physical == 0) {
      report.diagnostics.push_back(make_warning(DiagCode::EmptyDescriptor, {},
                                                fmt::format("project '{}' has no descriptor lines", r.project)));
    }
  }
  return report;
}

namespace {

bool glob_match(const std::string& pattern, const std::string& rel, const std::string& name) {
  return fnmatch(pattern.c_str(), rel.c_str(), 0) == 0 || fnmatch(pattern.c_str(), name.c_str(), 0) == 0;
}

bool selected(const CompressOptions& o, const std::string& rel, const std::string& name) {
  if (!o.include.empty() &&
      std::none_of(o.include.begin(), o.include.end(), [&](const auto& g) { return glob_match(g, rel, name); })) {
    return false;
  }
  return std::none_of(o.exclude.begin(), o.exclude.end(), [&](const auto& g) { return glob_match(g, rel, name); });
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

Diagnostic io_error(const std::string& what) { return make_error(DiagCode::IoError, {}, what); }

}  // namespace

CompressionReport compress_report(const std::vector<std::string>& source_roots,
                                  const std::vector<std::string>& descriptor_paths,
                                  const CompressOptions& options) {
  ProjectRow row;
  row.project = options.project;
  std::vector<Diagnostic> diags;

  std::vector<std::string> descriptors = descriptor_paths;
  std::sort(descriptors.begin(), descriptors.end());
  descriptors.erase(std::unique(descriptors.begin(), descriptors.end()), descriptors.end());
  std::set<fs::path> descriptor_files;
  for (const auto& d : descriptors) {
    std::error_code ec;
    descriptor_files.insert(fs::weakly_canonical(d, ec));
  }

  // A descriptor living inside a source root is not counted as source.
  std::set<fs::path> files;
  std::vector<std::string> roots = source_roots;
  std::sort(roots.begin(), roots.end());
  for (const auto& root : roots) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
      diags.push_back(io_error(fmt::format("{}: not a readable directory", root)));
      continue;
    }
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    for (; !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (!it->is_regular_file(ec)) continue;
      const std::string rel = fs::relative(it->path(), root, ec).generic_string();
      if (!selected(options, rel, it->path().filename().string())) continue;
      fs::path canonical = fs::weakly_canonical(it->path(), ec);
      if (descriptor_files.count(canonical) == 0) files.insert(std::move(canonical));
    }
    if (ec) diags.push_back(io_error(fmt::format("{}: {}", root, ec.message())));
  }
  for (const auto& f : files) {
    auto text = read_file(f);
    if (!text) {
      diags.push_back(io_error(fmt::format("{}: cannot read", f.string())));
      continue;
    }
    row.source += count_lines(*text, f.extension().string(), options.comments);
    ++row.source_files;
  }

  for (const auto& d : descriptors) {
    std::error_code ec;
    auto text = fs::is_regular_file(d, ec) ? read_file(d) : std::nullopt;
    if (!text) {
      diags.push_back(io_error(fmt::format("{}: cannot read", d)));
      continue;
    }
    row.descriptor += count_lines(*text, fs::path(d).extension().string(), options.comments);
    ++row.descriptor_files;
  }

  CompressionReport report = make_report({row});
  diags.insert(diags.end(), report.diagnostics.begin(), report.diagnostics.end());
  report.diagnostics = std::move(diags);
  return report;
}

namespace {

std::string grouped(std::uint64_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  int k = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it, ++k) {
    if (k > 0 && k % 3 == 0) out += ',';
    out += *it;
  }
  return {out.rbegin(), out.rend()};
}

}  // namespace

std::string format_table(const CompressionReport& report) {
  std::string out = fmt::format("{:<20} {:>12} {:>10} {:>6} {:>8}\n", "Project", "Source", "Lisp", "Files", "Ratio");
  auto line = [&](const ProjectRow& r) {
    out += fmt::format("{:<20} {:>12} {:>10} {:>6} {:>8}\n", r.project, grouped(r.source.physical),
                       grouped(r.descriptor.physical), r.descriptor_files,
                       render_ratio(r.source.physical, r.descriptor.physical));
  };
  for (const auto& r : report.rows) line(r);
  line(report.total());
  return out;
}

std::string format_csv(const CompressionReport& report) {
  std::string out = "project,source_lines,descriptor_lines,descriptor_files,ratio\n";
  auto line = [&](const ProjectRow& r) {
    const std::string ratio = r.descriptor.physical == 0 ? "inf" : fmt::format("{:.6f}", r.raw_ratio());
    out += fmt::format("{},{},{},{},{}\n", r.project, r.source.physical, r.descriptor.physical,
                       r.descriptor_files, ratio);
  };
  for (const auto& r : report.rows) line(r);
  line(report.total());
  return out;
}

}  // namespace forge::metrics
