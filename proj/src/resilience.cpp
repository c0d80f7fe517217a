#include "forge/resilience.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <random>
#include <thread>
#include <utility>

#include <fmt/format.h>

#include "forge/sexpr.hpp"

namespace forge::resilience {

std::string_view error_name(ErrorType type) {
  switch (type) {
    case ErrorType::E1: return "E1";
    case ErrorType::E2: return "E2";
    case ErrorType::E3: return "E3";
  }
  return "E1";
}

std::optional<ErrorType> parse_error_type(std::string_view text) {
  if (text == "e1" || text == "E1") return ErrorType::E1;
  if (text == "e2" || text == "E2") return ErrorType::E2;
  if (text == "e3" || text == "E3") return ErrorType::E3;
  return std::nullopt;
}

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Detected: return "detected";
    case Verdict::SilentCorruption: return "silent";
    case Verdict::Benign: return "benign";
  }
  return "benign";
}

namespace {

struct Line {
  std::size_t begin;
  std::size_t end;  // excludes '\n'
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back({pos, nl});
    pos = nl + 1;
  }
  return lines;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

std::vector<std::size_t> sexpr_sites(std::string_view text, ErrorType type) {
  std::vector<std::size_t> sites;
  for (const auto& tok : sexpr::lex(text).tokens) {
    if (type == ErrorType::E1 && tok.kind == sexpr::TokenKind::CloseParen) {
      sites.push_back(tok.span.begin);
    } else if (type == ErrorType::E2 && tok.kind == sexpr::TokenKind::String) {
      sites.push_back(tok.span.begin);
      sites.push_back(tok.span.end - 1);
    }
  }
  return sites;
}

std::vector<std::size_t> json_sites(std::string_view text, ErrorType type) {
  std::vector<std::size_t> sites;
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (type == ErrorType::E1 && (c == '}' || c == ']')) sites.push_back(i);
    else if (type == ErrorType::E2 && (c == ',' || c == ':')) sites.push_back(i);
  }
  return sites;
}

// Offset of the key separator on a YAML line, if the line holds a key.
std::optional<std::size_t> yaml_key_colon(std::string_view line) {
  std::size_t i = line.find_first_not_of(' ');
  if (i == std::string_view::npos) return std::nullopt;
  while (line.substr(i, 2) == "- ") i += 2;
  if (i >= line.size() || line[i] == '"' || line[i] == '#' || line.substr(i) == "-") return std::nullopt;
  for (std::size_t k = i; k < line.size(); ++k) {
    if (line[k] == ':' && (k + 1 == line.size() || line[k + 1] == ' ')) return k;
  }
  return std::nullopt;
}

std::vector<std::size_t> line_sites(std::string_view text, Format format, ErrorType type) {
  std::vector<std::size_t> sites;
  for (const Line& l : split_lines(text)) {
    const std::string_view line = text.substr(l.begin, l.end - l.begin);
    const std::size_t indent = std::min(line.find_first_not_of(' '), line.size());
    if (format == Format::Yaml) {
      if (type == ErrorType::E1 && indent >= 2 && indent < line.size()) sites.push_back(l.begin);
      if (type == ErrorType::E2) {
        if (auto k = yaml_key_colon(line)) sites.push_back(l.begin + *k);
      }
    } else {
      if (type == ErrorType::E1 && line.substr(0, 1) == "#") sites.push_back(l.begin);
      if (type == ErrorType::E2 && line.substr(indent, 2) == "- ") sites.push_back(l.begin + indent);
    }
  }
  return sites;
}

// Non-blank line pairs (first, second) for E3.
std::vector<std::pair<Line, Line>> swap_pairs(std::string_view text) {
  std::vector<Line> nonblank;
  for (const Line& l : split_lines(text)) {
    if (!blank(text.substr(l.begin, l.end - l.begin))) nonblank.push_back(l);
  }
  std::vector<std::pair<Line, Line>> pairs;
  for (std::size_t k = 0; k + 1 < nonblank.size(); ++k) pairs.emplace_back(nonblank[k], nonblank[k + 1]);
  return pairs;
}

// Unbiased index in [0, n) from the generator.
std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % bound);
}

}  // namespace

std::vector<std::size_t> eligible_sites(std::string_view text, Format format, ErrorType type) {
  if (type == ErrorType::E3) {
    std::vector<std::size_t> sites;
    for (const auto& [a, b] : swap_pairs(text)) sites.push_back(a.begin);
    return sites;
  }
  switch (format) {
    case Format::Sexpr: return sexpr_sites(text, type);
    case Format::Json: return json_sites(text, type);
    default: return line_sites(text, format, type);
  }
}

InjectionTrial inject(std::string_view text, Format format, ErrorType type, std::uint64_t seed) {
  const auto sites = eligible_sites(text, format, type);
  if (sites.empty()) {
    throw ForgeError(DiagCode::NoEligibleSite,
                     fmt::format("no {} site in the {} text", error_name(type), bridge::format_name(format)));
  }
  std::mt19937_64 rng(seed);
  const std::size_t index = pick(rng, sites.size());
  InjectionTrial trial{format, type, seed, sites[index], std::string(text)};
  std::string& t = trial.corrupted_text;
  if (type == ErrorType::E3) {
    const auto [a, b] = swap_pairs(text)[index];
    const std::string first(text.substr(a.begin, a.end - a.begin));
    const std::string between(text.substr(a.end, b.begin - a.end));
    const std::string second(text.substr(b.begin, b.end - b.begin));
    t.replace(a.begin, b.end - a.begin, second + between + first);
  } else if (format == Format::Yaml && type == ErrorType::E1) {
    t.erase(trial.site, 2);
  } else {
    t.erase(trial.site, 1);
  }
  return trial;
}

TrialOutcome evaluate(const InjectionTrial& trial, const IntentDoc& original) {
  TrialOutcome out;
  auto read = bridge::from_format(trial.corrupted_text, trial.format, sexpr::ParseMode::Tolerant);
  out.diagnostics = std::move(read.diagnostics);
  out.detected = has_errors(out.diagnostics);

  const sexpr::SNode pristine = intent::to_sexpr(original);
  std::vector<sexpr::SNode> recovered;
  if (read.doc) recovered.push_back(intent::to_sexpr(*read.doc));
  out.recovery = sexpr::content_recovery(std::span<const sexpr::SNode>(&pristine, 1), recovered);

  if (out.detected) {
    out.classification = Verdict::Detected;
  } else if (!read.doc || !(*read.doc == original)) {
    out.silently_corrupted = true;
    out.classification = Verdict::SilentCorruption;
  } else {
    out.classification = Verdict::Benign;
  }
  return out;
}

double CellReport::rate(std::size_t count) const {
  return trials == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(trials);
}

double CellReport::mean_recovery() const {
  return trials == 0 ? 0.0 : recovery_sum / static_cast<double>(trials);
}

const CellReport& CampaignReport::cell(Format format, ErrorType type) const {
  for (const auto& c : cells) {
    if (c.format == format && c.error_type == type) return c;
  }
  throw std::out_of_range("no such campaign cell");
}

CellReport CampaignReport::overall(Format format) const {
  CellReport total;
  total.format = format;
  for (const auto& c : cells) {
    if (c.format != format) continue;
    total.trials += c.trials;
    total.skipped += c.skipped;
    total.detected += c.detected;
    total.silent += c.silent;
    total.benign += c.benign;
    total.recovery_sum += c.recovery_sum;
  }
  return total;
}

std::size_t CampaignReport::injections() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.trials;
  return n;
}

CampaignReport run_campaign(std::span<const IntentDoc> corpus, std::size_t trials_per_cell,
                            std::uint64_t base_seed, unsigned threads) {
  CampaignReport report;
  report.trials_per_cell = trials_per_cell;
  report.base_seed = base_seed;
  if (corpus.empty()) return report;

  std::vector<std::array<std::string, 4>> texts(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (std::size_t f = 0; f < 4; ++f) texts[d][f] = bridge::to_format(corpus[d], kFormats[f]);
  }

  struct Job {
    std::size_t format;
    std::size_t type;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  for (std::size_t f = 0; f < 4; ++f) {
    for (std::size_t e = 0; e < 3; ++e) {
      for (std::size_t i = 0; i < trials_per_cell; ++i) jobs.push_back({f, e, i});
    }
  }
  std::vector<std::optional<TrialOutcome>> outcomes(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const std::size_t d = job.trial % corpus.size();
      try {
        const auto trial = inject(texts[d][job.format], kFormats[job.format], kErrorTypes[job.type],
                                  base_seed + job.trial);
        outcomes[j] = evaluate(trial, corpus[d]);
      } catch (const ForgeError& e) {
        if (e.code() != DiagCode::NoEligibleSite) throw;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t f = 0; f < 4; ++f) {
    for (std::size_t e = 0; e < 3; ++e) {
      CellReport cell;
      cell.format = kFormats[f];
      cell.error_type = kErrorTypes[e];
      report.cells.push_back(cell);
    }
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    CellReport& cell = report.cells[jobs[j].format * 3 + jobs[j].type];
    if (!outcomes[j]) {
      ++cell.skipped;
      continue;
    }
    ++cell.trials;
    cell.recovery_sum += outcomes[j]->recovery;
    switch (outcomes[j]->classification) {
      case Verdict::Detected: ++cell.detected; break;
      case Verdict::SilentCorruption: ++cell.silent; break;
      case Verdict::Benign: ++cell.benign; break;
    }
  }
  return report;
}

namespace {

std::string column_name(Format f) {
  switch (f) {
    case Format::Sexpr: return "S-expr";
    case Format::Json: return "JSON";
    case Format::Yaml: return "YAML";
    case Format::Markdown: return "MD";
  }
  return "";
}

std::string percent(double r) { return fmt::format("{:.1f}%", r * 100.0); }

}  // namespace

std::string format_table(const CampaignReport& report) {
  std::string out = fmt::format("{} injections ({} per cell, seed {})\n", report.injections(),
                                report.trials_per_cell, report.base_seed);
  out += fmt::format("{:<20}", "");
  for (Format f : kFormats) out += fmt::format("{:>9}", column_name(f));
  out += '\n';
  auto row = [&](const char* label, auto value) {
    out += fmt::format("{:<20}", label);
    for (Format f : kFormats) out += fmt::format("{:>9}", value(f));
    out += '\n';
  };
  row("E1 detection", [&](Format f) {
    const auto& c = report.cell(f, ErrorType::E1);
    return percent(c.rate(c.detected));
  });
  row("Overall detection", [&](Format f) {
    const auto c = report.overall(f);
    return percent(c.rate(c.detected));
  });
  row("Silent corruption", [&](Format f) {
    const auto c = report.overall(f);
    return percent(c.rate(c.silent));
  });
  row("Benign", [&](Format f) {
    const auto c = report.overall(f);
    return percent(c.rate(c.benign));
  });
  row("Mean recovery", [&](Format f) { return fmt::format("{:.3f}", report.overall(f).mean_recovery()); });
  std::size_t skipped = 0;
  for (const auto& c : report.cells) skipped += c.skipped;
  if (skipped > 0) out += fmt::format("{} requested trials had no eligible site\n", skipped);
  return out;
}

std::string format_csv(const CampaignReport& report) {
  std::string out = "format,error_type,trials,detected,silent,benign,mean_recovery\n";
  auto line = [&](const CellReport& c, std::string_view type) {
    out += fmt::format("{},{},{},{:.3f},{:.3f},{:.3f},{:.3f}\n", bridge::format_name(c.format), type,
                       c.trials, c.rate(c.detected), c.rate(c.silent), c.rate(c.benign),
                       c.mean_recovery());
  };
  for (Format f : kFormats) {
    for (ErrorType e : kErrorTypes) line(report.cell(f, e), error_name(e));
    line(report.overall(f), "all");
  }
  return out;
}

std::vector<ContractResult> check_contracts(const CampaignReport& report) {
  std::vector<ContractResult> out;
  const auto& s1 = report.cell(Format::Sexpr, ErrorType::E1);
  out.push_back({"sexpr E1 detection is 100%", s1.trials > 0 && s1.detected == s1.trials});
  const auto& j1 = report.cell(Format::Json, ErrorType::E1);
  out.push_back({"json E1 detection is 100%", j1.trials > 0 && j1.detected == j1.trials});
  out.push_back({"json E1 recovery is 0", j1.trials > 0 && j1.recovery_sum == 0.0});
  const auto md = report.overall(Format::Markdown);
  out.push_back({"md detection is 0%", md.trials > 0 && md.detected == 0});
  out.push_back({"md silent + benign is 100%", md.trials > 0 && md.silent + md.benign == md.trials});
  const auto& y1 = report.cell(Format::Yaml, ErrorType::E1);
  out.push_back({"yaml E1 silent corruption is above 0%", y1.silent > 0});
  return out;
}

}  // namespace forge::resilience
