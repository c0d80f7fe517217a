#include "forge/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "forge/bridge.hpp"
#include "forge/coevolution.hpp"
#include "forge/corpus.hpp"
#include "forge/intent.hpp"
#include "forge/metrics.hpp"
#include "forge/navigator.hpp"
#include "forge/resilience.hpp"
#include "forge/sexpr.hpp"

namespace forge::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kClean = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;

struct IoFailure {
  std::string message;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure{fmt::format("cannot read {}", path)};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& text) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += fmt::format(".tmp{}", static_cast<unsigned long>(std::hash<std::string>{}(path) & 0xffff));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) throw IoFailure{fmt::format("cannot write {}", tmp.string())};
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoFailure{fmt::format("cannot replace {}", path)};
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw IoFailure{fmt::format("cannot write {}", path)};
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return 42;
}

bridge::Format detect(const std::string& path, const std::string& from) {
  if (!from.empty()) {
    if (auto f = bridge::parse_format(from)) return *f;
    throw CLI::ValidationError("--from", "unknown format " + from);
  }
  return bridge::format_from_path(path).value_or(bridge::Format::Sexpr);
}

struct Loaded {
  intent::IntentDoc doc;
  std::vector<Diagnostic> diagnostics;
};

// Reads a descriptor in any format. Returns nullopt when there is no document.
std::optional<Loaded> load_doc(const std::string& path, const std::string& from, std::ostream& err) {
  const std::string text = read_text(path);
  auto r = bridge::from_format(text, detect(path, from));
  if (!r.doc) {
    err << format_diagnostics(r.diagnostics);
    return std::nullopt;
  }
  return Loaded{std::move(*r.doc), std::move(r.diagnostics)};
}

// Loads and reports build problems on `err`.
std::optional<intent::IntentDoc> require_doc(const std::string& path, std::ostream& err) {
  auto loaded = load_doc(path, "", err);
  if (!loaded) return std::nullopt;
  err << format_diagnostics(loaded->diagnostics);
  return std::move(loaded->doc);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toolchain for intent.lisp architecture descriptors", "forge"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<int()> action;
  std::string file;
  std::string from;
  std::uint64_t seed = default_seed();

  // parse
  bool tolerant = false;
  bool diagnostics_only = false;
  auto* parse = app.add_subcommand("parse", "Parse and dump the tree with spans and diagnostics");
  parse->add_option("file", file, "Descriptor")->required();
  parse->add_flag("--tolerant", tolerant, "Repair errors instead of stopping at the first");
  parse->add_flag("--diagnostics-only", diagnostics_only, "Print only diagnostics");
  parse->callback([&] {
    action = [&] {
      const auto outcome = sexpr::parse(read_text(file), tolerant ? sexpr::ParseMode::Tolerant : sexpr::ParseMode::Strict);
      out << (diagnostics_only ? format_diagnostics(outcome.diagnostics) : sexpr::serialize(outcome));
      return outcome.ok() ? kClean : kFindings;
    };
  });

  // validate
  auto* validate = app.add_subcommand("validate", "Build and check a descriptor");
  validate->add_option("file", file, "Descriptor (any supported format)")->required();
  validate->add_option("--from", from, "Input format, overriding the extension");
  validate->callback([&] {
    action = [&] {
      auto loaded = load_doc(file, from, out);
      if (!loaded) return kFindings;
      auto diags = loaded->diagnostics;
      const auto checks = intent::validate(loaded->doc);
      diags.insert(diags.end(), checks.begin(), checks.end());
      out << format_diagnostics(diags);
      return has_errors(diags) ? kFindings : kClean;
    };
  });

  // fmt
  bool write = false;
  auto* fmt_cmd = app.add_subcommand("fmt", "Print the canonical form");
  fmt_cmd->add_option("file", file, "S-expression file")->required();
  fmt_cmd->add_flag("--write", write, "Rewrite the file in place");
  fmt_cmd->callback([&] {
    action = [&] {
      const auto outcome = sexpr::parse_strict(read_text(file));
      if (!outcome.ok()) {
        err << format_diagnostics(outcome.diagnostics);
        return kFindings;
      }
      const std::string canonical = sexpr::print_canonical(outcome.roots);
      if (write) {
        write_atomic(file, canonical);
      } else {
        out << canonical;
      }
      return kClean;
    };
  });

  // convert
  std::string to;
  auto* convert = app.add_subcommand("convert", "Convert between sexpr, json, yaml and md");
  convert->add_option("file", file, "Descriptor")->required();
  convert->add_option("--to", to, "Output format")->required()->check(CLI::IsMember({"sexpr", "json", "yaml", "md"}));
  convert->add_option("--from", from, "Input format, overriding the extension");
  convert->callback([&] {
    action = [&] {
      auto loaded = load_doc(file, from, err);
      if (!loaded) return kFindings;
      err << format_diagnostics(loaded->diagnostics);
      out << bridge::to_format(loaded->doc, *bridge::parse_format(to));
      return has_errors(loaded->diagnostics) ? kFindings : kClean;
    };
  });

  // inject
  std::string format_opt;
  std::string error_opt;
  auto* inject = app.add_subcommand("inject", "Apply one seeded corruption and print the result");
  inject->add_option("file", file, "Descriptor")->required();
  inject->add_option("--format", format_opt, "Format to corrupt")->required()->check(
      CLI::IsMember({"sexpr", "json", "yaml", "md"}));
  inject->add_option("--error", error_opt, "Error type")->required()->check(
      CLI::IsMember({"e1", "e2", "e3", "E1", "E2", "E3"}));
  inject->add_option("--seed", seed, "Seed (default 42, or FORGE_SEED)");
  inject->callback([&] {
    action = [&] {
      const auto format = *bridge::parse_format(format_opt);
      const std::string text = read_text(file);
      std::string source = text;
      if (detect(file, "") != format) {
        auto loaded = load_doc(file, "", err);
        if (!loaded) return kFindings;
        source = bridge::to_format(loaded->doc, format);
      }
      try {
        const auto trial = resilience::inject(source, format, *resilience::parse_error_type(error_opt), seed);
        out << trial.corrupted_text;
        err << fmt::format("{} {} seed {} site {}\n", bridge::format_name(format),
                           resilience::error_name(trial.error_type), seed, trial.site);
      } catch (const ForgeError& e) {
        err << fmt::format("{}: {}\n", code_name(e.code()), e.what());
        return kFindings;
      }
      return kClean;
    };
  });

  // bench-resilience
  std::vector<std::string> files;
  std::size_t trials = 8;
  std::size_t generated = 0;
  std::string csv;
  bool check = false;
  unsigned threads = 0;
  auto* bench = app.add_subcommand("bench-resilience", "Run the injection campaign over a corpus");
  bench->add_option("files", files, "Descriptors forming the corpus");
  bench->add_option("--trials-per-cell", trials, "Trials per (format, error type) cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "Base seed (default 42, or FORGE_SEED)");
  bench->add_option("--generated", generated, "Add this many generated documents to the corpus");
  bench->add_option("--csv", csv, "Also write the CSV report here");
  bench->add_flag("--check", check, "Exit 1 unless every format contract holds");
  bench->add_option("--threads", threads, "Worker threads (0 = all cores)");
  bench->callback([&] {
    action = [&] {
      std::vector<intent::IntentDoc> docs;
      for (const auto& f : files) {
        auto doc = require_doc(f, err);
        if (!doc) return kFindings;
        docs.push_back(std::move(*doc));
      }
      for (std::size_t i = 0; i < generated; ++i) docs.push_back(corpus::random_doc(seed + 1 + i));
      if (docs.empty()) throw CLI::ValidationError("bench-resilience", "the corpus is empty");
      const auto report = resilience::run_campaign(docs, trials, seed, threads);
      out << resilience::format_table(report);
      if (!csv.empty()) write_file(csv, resilience::format_csv(report));
      if (check) {
        bool ok = true;
        for (const auto& c : resilience::check_contracts(report)) {
          err << (c.ok ? "ok   " : "FAIL ") << c.name << '\n';
          ok = ok && c.ok;
        }
        if (!ok) return kFindings;
      }
      return kClean;
    };
  });

  // compress
  std::vector<std::string> src_dirs;
  std::vector<std::string> intents;
  metrics::CompressOptions copts;
  auto* compress = app.add_subcommand("compress", "Compare source and descriptor line counts");
  compress->add_option("--src", src_dirs, "Source directory")->required();
  compress->add_option("--intent", intents, "Descriptor file")->required();
  compress->add_option("--include", copts.include, "Only count source files matching this glob");
  compress->add_option("--exclude", copts.exclude, "Skip source files matching this glob");
  compress->add_option("--project", copts.project, "Project name in the report");
  compress->add_option("--csv", csv, "Also write the CSV report here");
  compress->callback([&] {
    action = [&] {
      const auto report = metrics::compress_report(src_dirs, intents, copts);
      out << metrics::format_table(report);
      if (!csv.empty()) write_file(csv, metrics::format_csv(report));
      err << format_diagnostics(report.diagnostics);
      for (const auto& d : report.diagnostics) {
        if (d.code == DiagCode::IoError) return kUsage;
      }
      return kClean;
    };
  });

  // query
  std::string op;
  std::string operand;
  std::string mode = "auto";
  auto* query = app.add_subcommand("query", "find-symbol PAT | who-owns TOPIC | subtree PATH");
  query->add_option("file", file, "Descriptor")->required();
  query->add_option("operation", op, "find-symbol, who-owns or subtree")->required()->check(
      CLI::IsMember({"find-symbol", "who-owns", "subtree"}));
  query->add_option("argument", operand, "Pattern, topic or path")->required();
  query->add_option("--mode", mode, "find-symbol matching: auto, exact, substring or glob")
      ->check(CLI::IsMember({"auto", "exact", "substring", "glob"}));
  query->callback([&] {
    action = [&] {
      auto doc = require_doc(file, err);
      if (!doc) return kFindings;
      if (op == "subtree") {
        const auto path = nav::NavPath::parse(operand);
        if (!path) throw CLI::ValidationError("subtree", "malformed path " + operand);
        try {
          out << sexpr::print_canonical(nav::subtree(*doc, *path));
        } catch (const ForgeError& e) {
          err << fmt::format("{}: {}\n", code_name(e.code()), e.what());
          return kFindings;
        }
        return kClean;
      }
      if (op == "who-owns") {
        out << nav::format_hits(nav::who_owns(*doc, operand));
        return kClean;
      }
      nav::MatchMode m = nav::MatchMode::Substring;
      if (mode == "exact") m = nav::MatchMode::Exact;
      else if (mode == "glob") m = nav::MatchMode::Glob;
      else if (mode == "auto" && operand.find_first_of("*?[") != std::string::npos) m = nav::MatchMode::Glob;
      out << nav::format_hits(nav::find_symbol(*doc, operand, m));
      return kClean;
    };
  });

  // partition
  std::size_t k = 1;
  auto* partition = app.add_subcommand("partition", "Split components into k balanced buckets");
  partition->add_option("file", file, "Descriptor")->required();
  partition->add_option("--k", k, "Bucket count")->required()->check(CLI::PositiveNumber);
  partition->callback([&] {
    action = [&] {
      auto doc = require_doc(file, err);
      if (!doc) return kFindings;
      out << nav::format_partition(*doc, nav::partition(*doc, k));
      return kClean;
    };
  });

  // skeleton
  std::string inventory;
  std::string root = "project";
  std::string depth = "top-level";
  auto* skeleton = app.add_subcommand("skeleton", "Generate a descriptor from a symbol inventory");
  skeleton->add_option("--inventory", inventory, "Inventory file")->required();
  skeleton->add_option("--root", root, "Project name");
  skeleton->add_option("--depth", depth, "Pillar rule: top-level or two-level")
      ->check(CLI::IsMember({"top-level", "two-level"}));
  skeleton->callback([&] {
    action = [&] {
      const auto inv = coevo::read_inventory(read_text(inventory), root);
      err << format_diagnostics(inv.diagnostics);
      if (has_errors(inv.diagnostics)) return kFindings;
      const auto rule = depth == "two-level" ? coevo::DepthRule::TwoLevel : coevo::DepthRule::TopLevel;
      out << intent::print(coevo::skeleton(inv.inventory, rule));
      return kClean;
    };
  });

  // drift
  auto* drift = app.add_subcommand("drift", "Compare a descriptor with a symbol inventory");
  drift->add_option("file", file, "Descriptor")->required();
  drift->add_option("--inventory", inventory, "Inventory file")->required();
  drift->add_option("--csv", csv, "Also write the CSV report here");
  drift->callback([&] {
    action = [&] {
      auto doc = require_doc(file, err);
      if (!doc) return kFindings;
      const auto inv = coevo::read_inventory(read_text(inventory));
      err << format_diagnostics(inv.diagnostics);
      const auto report = coevo::drift(*doc, inv.inventory);
      out << coevo::format_drift_text(report);
      if (!csv.empty()) write_file(csv, coevo::format_drift_csv(report));
      return report.drifted() ? kFindings : kClean;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    return action ? action() : kUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kClean : kUsage;
  } catch (const IoFailure& e) {
    err << "error: " << e.message << '\n';
    return kUsage;
  }
}

}  // namespace forge::cli
