#pragma once

// Command-line front end: `solve` for one instance file, `bench` for a directory.

#include <chrono>
#include <filesystem>
#include <future>
#include <iostream>

#include <CLI11.hpp>

#include "notcontains/io.hpp"

namespace notcontains::cli {

struct Options {
  std::string input;
  std::string profile = "paper";
  std::size_t iter_bound = 8;
  std::size_t max_paths = 100000;
  std::size_t pattern_cap = 50000;
  std::size_t time_limit_ms = 0;
  std::optional<std::size_t> oracle_check;
  std::string emit_smt;
  bool trace = false;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
};

inline Config make_config(const Options& o, std::ostream* trace) {
  Config cfg;
  cfg.profile = BoundsProfile::parse(o.profile);
  cfg.iter_bound = o.iter_bound;
  cfg.max_paths = o.max_paths;
  cfg.pattern_cap = o.pattern_cap;
  cfg.time_limit_ms = o.time_limit_ms;
  cfg.workers = std::max<std::size_t>(1, o.workers);
  cfg.trace = trace;
  return cfg;
}

inline void write_smt(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  emit_smtlib(inst, out);
}

inline int run_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = make_config(o, o.trace ? &err : nullptr);
  const Document doc = load_document(o.input);
  if (!o.emit_smt.empty()) write_smt(doc.inst, o.emit_smt);
  const Verdict v = solve(doc.inst, cfg);
  Json j = verdict_to_json(v, doc.inst.alphabet, cfg.profile);
  if (o.oracle_check) {
    auto oracle = brute_oracle(doc.inst, *o.oracle_check);
    j["oracle"] = {{"bound", *o.oracle_check},
                   {"status", to_string(oracle.status)},
                   {"agrees", agrees_with_oracle(v, oracle, *o.oracle_check)}};
  }
  out << j.dump() << '\n';
  return 0;
}

struct BenchRow {
  std::string file;
  std::string status;
  long long ms = 0;
};

inline BenchRow bench_one(const std::filesystem::path& file, const Options& o, const Config& cfg) {
  BenchRow row{file.filename().string(), "error", 0};
  const auto start = std::chrono::steady_clock::now();
  try {
    const Document doc = load_document(file.string());
    if (!o.emit_smt.empty()) write_smt(doc.inst, std::filesystem::path(o.emit_smt) / (file.stem().string() + ".smt2"));
    row.status = to_string(solve(doc.inst, cfg).status);
  } catch (const Error&) {
    row.status = "error";
  }
  row.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return row;
}

inline int run_bench(const Options& o, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(o.input, ec)) {
    err << "error: cannot read directory '" << o.input << "'\n";
    return 1;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.input, ec)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  if (ec) {
    err << "error: cannot read directory '" << o.input << "'\n";
    return 1;
  }
  std::sort(files.begin(), files.end());
  if (!o.emit_smt.empty()) fs::create_directories(o.emit_smt);

  Config cfg = make_config(o, o.trace ? &err : nullptr);
  const std::size_t workers = cfg.workers;
  cfg.workers = 1;
  std::vector<BenchRow> rows(files.size());
  for (std::size_t lo = 0; lo < files.size(); lo += workers) {
    const std::size_t hi = std::min(files.size(), lo + workers);
    std::vector<std::future<BenchRow>> jobs;
    for (std::size_t i = lo; i < hi; ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i] { return bench_one(files[i], o, cfg); }));
    }
    for (std::size_t i = lo; i < hi; ++i) rows[i] = jobs[i - lo].get();
  }

  std::map<std::string, std::size_t> counts;
  out << "file,status,ms,profile\n";
  for (const auto& r : rows) {
    out << r.file << ',' << r.status << ',' << r.ms << ',' << cfg.profile.name() << '\n';
    ++counts[r.status];
  }
  out << "# total=" << rows.size() << " sat=" << counts["sat"] << " unsat=" << counts["unsat"]
      << " unknown=" << counts["unknown"] << " error=" << counts["error"] << '\n';
  return 0;
}

/// Exit status: 0 for any computed verdict, 1 for input errors, 2 for internal errors.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Decide satisfiability of a not-contains string constraint"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--bounds-profile", o.profile, "paper or scaled:F with 0 < F <= 1");
    sub->add_option("--iter-bound", o.iter_bound, "largest loop count tried by the flat solver");
    sub->add_option("--max-paths", o.max_paths, "cap on reaching paths per tree");
    sub->add_option("--pattern-cap", o.pattern_cap, "cap on flat patterns per variable");
    sub->add_option("--time-limit-ms", o.time_limit_ms, "wall-clock limit per instance (0 = none)");
    sub->add_option("--emit-smt", o.emit_smt, "write the instance as an SMT-LIB script");
    sub->add_flag("--trace", o.trace, "log pipeline stages to standard error");
    sub->add_option("--workers", o.workers, "parallel workers");
    sub->add_option("--seed", o.seed, "reserved for randomized generation");
  };
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance file");
  solve_cmd->add_option("--input", o.input, "instance file")->required();
  solve_cmd->add_option("--oracle-check", o.oracle_check, "cross-check against brute force up to this length");
  common(solve_cmd);
  auto* bench_cmd = app.add_subcommand("bench", "solve every *.json file in a directory");
  bench_cmd->add_option("dir", o.input, "instance directory")->required();
  common(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  try {
    if (solve_cmd->parsed()) return run_solve(o, out, err);
    return run_bench(o, out, err);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace notcontains::cli
