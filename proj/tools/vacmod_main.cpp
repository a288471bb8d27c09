// Command-line front end: verification suites, operator tables, and graded
// dimensions for vacuum modules of affine current and Virasoro algebras.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vacmod/harness.hpp"

namespace {

using namespace vacmod;

int parse_rank(const std::string& algebra) {
  const std::string hint = "unsupported algebra '" + algebra + "'; expected sl<N> with N >= 2";
  if (algebra.rfind("sl", 0) != 0) throw ConfigError(hint);
  try {
    std::size_t used = 0;
    int rank = std::stoi(algebra.substr(2), &used);
    if (used != algebra.size() - 2) throw ConfigError(hint);
    return rank;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(hint);
  }
}

void apply_assignment(SuiteConfig& cfg, const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects name=value, got '" + text + "'");
  cfg.assignments[parse_param(text.substr(0, eq))] = parse_rational(text.substr(eq + 1));
}

int run_verify(const SuiteConfig& cfg) {
  VerificationReport report = run_suite(cfg);
  std::string rendered = emit_report(report, report_format(cfg.format));
  if (cfg.out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(cfg.out_path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write the report to " + cfg.out_path);
    out << rendered;
    std::cout << "wrote " << cfg.out_path << " (aggregate: "
              << (report.aggregate_pass ? "PASS" : "FAIL") << ")\n";
  }
  return report.aggregate_pass ? 0 : 1;
}

int run_table(const std::string& what, int rank, int degree, const std::string& cache_path) {
  if (what != "sugawara")
    throw ConfigError("unknown table '" + what + "'; the only table is sugawara");
  if (degree < 0) throw ConfigError("the table degree must be nonnegative");

  // Cap leaves room for the most negative printed mode (-2) on the deepest slice.
  ModuleSpecPtr spec = make_module_spec(AlgebraKind::KacMoody, Regime::Quantum, build_sl(rank),
                                        0, ParamAssignment{}, degree + 3);
  SugawaraConfig cfg(spec);
  std::optional<OperatorMatrixCache> cache;
  if (!cache_path.empty()) cache.emplace(cache_path);
  const std::string fp = cache_fingerprint(*spec);

  for (int d = 0; d <= degree; ++d) {
    std::vector<PBWMonomial> basis = enumerate_basis(spec, d);
    std::cout << "weight-" << d << " slice of the sl" << rank << " vacuum module ("
              << basis.size() << " states):\n";
    for (std::size_t j = 0; j < basis.size(); ++j)
      std::cout << "  column " << j << ": " << basis[j].text(*spec) << "\n";
    for (int m = -2; m <= 2; ++m) {
      const std::string op = "sugawara_mode[" + std::to_string(m) + "]";
      OperatorMatrix mat;
      if (cache) {
        std::optional<OperatorMatrix> hit = cache->load(op, d, fp);
        if (hit) {
          mat = std::move(*hit);
        } else {
          mat = sugawara_matrix(cfg, m, d);
          cache->store(op, d, fp, mat);
        }
      } else {
        mat = sugawara_matrix(cfg, m, d);
      }
      std::cout << "L^S_{" << m << "} (" << mat.rows << " x " << mat.cols << "):";
      if (mat.entries.empty()) std::cout << " 0";
      std::cout << "\n";
      for (const auto& [row, col, text] : mat.entries)
        std::cout << "  (" << row << ", " << col << ") = " << text << "\n";
    }
    std::cout << "\n";
  }
  return 0;
}

int run_dims(int rank, int level_structure, int degree) {
  SuiteConfig cfg;
  cfg.suite = "dimensions";
  cfg.rank = rank;
  cfg.level_structure = level_structure;
  cfg.truncation_degree = degree;
  VerificationReport report = run_suite(cfg);

  AlgebraPtr g = build_sl(rank);
  for (AlgebraKind kind :
       {AlgebraKind::KacMoody, AlgebraKind::Virasoro, AlgebraKind::Semidirect}) {
    ModuleSpecPtr spec = make_module_spec(kind, Regime::Quantum,
                                          kind == AlgebraKind::Virasoro ? nullptr : g,
                                          level_structure, ParamAssignment{}, degree);
    std::cout << algebra_kind_name(kind) << ":";
    for (int w = 0; w <= degree; ++w) std::cout << " " << enumerate_basis(spec, w).size();
    std::cout << "\n";
  }
  std::cout << "cross-check against the Euler-product generating functions: "
            << (report.aggregate_pass ? "PASS" : "FAIL") << "\n";
  return report.aggregate_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact symbolic checks for vacuum modules of affine current and Virasoro algebras"};
  app.require_subcommand(1);

  std::string suite = "all";
  std::string algebra = "sl2";
  std::string cache_path;
  std::string out_path;
  std::string format = "json";
  int level_structure = 0;
  int degree = 6;
  int mode_range = 4;
  int workers = 1;
  bool negative_control = false;
  std::vector<std::string> assignments;

  std::string suite_list;
  for (const std::string& s : suite_names()) {
    if (!suite_list.empty()) suite_list += ", ";
    suite_list += s;
  }

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite and emit a report");
  verify->add_option("suite", suite, "one of: " + suite_list)->capture_default_str();
  verify->add_option("--algebra", algebra, "simple Lie algebra, sl<N>")->capture_default_str();
  verify->add_option("--level-structure", level_structure,
                     "vacuum annihilation threshold parameter n")
      ->capture_default_str();
  verify->add_option("--degree", degree, "graded truncation degree")->capture_default_str();
  verify->add_option("--mode-range", mode_range, "bound on swept generator modes")
      ->capture_default_str();
  verify->add_option("--set", assignments,
                     "numeric parameter assignment name=value (repeatable; k and c only)");
  verify->add_option("--workers", workers, "worker threads for independent checks")
      ->capture_default_str();
  verify->add_option("--cache", cache_path,
                     "operator-matrix cache file; adds a cache round-trip check");
  verify->add_option("--out", out_path, "write the report to this file instead of stdout");
  verify->add_option("--format", format, "report format, json or text")->capture_default_str();
  verify->add_flag("--negative-control", negative_control)->group("");

  std::string table_what;
  std::string table_algebra = "sl2";
  std::string table_cache;
  int table_degree = 2;
  CLI::App* table =
      app.add_subcommand("table", "print operator matrices on the graded slices");
  table->add_option("operator", table_what, "which operator family (sugawara)")->required();
  table->add_option("--degree", table_degree, "deepest weight slice to print")
      ->capture_default_str();
  table->add_option("--algebra", table_algebra, "simple Lie algebra, sl<N>")
      ->capture_default_str();
  table->add_option("--cache", table_cache, "operator-matrix cache file");

  std::string dims_algebra = "sl2";
  int dims_degree = 6;
  int dims_level = 0;
  CLI::App* dims =
      app.add_subcommand("dims", "print graded dimensions and cross-check them");
  dims->add_option("--degree", dims_degree, "largest weight to tabulate")->capture_default_str();
  dims->add_option("--algebra", dims_algebra, "simple Lie algebra, sl<N>")
      ->capture_default_str();
  dims->add_option("--level-structure", dims_level, "vacuum annihilation threshold parameter n")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      SuiteConfig cfg;
      cfg.suite = suite;
      cfg.rank = parse_rank(algebra);
      cfg.level_structure = level_structure;
      cfg.truncation_degree = degree;
      cfg.mode_range = mode_range;
      cfg.workers = workers;
      cfg.cache_path = cache_path;
      cfg.out_path = out_path;
      cfg.format = format;
      cfg.negative_control = negative_control;
      for (const std::string& s : assignments) apply_assignment(cfg, s);
      return run_verify(cfg);
    }
    if (*table) return run_table(table_what, parse_rank(table_algebra), table_degree, table_cache);
    if (*dims) return run_dims(parse_rank(dims_algebra), dims_level, dims_degree);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
