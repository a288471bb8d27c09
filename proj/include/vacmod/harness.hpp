#pragma once
// Verification harness: named check suites over worker threads, stable JSON
// and text reports, and a file-backed cache of operator matrices.
//
// A suite is a fixed, deterministically ordered list of checks; each check
// verifies one operator identity (or one family of identities) and reports
// the first failing basis vector with both coefficients in canonical text.
// Reports with equal configs are byte-identical apart from the wall time.

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "vacmod/limits.hpp"

namespace vacmod {

inline constexpr int kReportSchemaVersion = 1;

// Suite identifiers in their canonical (report) order; the last entry "all"
// concatenates the preceding suites.
const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& id);

struct SuiteConfig {
  std::string suite = "all";
  int rank = 2;  // sl_rank
  int level_structure = 0;
  int truncation_degree = 6;
  int mode_range = 4;
  // Opt-in numeric specializations of k and c. The degeneration suites
  // (rees, critical, classical, poisson) study behaviour in the symbolic
  // parameters and reject any assignment; lambda and mu only ever appear
  // there, so assigning them is always a configuration error.
  std::map<Param, Rat> assignments;
  int workers = 1;
  std::string cache_path;  // empty: no operator-matrix cache
  std::string out_path;    // empty: stdout (CLI-level concern, echoed only)
  std::string format = "json";
  // Test fixture: perturb one structure constant of the Lie algebra, which
  // must drive the lie / current-algebra suites to a witnessed failure.
  bool negative_control = false;

  friend bool operator==(const SuiteConfig&, const SuiteConfig&) = default;
};

// Throws ConfigError on invalid or inconsistent settings (unknown suite,
// empty ranges, numeric parameters at a pole of the suite's normalizations,
// assignments to parameters a degeneration suite needs symbolic).
void validate_config(const SuiteConfig& cfg);

// The parameter assignment the suite runs with: symbolic k, c with the
// configured numeric overrides applied.
ParamAssignment params_of(const SuiteConfig& cfg);

// Throwing variants of the parameter-name lookup and rational parsing used
// for --set arguments and report ingestion; both raise ConfigError on junk.
Param parse_param(const std::string& name);
Rat parse_rational(const std::string& text);

struct CheckRecord {
  std::string id;
  std::string lhs;
  std::string rhs;
  bool pass = false;
  std::string witness;  // empty exactly when the check passed

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct VerificationReport {
  int schema_version = kReportSchemaVersion;
  std::string suite;
  SuiteConfig config;
  std::vector<CheckRecord> checks;
  bool aggregate_pass = false;
  double wall_seconds = 0.0;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

// Runs the configured suite. Check construction and ordering are functions
// of the config alone; worker count only affects scheduling. A check that
// throws is recorded as failed with the exception text as witness, never
// silently dropped.
VerificationReport run_suite(const SuiteConfig& cfg);

enum class ReportFormat { Json, Text };
ReportFormat report_format(const std::string& name);  // ConfigError on junk

// JSON is schema-stable (schema_version above) and round-trips through
// parse_report; text has one PASS/FAIL line per check plus an aggregate
// line. The witness field is emitted only for failed checks.
std::string emit_report(const VerificationReport& r, ReportFormat format);
VerificationReport parse_report(const std::string& json_text);

// ---- operator-matrix cache -------------------------------------------------

// Sparse matrix of one operator column per basis monomial, entries as
// canonical rational-function text. Rows index result monomials in order of
// first appearance (column-major fill), so equal computations produce equal
// records.
struct OperatorMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::tuple<int, int, std::string>> entries;  // (row, col, text)

  friend bool operator==(const OperatorMatrix&, const OperatorMatrix&) = default;
};

// Matrix of L^S_mode out of the weight-`degree` basis slice of cfg's module.
// Columns follow enumerate_basis(spec, degree); rows cover every monomial the
// images touch.
OperatorMatrix sugawara_matrix(const SugawaraConfig& cfg, int mode, int degree);

// Cache key fingerprint: the module fingerprint extended with the PBW
// ordering convention tag, so a change of either invalidates stored entries.
std::string cache_fingerprint(const VacuumModuleSpec& spec);

// File-backed store keyed by (operator id, degree). Each entry remembers the
// fingerprint it was computed under; loading with a different fingerprint is
// CacheInvalidError (never silent reuse), loading an absent key is a miss.
// Reads may run concurrently; writes are serialized and persisted eagerly.
class OperatorMatrixCache {
 public:
  explicit OperatorMatrixCache(std::string path);

  std::optional<OperatorMatrix> load(const std::string& op_id, int degree,
                                     const std::string& fingerprint) const;
  void store(const std::string& op_id, int degree, const std::string& fingerprint,
             const OperatorMatrix& matrix);
  std::size_t size() const;

 private:
  struct Entry {
    std::string fingerprint;
    OperatorMatrix matrix;
  };

  void persist() const;  // caller holds the write lock

  std::string path_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::string, int>, Entry> entries_;
};

}  // namespace vacmod
