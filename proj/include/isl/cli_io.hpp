#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isl/flow.hpp"
#include "isl/monodromy.hpp"

namespace isl {

// Accepts "1.5", "2i", "-0.3+0.2j", "1e-3-4.5e-1i", "i".
cplx parse_complex(const std::string& text);
// "re+imj" with round-trip precision.
std::string format_complex(cplx z);
std::string format_real(double x);
// Items separated by `sep` (whitespace trimmed).
std::vector<cplx> parse_complex_list(const std::string& text, char sep = ',');

// Flattened key/value document; nested sections become dotted keys.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  void set_list(const std::string& key, const std::vector<std::string>& values);
  // Entries of `other` override ours.
  void merge(const Config& other);

  // Looks up `key`, then `section.key` for each section in order.
  std::optional<std::string> find(const std::string& key, const std::vector<std::string>& sections = {}) const;
  std::optional<std::vector<std::string>> find_list(const std::string& key,
                                                    const std::vector<std::string>& sections = {}) const;
  bool has(const std::string& key, const std::vector<std::string>& sections = {}) const;

  cplx get_complex(const std::string& key, const std::vector<std::string>& sections = {}) const;
  cplx get_complex(const std::string& key, cplx fallback, const std::vector<std::string>& sections = {}) const;
  double get_double(const std::string& key, double fallback, const std::vector<std::string>& sections = {}) const;
  int get_int(const std::string& key, int fallback, const std::vector<std::string>& sections = {}) const;
  std::string get_string(const std::string& key, const std::string& fallback,
                         const std::vector<std::string>& sections = {}) const;
  // List value, or a scalar split on ',' (or ':' for paths).
  std::vector<cplx> get_complex_list(const std::string& key, const std::vector<std::string>& sections = {}) const;
  Vec4 get_n(const std::string& key, const std::vector<std::string>& sections = {}) const;

  const std::map<std::string, std::string>& scalars() const { return scalars_; }

 private:
  std::map<std::string, std::string> scalars_;
  std::map<std::string, std::vector<std::string>> lists_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

Metadata convention_metadata(const LoopConstants& lc = {});
Table trajectory_table(const Trajectory& traj);

// "# key: value" lines, then the header row, then the rows.
void write_csv(std::ostream& os, const Table& table, const Metadata& meta);
nlohmann::json table_to_json(const Table& table);
nlohmann::json metadata_to_json(const Metadata& meta);

enum class Format { Csv, Json };

struct Scenario {
  std::string kind;  // eval, flow, hitchin, monodromy, convert, collapse, verify
  Config params;
  double tol = 1e-12;
  Format format = Format::Csv;
  std::string out;   // empty: stdout
};

struct RunResult {
  nlohmann::json report;
  std::optional<Table> table;
  bool checks_passed = true;
};

// Runs the scenario without writing anything.
RunResult execute(const Scenario& sc);
// Runs and writes artifacts; returns the exit status (0, 2 validation, 3 numerical).
int run(const Scenario& sc, std::ostream& out, std::ostream& err);

int exit_status_for(const std::exception& e);
nlohmann::json error_record(const std::exception& e);

// Sets the log level from ISL_LOG (trace, debug, info, warn, error, off).
void init_logging();

}  // namespace isl
