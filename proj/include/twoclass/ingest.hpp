#ifndef TWOCLASS_INGEST_HPP
#define TWOCLASS_INGEST_HPP

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twoclass {

enum class Gender { Man, Woman };
enum class Color { White, Yellow, Black, Indigenous, Mixed };

const char* to_string(Gender g) noexcept;
const char* to_string(Color c) noexcept;

struct PersonRecord {
  std::optional<double> income;  // monthly, currency units
  std::optional<Gender> gender;
  std::optional<Color> color;
  std::optional<int> age;  // years
  int year = 0;
};

/// Column mapping for delimited microdata.
///
/// Text form, one `key = value` per line, `#` starts a comment:
///
///     income_column = V4720
///     gender_column = V0302
///     color_column  = V0404
///     age_column    = V8005
///     gender_values = MAN:2, WOMAN:4
///     color_values  = WHITE:2, YELLOW:6, BLACK:4, INDIGENOUS:0, MIXED:8
///
/// Several codes may map to one category with `|` (`MIXED:8|9`). Optional
/// keys: delimiter (default `,`, `tab` accepted), year_column, year,
/// weight_column (read but unused), min_age (default 10) and
/// min_age_exclusive (default true, meaning age > min_age).
///
/// income_column is mandatory. The other column keys may be left out, in
/// which case the corresponding field is missing on every record.
struct Schema {
  char delimiter = ',';
  std::string income_column;
  std::string gender_column;
  std::string color_column;
  std::string age_column;
  std::string year_column;
  std::string weight_column;
  std::map<std::string, Gender> gender_codes;
  std::map<std::string, Color> color_codes;
  int default_year = 0;
  int min_age = 10;
  bool min_age_exclusive = true;

  static Schema parse(std::istream& in);
  static Schema parse(std::string_view text);
  static Schema load_file(const std::string& path);
};

struct RejectedRow {
  std::size_t row = 0;  // 1-based data row number, header excluded
  std::string reason;
};

struct LoadResult {
  std::vector<PersonRecord> records;
  std::vector<RejectedRow> rejects;
  std::size_t missing_income = 0;
  std::size_t unmapped_values = 0;  // non-empty cells that did not decode
};

// Reads a header row then one record per data row. Lines starting with `#`
// before the header are skipped.
LoadResult load(std::istream& source, const Schema& schema);
LoadResult load_file(const std::string& path, const Schema& schema);

void write_rejects(std::ostream& out, const std::vector<RejectedRow>& rejects);

/// A cleaned, immutable collection of records with its conservation
/// summaries: one unit of population per record and the compensated sum of
/// their incomes.
class Dataset {
 public:
  // Every record must carry a finite positive income.
  static Dataset from_records(std::vector<PersonRecord> records, int year);
  static Dataset from_incomes(const std::vector<double>& incomes, int year = 0);

  const std::vector<PersonRecord>& records() const noexcept { return records_; }
  std::size_t population_count() const noexcept { return records_.size(); }
  double total_income() const noexcept { return total_income_; }
  int year() const noexcept { return year_; }
  bool empty() const noexcept { return records_.empty(); }

  std::vector<double> incomes() const;

 private:
  Dataset(std::vector<PersonRecord> records, double total_income, int year)
      : records_(std::move(records)), total_income_(total_income), year_(year) {}

  std::vector<PersonRecord> records_;
  double total_income_ = 0.0;
  int year_ = 0;
};

struct CleanOptions {
  int min_age = 10;
  bool min_age_exclusive = true;
  // When false, records without an age pass the age rule.
  bool require_age = true;

  static CleanOptions from_schema(const Schema& schema);
};

struct CleanReport {
  std::size_t initial = 0;
  std::size_t retained = 0;
  std::size_t dropped_age = 0;
  std::size_t dropped_missing_age = 0;
  std::size_t dropped_missing_income = 0;
  std::size_t dropped_nonpositive_income = 0;
};

struct CleanResult {
  Dataset dataset;
  CleanReport report;
};

// Keeps records older than the age threshold with a positive income. Records
// with missing gender or color are kept; subset() drops them per dichotomy.
// Throws EmptyDataset when nothing survives.
CleanResult clean(const std::vector<PersonRecord>& records, const CleanOptions& options = {});

enum class Selector { All, Man, Woman, WhiteYellow, BlackIndigenousMixed };

const char* to_string(Selector s) noexcept;
std::optional<Selector> parse_selector(std::string_view name);

inline constexpr Selector kAllSelectors[] = {Selector::All, Selector::Man, Selector::Woman,
                                             Selector::WhiteYellow,
                                             Selector::BlackIndigenousMixed};

bool matches(Selector selector, const PersonRecord& record) noexcept;

// Whether the record carries the field the selector's dichotomy is built on.
bool has_selector_field(Selector selector, const PersonRecord& record) noexcept;

// Throws EmptyDataset when no record matches.
Dataset subset(const Dataset& dataset, Selector selector);

}  // namespace twoclass

#endif  // TWOCLASS_INGEST_HPP
