#include "twoclass/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "twoclass/error.hpp"
#include "twoclass/numeric.hpp"

namespace twoclass {

const char* to_string(Gender g) noexcept {
  return g == Gender::Man ? "MAN" : "WOMAN";
}

const char* to_string(Color c) noexcept {
  switch (c) {
    case Color::White: return "WHITE";
    case Color::Yellow: return "YELLOW";
    case Color::Black: return "BLACK";
    case Color::Indigenous: return "INDIGENOUS";
    case Color::Mixed: return "MIXED";
  }
  return "?";
}

const char* to_string(Selector s) noexcept {
  switch (s) {
    case Selector::All: return "ALL";
    case Selector::Man: return "MAN";
    case Selector::Woman: return "WOMAN";
    case Selector::WhiteYellow: return "WY";
    case Selector::BlackIndigenousMixed: return "BIM";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<long long> parse_integer(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool parse_bool(std::string_view key, std::string_view s) {
  const std::string v = upper(trim(s));
  if (v == "TRUE" || v == "1" || v == "YES") return true;
  if (v == "FALSE" || v == "0" || v == "NO") return false;
  throw Error(ErrorKind::Schema, "schema: " + std::string(key) + " expects true or false");
}

template <typename Enum>
std::map<std::string, Enum> parse_codes(std::string_view key, std::string_view value,
                                        const std::map<std::string, Enum>& names) {
  std::map<std::string, Enum> codes;
  for (std::string_view entry : split(value, ',')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    const std::size_t colon = entry.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::Schema, "schema: " + std::string(key) +
                                         " entry '" + std::string(entry) +
                                         "' must look like NAME:code");
    }
    const std::string name = upper(trim(entry.substr(0, colon)));
    const auto it = names.find(name);
    if (it == names.end()) {
      throw Error(ErrorKind::Schema,
                  "schema: " + std::string(key) + " has unknown category '" + name + "'");
    }
    for (std::string_view code : split(entry.substr(colon + 1), '|')) {
      code = trim(code);
      if (code.empty()) {
        throw Error(ErrorKind::Schema, "schema: empty code for " + name + " in " +
                                           std::string(key));
      }
      if (!codes.emplace(std::string(code), it->second).second) {
        throw Error(ErrorKind::Schema, "schema: code '" + std::string(code) +
                                           "' listed twice in " + std::string(key));
      }
    }
  }
  return codes;
}

// Splits one delimited line. Double quotes group a field; "" inside quotes is a
// literal quote. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_row(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !quoted && trim(field).empty()) {
      field.clear();
      quoted = true;
      in_quotes = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
      quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) return std::nullopt;
  fields.push_back(std::move(field));
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Schema Schema::parse(std::istream& in) {
  static const std::map<std::string, Gender> gender_names = {{"MAN", Gender::Man},
                                                             {"WOMAN", Gender::Woman}};
  static const std::map<std::string, Color> color_names = {
      {"WHITE", Color::White},           {"YELLOW", Color::Yellow}, {"BLACK", Color::Black},
      {"INDIGENOUS", Color::Indigenous}, {"MIXED", Color::Mixed}};

  Schema schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const std::size_t hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Schema,
                  "schema line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));

    if (key == "income_column") {
      schema.income_column = value;
    } else if (key == "gender_column") {
      schema.gender_column = value;
    } else if (key == "color_column") {
      schema.color_column = value;
    } else if (key == "age_column") {
      schema.age_column = value;
    } else if (key == "year_column") {
      schema.year_column = value;
    } else if (key == "weight_column") {
      schema.weight_column = value;
    } else if (key == "gender_values") {
      schema.gender_codes = parse_codes(key, value, gender_names);
    } else if (key == "color_values") {
      schema.color_codes = parse_codes(key, value, color_names);
    } else if (key == "delimiter") {
      const std::string v = upper(value);
      if (v == "TAB" || value == "\\t") {
        schema.delimiter = '\t';
      } else if (value.size() == 1 && value != "\"") {
        schema.delimiter = value.front();
      } else {
        throw Error(ErrorKind::Schema, "schema: delimiter must be a single character or 'tab'");
      }
    } else if (key == "year") {
      const auto y = parse_integer(value);
      if (!y) throw Error(ErrorKind::Schema, "schema: year must be an integer");
      schema.default_year = static_cast<int>(*y);
    } else if (key == "min_age") {
      const auto a = parse_integer(value);
      if (!a || *a < 0) throw Error(ErrorKind::Schema, "schema: min_age must be a non-negative integer");
      schema.min_age = static_cast<int>(*a);
    } else if (key == "min_age_exclusive") {
      schema.min_age_exclusive = parse_bool(key, value);
    } else {
      throw Error(ErrorKind::Schema, "schema: unknown key '" + key + "'");
    }
  }
  if (schema.income_column.empty()) {
    throw Error(ErrorKind::Schema, "schema: income_column is required");
  }
  if (!schema.gender_column.empty() && schema.gender_codes.empty()) {
    throw Error(ErrorKind::Schema, "schema: gender_column set but gender_values missing");
  }
  if (!schema.color_column.empty() && schema.color_codes.empty()) {
    throw Error(ErrorKind::Schema, "schema: color_column set but color_values missing");
  }
  return schema;
}

Schema Schema::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

Schema Schema::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open schema file '" + path + "'");
  return parse(in);
}

LoadResult load(std::istream& source, const Schema& schema) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(source, line)) {
    strip_cr(line);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto fields = split_row(line, schema.delimiter);
    if (!fields) throw Error(ErrorKind::Schema, "header row has an unterminated quote");
    header = std::move(*fields);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::Schema, "input has no header row");
  if (!header.empty() && header.front().starts_with("\xEF\xBB\xBF")) {
    header.front().erase(0, 3);
  }

  auto locate = [&](const std::string& logical, const std::string& column) -> std::optional<std::size_t> {
    if (column.empty()) return std::nullopt;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == column) return i;
    }
    throw Error(ErrorKind::Schema, "header lacks the " + logical + " column '" + column + "'");
  };
  const auto income_idx = locate("income", schema.income_column);
  const auto gender_idx = locate("gender", schema.gender_column);
  const auto color_idx = locate("color", schema.color_column);
  const auto age_idx = locate("age", schema.age_column);
  const auto year_idx = locate("year", schema.year_column);

  LoadResult result;
  std::size_t row = 0;
  while (std::getline(source, line)) {
    strip_cr(line);
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_row(line, schema.delimiter);
    if (!fields) {
      result.rejects.push_back({row, "unterminated quote"});
      continue;
    }
    if (fields->size() != header.size()) {
      result.rejects.push_back({row, "expected " + std::to_string(header.size()) +
                                         " fields, found " + std::to_string(fields->size())});
      continue;
    }
    const auto cell = [&](std::optional<std::size_t> idx) -> std::string_view {
      return idx ? trim((*fields)[*idx]) : std::string_view{};
    };

    PersonRecord record;
    record.year = schema.default_year;

    const std::string_view income_text = cell(income_idx);
    if (income_text.empty()) {
      ++result.missing_income;
    } else if (const auto v = parse_double(income_text)) {
      if (!std::isfinite(*v) || *v < 0.0) {
        result.rejects.push_back({row, "income must be finite and non-negative"});
        continue;
      }
      record.income = *v;
    } else {
      ++result.missing_income;
      ++result.unmapped_values;
    }

    if (const std::string_view age_text = cell(age_idx); !age_text.empty()) {
      if (const auto a = parse_integer(age_text)) {
        if (*a < 0) {
          result.rejects.push_back({row, "age must be non-negative"});
          continue;
        }
        record.age = static_cast<int>(*a);
      } else {
        ++result.unmapped_values;
      }
    }

    if (const std::string_view g = cell(gender_idx); !g.empty()) {
      if (const auto it = schema.gender_codes.find(std::string(g)); it != schema.gender_codes.end()) {
        record.gender = it->second;
      } else {
        ++result.unmapped_values;
      }
    }
    if (const std::string_view c = cell(color_idx); !c.empty()) {
      if (const auto it = schema.color_codes.find(std::string(c)); it != schema.color_codes.end()) {
        record.color = it->second;
      } else {
        ++result.unmapped_values;
      }
    }
    if (const std::string_view y = cell(year_idx); !y.empty()) {
      if (const auto v = parse_integer(y)) {
        record.year = static_cast<int>(*v);
      } else {
        ++result.unmapped_values;
      }
    }
    result.records.push_back(record);
  }
  return result;
}

LoadResult load_file(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open data file '" + path + "'");
  return load(in, schema);
}

void write_rejects(std::ostream& out, const std::vector<RejectedRow>& rejects) {
  out << "row,reason\n";
  for (const auto& r : rejects) {
    out << r.row << ",\"";
    for (char c : r.reason) {
      if (c == '"') out << '"';
      out << c;
    }
    out << "\"\n";
  }
}

Dataset Dataset::from_records(std::vector<PersonRecord> records, int year) {
  CompensatedSum total;
  for (const auto& r : records) {
    if (!r.income || !std::isfinite(*r.income) || !(*r.income > 0.0)) {
      throw Error(ErrorKind::Domain, "dataset records need a finite positive income");
    }
    total.add(*r.income);
  }
  return Dataset(std::move(records), total.value(), year);
}

Dataset Dataset::from_incomes(const std::vector<double>& incomes, int year) {
  std::vector<PersonRecord> records;
  records.reserve(incomes.size());
  for (double m : incomes) {
    PersonRecord r;
    r.income = m;
    r.year = year;
    records.push_back(r);
  }
  return from_records(std::move(records), year);
}

std::vector<double> Dataset::incomes() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(*r.income);
  return out;
}

CleanOptions CleanOptions::from_schema(const Schema& schema) {
  CleanOptions options;
  options.min_age = schema.min_age;
  options.min_age_exclusive = schema.min_age_exclusive;
  options.require_age = !schema.age_column.empty();
  return options;
}

CleanResult clean(const std::vector<PersonRecord>& records, const CleanOptions& options) {
  CleanReport report;
  report.initial = records.size();
  std::vector<PersonRecord> kept;
  kept.reserve(records.size());
  for (const auto& r : records) {
    if (r.age) {
      const bool old_enough =
          options.min_age_exclusive ? *r.age > options.min_age : *r.age >= options.min_age;
      if (!old_enough) {
        ++report.dropped_age;
        continue;
      }
    } else if (options.require_age) {
      ++report.dropped_missing_age;
      continue;
    }
    if (!r.income) {
      ++report.dropped_missing_income;
      continue;
    }
    if (!(*r.income > 0.0)) {
      ++report.dropped_nonpositive_income;
      continue;
    }
    kept.push_back(r);
  }
  report.retained = kept.size();
  if (kept.empty()) {
    throw Error(ErrorKind::EmptyDataset, "no records survive cleaning");
  }
  const int year = kept.front().year;
  return {Dataset::from_records(std::move(kept), year), report};
}

std::optional<Selector> parse_selector(std::string_view name) {
  const std::string v = upper(trim(name));
  if (v == "ALL") return Selector::All;
  if (v == "MAN" || v == "MEN") return Selector::Man;
  if (v == "WOMAN" || v == "WOMEN") return Selector::Woman;
  if (v == "WY") return Selector::WhiteYellow;
  if (v == "BIM") return Selector::BlackIndigenousMixed;
  return std::nullopt;
}

bool matches(Selector selector, const PersonRecord& record) noexcept {
  switch (selector) {
    case Selector::All:
      return true;
    case Selector::Man:
      return record.gender == Gender::Man;
    case Selector::Woman:
      return record.gender == Gender::Woman;
    case Selector::WhiteYellow:
      return record.color == Color::White || record.color == Color::Yellow;
    case Selector::BlackIndigenousMixed:
      return record.color == Color::Black || record.color == Color::Indigenous ||
             record.color == Color::Mixed;
  }
  return false;
}

bool has_selector_field(Selector selector, const PersonRecord& record) noexcept {
  switch (selector) {
    case Selector::All:
      return true;
    case Selector::Man:
    case Selector::Woman:
      return record.gender.has_value();
    case Selector::WhiteYellow:
    case Selector::BlackIndigenousMixed:
      return record.color.has_value();
  }
  return false;
}

Dataset subset(const Dataset& dataset, Selector selector) {
  if (selector == Selector::All) {
    if (dataset.empty()) throw Error(ErrorKind::EmptyDataset, "dataset is empty");
    return dataset;
  }
  std::vector<PersonRecord> kept;
  for (const auto& r : dataset.records()) {
    if (matches(selector, r)) kept.push_back(r);
  }
  if (kept.empty()) {
    throw Error(ErrorKind::EmptyDataset,
                std::string("no records match selector ") + to_string(selector));
  }
  return Dataset::from_records(std::move(kept), dataset.year());
}

}  // namespace twoclass
