#pragma once

#include <string>
#include <utility>
#include <vector>

namespace udn {

inline constexpr const char* kVersion = "0.1.0";

/// Column-oriented numeric table with ordered string metadata. Serialization
/// is deterministic: the same table always produces the same bytes, and both
/// emitted formats parse back to the same values.
class ResultTable {
 public:
  void add_column(std::string name, std::vector<double> values);
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);

  std::size_t n_rows() const;
  std::size_t n_cols() const { return names_.size(); }
  const std::vector<std::string>& column_names() const { return names_; }
  const std::vector<double>& column(const std::string& name) const;
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }
  const std::string* find_meta(const std::string& key) const;

  std::string to_csv() const;   // header row, '.' decimal separator, inf/nan as text
  std::string to_json() const;  // {"metadata": {...}, "columns": [{name, values}]}

  static ResultTable from_csv(const std::string& text);
  static ResultTable from_json(const std::string& text);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

/// Shortest decimal form that parses back to the identical double;
/// nonfinite values map to "inf" / "-inf" / "nan".
std::string format_double(double v);

}  // namespace udn
