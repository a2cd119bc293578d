#include "udn/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace udn {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  // Shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("table: bad numeric field '" + s + "'");
  return v;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_escape(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

void ResultTable::add_column(std::string name, std::vector<double> values) {
  if (!columns_.empty() && values.size() != columns_.front().size())
    throw std::invalid_argument("ResultTable: column '" + name + "' length mismatch");
  for (const auto& existing : names_)
    if (existing == name)
      throw std::invalid_argument("ResultTable: duplicate column '" + name + "'");
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_)
    if (k == key) {
      v = value;
      return;
    }
  meta_.emplace_back(key, value);
}

void ResultTable::set_meta(const std::string& key, double value) {
  set_meta(key, format_double(value));
}

std::size_t ResultTable::n_rows() const {
  return columns_.empty() ? 0 : columns_.front().size();
}

const std::vector<double>& ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return columns_[i];
  throw std::out_of_range("ResultTable: no column '" + name + "'");
}

const std::string* ResultTable::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta_)
    if (k == key) return &v;
  return nullptr;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  // Metadata rides in comment lines so the payload stays a plain CSV body.
  for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << "\n";
  for (std::size_t c = 0; c < names_.size(); ++c)
    out << (c ? "," : "") << csv_escape(names_[c]);
  out << "\n";
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      out << (c ? "," : "") << format_double(columns_[c][r]);
    out << "\n";
  }
  return out.str();
}

ResultTable ResultTable::from_csv(const std::string& text) {
  ResultTable table;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos)
        table.set_meta(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    const auto fields = split_csv_line(line);
    if (header.empty()) {
      header = fields;
      cols.resize(fields.size());
      continue;
    }
    if (fields.size() != header.size())
      throw std::invalid_argument("table: ragged CSV row");
    for (std::size_t c = 0; c < fields.size(); ++c) cols[c].push_back(parse_double(fields[c]));
  }
  for (std::size_t c = 0; c < header.size(); ++c)
    table.add_column(header[c], std::move(cols[c]));
  return table;
}

std::string ResultTable::to_json() const {
  nlohmann::ordered_json root;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta_) meta[k] = v;
  root["metadata"] = std::move(meta);
  root["columns"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < names_.size(); ++c) {
    nlohmann::ordered_json col;
    col["name"] = names_[c];
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (double v : columns_[c]) {
      if (std::isfinite(v))
        values.push_back(v);
      else
        values.push_back(format_double(v));  // JSON has no inf/nan literals
    }
    col["values"] = std::move(values);
    root["columns"].push_back(std::move(col));
  }
  return root.dump(2) + "\n";
}

ResultTable ResultTable::from_json(const std::string& text) {
  const auto root = nlohmann::json::parse(text);
  ResultTable table;
  for (const auto& [k, v] : root.at("metadata").items())
    table.set_meta(k, v.get<std::string>());
  for (const auto& col : root.at("columns")) {
    std::vector<double> values;
    for (const auto& v : col.at("values")) {
      if (v.is_string())
        values.push_back(parse_double(v.get<std::string>()));
      else
        values.push_back(v.get<double>());
    }
    table.add_column(col.at("name").get<std::string>(), std::move(values));
  }
  return table;
}

}  // namespace udn
