#include "pollerr/table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pollerr/errors.hpp"

namespace pollerr {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(errkind::parse,
         "line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  }
}

void format_number(std::ostream& os, double v) {
  // Round-trippable decimal output.
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    // Prefer the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      if (std::strtod(shorter, nullptr) == v) {
        os << shorter;
        return;
      }
    }
  }
  os << buf;
}

}  // namespace

void ExperimentTable::append_row(int order, std::vector<double> point,
                                 double value) {
  if (point.size() != factor_names.size())
    fail(errkind::invalid_argument, "row arity does not match factor count");
  std_order.push_back(order);
  coded.push_back(std::move(point));
  response.push_back(value);
}

void ExperimentTable::validate() const {
  if (std_order.size() != rows() || coded.size() != rows())
    fail(errkind::validation, "table columns differ in length");
  for (const auto& row : coded)
    if (row.size() != k())
      fail(errkind::validation, "table row arity does not match factor count");
  for (double v : response)
    if (!std::isfinite(v))
      fail(errkind::validation, "table response is not finite");
}

ExperimentTable table_from_csv(std::string_view text) {
  ExperimentTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      if (fields.size() < 3 || fields.front() != "std_order" ||
          fields.back() != "mape")
        fail(errkind::parse,
             "expected header 'std_order,<factor names...>,mape'");
      table.factor_names.assign(fields.begin() + 1, fields.end() - 1);
      have_header = true;
      continue;
    }
    if (fields.size() != table.k() + 2)
      fail(errkind::parse, "line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.k() + 2) + " fields, got " +
                               std::to_string(fields.size()));
    int order = static_cast<int>(parse_number(fields[0], line_no));
    std::vector<double> point(table.k());
    for (std::size_t j = 0; j < table.k(); ++j)
      point[j] = parse_number(fields[j + 1], line_no);
    table.append_row(order, std::move(point),
                     parse_number(fields.back(), line_no));
  }
  if (!have_header) fail(errkind::parse, "empty CSV input");
  table.validate();
  return table;
}

ExperimentTable read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errkind::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return table_from_csv(buf.str());
}

std::string table_to_csv(const ExperimentTable& table) {
  std::ostringstream os;
  os << "std_order";
  for (const auto& n : table.factor_names) os << ',' << n;
  os << ",mape\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    os << table.std_order[i];
    for (double c : table.coded[i]) {
      os << ',';
      format_number(os, c);
    }
    os << ',';
    format_number(os, table.response[i]);
    os << '\n';
  }
  return os.str();
}

ExperimentTable concat_tables(const std::vector<ExperimentTable>& tables) {
  if (tables.empty()) fail(errkind::invalid_argument, "no tables to combine");
  ExperimentTable out = tables.front();
  for (std::size_t i = 1; i < tables.size(); ++i) {
    if (tables[i].factor_names != out.factor_names)
      fail(errkind::invalid_argument,
           "tables disagree on factor names; cannot combine");
    for (std::size_t r = 0; r < tables[i].rows(); ++r)
      out.append_row(tables[i].std_order[r], tables[i].coded[r],
                     tables[i].response[r]);
  }
  out.validate();
  return out;
}

}  // namespace pollerr
