#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pollerr {

// Rows of (standard-order label, coded factor vector, measured response).
// CSV layout: header "std_order,<factor names...>,mape"; the baseline row
// uses std_order 0.
struct ExperimentTable {
  std::vector<std::string> factor_names;
  std::vector<int> std_order;
  std::vector<std::vector<double>> coded;
  std::vector<double> response;

  std::size_t rows() const { return response.size(); }
  std::size_t k() const { return factor_names.size(); }

  void append_row(int order, std::vector<double> point, double value);
  // Throws when arities disagree or a response is not finite.
  void validate() const;
};

ExperimentTable table_from_csv(std::string_view text);
ExperimentTable read_table_csv(const std::filesystem::path& path);
std::string table_to_csv(const ExperimentTable& table);

// Row-wise concatenation; factor names must agree.
ExperimentTable concat_tables(const std::vector<ExperimentTable>& tables);

}  // namespace pollerr
