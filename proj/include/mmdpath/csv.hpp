#pragma once

#include <string>
#include <vector>

#include "mmdpath/types.hpp"

namespace mmdpath::csv {

/// Labeled numeric matrix as read from disk: header row names the value
/// columns, first column holds sample ids. Used for abundance tables, design
/// matrices and metabolite panels alike.
struct LabeledTable {
  std::vector<std::string> column_ids;
  std::vector<std::string> sample_ids;
  core::Matrix values;
};

/// Parses `sample_id,<col1>,<col2>,...` with one row per sample. Strict:
/// malformed cells, empty cells, ragged rows and duplicate ids abort with a
/// line-numbered error.
LabeledTable read_labeled_table(const std::string& path);

core::AbundanceTable read_abundance_csv(const std::string& path);
core::DesignMatrix read_design_csv(const std::string& path, std::vector<std::string>* sample_ids_out = nullptr);

/// Parses `sample_id,value` and joins against `sample_ids`: the result is in
/// the order of `sample_ids`, and any id missing on either side is an error.
core::Vector read_value_csv(const std::string& path, const std::vector<std::string>& sample_ids);

/// Same join semantics for a multi-column panel (columns = metabolites).
LabeledTable read_value_matrix_csv(const std::string& path, const std::vector<std::string>& sample_ids);

/// Writes `sample_id,<taxa...>` with values formatted at 17 significant
/// digits so reruns are byte-identical.
void write_design_csv(const std::string& path, const core::DesignMatrix& design,
                      const std::vector<std::string>& sample_ids);

/// printf %.17g formatting used for every numeric cell we emit.
std::string format_double(double x);

}  // namespace mmdpath::csv
