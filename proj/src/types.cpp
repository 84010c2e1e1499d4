#include "mmdpath/types.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace mmdpath::core {

namespace {

void check_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument(std::string("duplicate ") + what + ": " + id);
    }
  }
}

}  // namespace

void AbundanceTable::validate() const {
  if (static_cast<int>(taxa_ids.size()) != n_taxa()) {
    throw std::invalid_argument("taxa_ids length does not match column count");
  }
  if (static_cast<int>(sample_ids.size()) != n_samples()) {
    throw std::invalid_argument("sample_ids length does not match row count");
  }
  check_unique(taxa_ids, "taxon id");
  check_unique(sample_ids, "sample id");
  if ((values.array() < 0.0).any()) {
    throw std::invalid_argument("abundance table has negative entries");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("abundance table has non-finite entries");
  }
}

void DesignMatrix::validate() const {
  if (static_cast<int>(taxa_ids.size()) != n_taxa()) {
    throw std::invalid_argument("taxa_ids length does not match column count");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("design matrix has non-finite entries");
  }
}

void TargetDataset::validate() const {
  design.validate();
  if (outcome.size() != design.values.rows()) {
    throw std::invalid_argument("outcome length does not match design row count");
  }
  if (metabolite && metabolite->size() != design.values.rows()) {
    throw std::invalid_argument("metabolite length does not match design row count");
  }
}

void ExternalDataset::validate() const {
  design.validate();
  if (metabolite.size() != design.values.rows()) {
    throw std::invalid_argument("metabolite length does not match design row count");
  }
}

}  // namespace mmdpath::core
