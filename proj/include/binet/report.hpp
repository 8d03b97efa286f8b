#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace binet {

// One measured quantity of one cell (or cell group).  `residual` is always
// dimensionless; `threshold` is the tolerance it was compared against.
struct CheckRecord {
  std::string cell;
  std::string quantity;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
  bool is_floor = false;  // pass means residual >= threshold instead of <=
};

struct Report {
  std::vector<CheckRecord> records;
  std::vector<std::string> warnings;
  bool pass = true;

  void add(const std::string& cell, const std::string& quantity,
           double residual, double threshold) {
    bool ok = residual <= threshold;
    records.push_back({cell, quantity, residual, threshold, ok, false});
    pass = pass && ok;
  }

  // Quantities that must stay above a floor (genericity measures).
  void add_floor(const std::string& cell, const std::string& quantity,
                 double value, double floor) {
    bool ok = value >= floor;
    records.push_back({cell, quantity, value, floor, ok, true});
    pass = pass && ok;
  }

  void warn(const std::string& message) { warnings.push_back(message); }

  void merge(const Report& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
    warnings.insert(warnings.end(), other.warnings.begin(),
                    other.warnings.end());
    pass = pass && other.pass;
  }

  // Worst ceiling-type residual; floor-type records (genericity measures)
  // are not comparable and excluded.
  double max_residual() const {
    double m = 0.0;
    for (const auto& r : records)
      if (!r.is_floor) m = std::max(m, r.residual);
    return m;
  }

  // Worst offender among failing records; empty if the report passes.
  const CheckRecord* first_failure() const {
    const CheckRecord* worst = nullptr;
    for (const auto& r : records) {
      if (r.pass) continue;
      if (!worst || r.residual / r.threshold > worst->residual / worst->threshold)
        worst = &r;
    }
    return worst;
  }
};

}  // namespace binet
