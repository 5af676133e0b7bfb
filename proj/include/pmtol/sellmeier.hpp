#pragma once

#include <string>
#include <vector>

namespace pmtol {

// Bulk dispersion n^2(lambda) = 1 + sum_i b_i lambda^2 / (lambda^2 - c_i),
// lambda in micrometres. Coefficient sets are loaded from a versioned data
// file; see data/sellmeier_cln.json for provenance.
struct SellmeierSet {
  std::vector<double> b;
  std::vector<double> c;  // um^2
  double lambda_min_m = 0.0;
  double lambda_max_m = 0.0;
  std::string label;
};

double n_bulk(const SellmeierSet& set, double lambda_m);

}  // namespace pmtol
