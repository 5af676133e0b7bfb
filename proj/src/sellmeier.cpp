#include "pmtol/sellmeier.hpp"

#include <cmath>

#include "pmtol/errors.hpp"
#include "pmtol/units.hpp"

namespace pmtol {

double n_bulk(const SellmeierSet& set, double lambda_m) {
  const double l = to_um(lambda_m);
  const double l2 = l * l;
  double n2 = 1.0;
  for (std::size_t i = 0; i < set.b.size(); ++i) {
    n2 += set.b[i] * l2 / (l2 - set.c[i]);
  }
  if (!(n2 > 0.0)) {
    fail(errc::out_of_range, "Sellmeier evaluation outside physical range at " +
                                 std::to_string(l) + " um (" + set.label + ")");
  }
  return std::sqrt(n2);
}

}  // namespace pmtol
