#pragma once

#include <string>
#include <utility>
#include <vector>

namespace onel1 {

// Tabulated weak-l1 equivalence transition rho_T(delta): the asymptotic
// success boundary of basis pursuit used to center the Monte Carlo rho grids.
// Lookup is by linear interpolation; queries outside the tabulated range
// clamp to the end values.
class ReferenceCurve {
 public:
  // Points must have strictly increasing delta in (0,1] and rho in (0,1).
  explicit ReferenceCurve(std::vector<std::pair<double, double>> points);

  double rho_at(double delta) const;
  const std::vector<std::pair<double, double>>& points() const {
    return points_;
  }

 private:
  std::vector<std::pair<double, double>> points_;
};

// Parses a two-column CSV (delta,rho); '#' comment lines and a textual header
// row are skipped. Malformed rows or non-monotone delta raise errors.
ReferenceCurve load_reference_curve(const std::string& path);

// Compiled-in copy of the bundled fixture, for use when no data directory is
// available.
const ReferenceCurve& builtin_reference_curve();

}  // namespace onel1
