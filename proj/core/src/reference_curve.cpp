#include "onel1/reference_curve.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace onel1 {

namespace {

void validate_points(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("ReferenceCurve: need at least two points");
  }
  double prev_delta = 0.0;
  for (const auto& [delta, rho] : points) {
    if (delta <= prev_delta) {
      throw std::invalid_argument(
          "ReferenceCurve: delta values must be strictly increasing");
    }
    if (delta > 1.0 || rho <= 0.0 || rho >= 1.0) {
      throw std::invalid_argument(
          "ReferenceCurve: points must satisfy 0 < delta <= 1, 0 < rho < 1");
    }
    prev_delta = delta;
  }
}

}  // namespace

ReferenceCurve::ReferenceCurve(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  validate_points(points_);
}

double ReferenceCurve::rho_at(double delta) const {
  if (delta <= points_.front().first) return points_.front().second;
  if (delta >= points_.back().first) return points_.back().second;
  // Find the first tabulated point at or beyond delta.
  std::size_t hi = 1;
  while (points_[hi].first < delta) ++hi;
  const auto& [d1, r1] = points_[hi - 1];
  const auto& [d2, r2] = points_[hi];
  if (delta == d2) return r2;
  const double weight = (delta - d1) / (d2 - d1);
  return r1 + weight * (r2 - r1);
}

ReferenceCurve load_reference_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_reference_curve: cannot open " + path);
  }
  std::vector<std::pair<double, double>> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    // Tolerate a single textual header row ("delta,rho").
    if (!std::isdigit(static_cast<unsigned char>(line[start])) &&
        line[start] != '.' && line[start] != '-') {
      if (points.empty()) continue;
      throw std::runtime_error("load_reference_curve: malformed line " +
                               std::to_string(line_no) + " in " + path);
    }
    std::istringstream row(line.substr(start));
    double delta = 0.0, rho = 0.0;
    char comma = '\0';
    if (!(row >> delta >> comma >> rho) || comma != ',') {
      throw std::runtime_error("load_reference_curve: malformed line " +
                               std::to_string(line_no) + " in " + path);
    }
    points.emplace_back(delta, rho);
  }
  try {
    return ReferenceCurve(std::move(points));
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error("load_reference_curve: " + path + ": " +
                             err.what());
  }
}

const ReferenceCurve& builtin_reference_curve() {
  // Copy of data/donoho_tanner_weak_l1.csv; a unit test keeps them in sync.
  static const ReferenceCurve curve({
      {0.01, 0.106878}, {0.02, 0.123403}, {0.03, 0.135512},
      {0.04, 0.145553}, {0.05, 0.154361}, {0.06, 0.162335},
      {0.07, 0.169706}, {0.08, 0.176619}, {0.09, 0.183170},
      {0.10, 0.189429}, {0.11, 0.195448}, {0.12, 0.201266},
      {0.13, 0.206914}, {0.14, 0.212416}, {0.15, 0.217792},
      {0.16, 0.223061}, {0.17, 0.228234}, {0.18, 0.233326},
      {0.19, 0.238345}, {0.20, 0.243301}, {0.21, 0.248202},
      {0.22, 0.253055}, {0.23, 0.257866}, {0.24, 0.262640},
      {0.25, 0.267384}, {0.26, 0.272100}, {0.27, 0.276795},
      {0.28, 0.281472}, {0.29, 0.286134}, {0.30, 0.290784},
      {0.31, 0.295427}, {0.32, 0.300065}, {0.33, 0.304702},
      {0.34, 0.309339}, {0.35, 0.313980}, {0.36, 0.318626},
      {0.37, 0.323282}, {0.38, 0.327949}, {0.39, 0.332630},
      {0.40, 0.337326}, {0.41, 0.342041}, {0.42, 0.346776},
      {0.43, 0.351535}, {0.44, 0.356319}, {0.45, 0.361131},
      {0.46, 0.365972}, {0.47, 0.370847}, {0.48, 0.375756},
      {0.49, 0.380703}, {0.50, 0.385690}, {0.51, 0.390719},
      {0.52, 0.395794}, {0.53, 0.400917}, {0.54, 0.406092},
      {0.55, 0.411320}, {0.56, 0.416606}, {0.57, 0.421952},
      {0.58, 0.427363}, {0.59, 0.432841}, {0.60, 0.438391},
      {0.61, 0.444016}, {0.62, 0.449720}, {0.63, 0.455510},
      {0.64, 0.461388}, {0.65, 0.467360}, {0.66, 0.473433},
      {0.67, 0.479610}, {0.68, 0.485900}, {0.69, 0.492308},
      {0.70, 0.498843}, {0.71, 0.505511}, {0.72, 0.512322},
      {0.73, 0.519286}, {0.74, 0.526412}, {0.75, 0.533712},
      {0.76, 0.541198}, {0.77, 0.548885}, {0.78, 0.556788},
      {0.79, 0.564924}, {0.80, 0.573313}, {0.81, 0.581977},
      {0.82, 0.590941}, {0.83, 0.600234}, {0.84, 0.609888},
      {0.85, 0.619943}, {0.86, 0.630444}, {0.87, 0.641445},
      {0.88, 0.653010}, {0.89, 0.665219}, {0.90, 0.678169},
      {0.91, 0.691985}, {0.92, 0.706827}, {0.93, 0.722909},
      {0.94, 0.740525}, {0.95, 0.760105}, {0.96, 0.782308},
      {0.97, 0.808257}, {0.98, 0.840150}, {0.99, 0.883715},
  });
  return curve;
}

}  // namespace onel1
