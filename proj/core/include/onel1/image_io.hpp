#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>

namespace onel1 {

// Reads an 8-bit grayscale PGM image (binary "P5" or ASCII "P2", maxval
// <= 255) into a matrix of doubles in [0, 255]; entry (r, c) is the pixel in
// raster row r, column c. '#' comments between header tokens are honored.
Eigen::MatrixXd read_pgm(std::istream& in);
Eigen::MatrixXd read_pgm(const std::string& path);

// Writes binary "P5" with maxval 255. Values are clamped to [0, 255] and
// rounded to the nearest integer.
void write_pgm(std::ostream& out, const Eigen::MatrixXd& image);
void write_pgm(const std::string& path, const Eigen::MatrixXd& image);

}  // namespace onel1
