#include "onel1/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace onel1 {

namespace {

// Skips whitespace and '#' comments (which run to end of line) between
// header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (c != EOF && std::isspace(static_cast<unsigned char>(c))) {
      in.get();
    } else {
      return;
    }
  }
}

long read_header_int(std::istream& in, const char* what) {
  skip_separators(in);
  long value = 0;
  if (!(in >> value)) {
    throw std::runtime_error(std::string("PGM parse error: missing ") + what);
  }
  return value;
}

}  // namespace

Eigen::MatrixXd read_pgm(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || (magic != "P5" && magic != "P2")) {
    throw std::runtime_error("PGM parse error: expected magic P5 or P2");
  }
  const long width = read_header_int(in, "width");
  const long height = read_header_int(in, "height");
  const long maxval = read_header_int(in, "maxval");
  if (width < 1 || height < 1) {
    throw std::runtime_error("PGM parse error: bad image extents");
  }
  if (maxval < 1 || maxval > 255) {
    throw std::runtime_error(
        "PGM parse error: only 8-bit images (maxval <= 255) are supported");
  }

  Eigen::MatrixXd image(height, width);
  if (magic == "P5") {
    // Exactly one whitespace byte separates the header from the raster.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(static_cast<unsigned char>(sep))) {
      throw std::runtime_error("PGM parse error: bad raster separator");
    }
    std::vector<unsigned char> raster(static_cast<std::size_t>(width) *
                                      static_cast<std::size_t>(height));
    in.read(reinterpret_cast<char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
    if (in.gcount() != static_cast<std::streamsize>(raster.size())) {
      throw std::runtime_error("PGM parse error: truncated raster");
    }
    for (long r = 0; r < height; ++r) {
      for (long c = 0; c < width; ++c) {
        const unsigned char v = raster[static_cast<std::size_t>(r) * width + c];
        if (v > maxval) {
          throw std::runtime_error("PGM parse error: pixel exceeds maxval");
        }
        image(r, c) = static_cast<double>(v);
      }
    }
  } else {
    for (long r = 0; r < height; ++r) {
      for (long c = 0; c < width; ++c) {
        const long v = read_header_int(in, "pixel");
        if (v < 0 || v > maxval) {
          throw std::runtime_error("PGM parse error: pixel out of range");
        }
        image(r, c) = static_cast<double>(v);
      }
    }
  }
  return image;
}

Eigen::MatrixXd read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "' for reading");
  }
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const Eigen::MatrixXd& image) {
  if (image.rows() < 1 || image.cols() < 1) {
    throw std::invalid_argument("write_pgm: empty image");
  }
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  std::vector<unsigned char> raster(static_cast<std::size_t>(image.size()));
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image(r, c), 0.0, 255.0);
      raster[static_cast<std::size_t>(r) * image.cols() + c] =
          static_cast<unsigned char>(std::lround(v));
    }
  }
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
}

void write_pgm(const std::string& path, const Eigen::MatrixXd& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  write_pgm(out, image);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace onel1
