#include "mortar/io.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "mortar/error.hpp"

namespace mortar {

void write_coordinate(const std::string& path, const CsrMatrix& matrix) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw IoError("cannot write " + path);
  std::fprintf(f, "%ld %ld %ld\n", static_cast<long>(matrix.rows()), static_cast<long>(matrix.cols()),
               static_cast<long>(matrix.nonZeros()));
  for (Eigen::Index r = 0; r < matrix.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(matrix, r); it; ++it)
      std::fprintf(f, "%ld %ld %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()), it.value());
  if (std::fclose(f) != 0) throw IoError("error while writing " + path);
}

CsrMatrix read_coordinate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  long rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) throw IoError("bad header in " + path);
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v) || i < 0 || i >= rows || j < 0 || j >= cols) throw IoError("bad entry in " + path);
    t.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
  }
  CsrMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace mortar
