#pragma once
// Dataset container, CSV I/O, min-max feature scaling, synthetic generators.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace drbmclust {

struct Dataset {
  Matrix x;                 // n_samples x n_features
  std::vector<int> labels;  // empty when unlabeled
  bool has_labels = false;
};

struct NormalizationParams {
  std::vector<double> min;
  std::vector<double> max;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

// Loads a numeric CSV. label_column < 0 means no label column; otherwise the
// given column is parsed as integer class labels. Empty feature cells are
// imputed as 0.0. Ragged rows and non-integer labels are errors.
inline Dataset load_csv(const std::string& path, bool has_header, int label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);

  Dataset ds;
  std::string line;
  size_t expect_cols = 0;
  bool first = true;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  if (has_header && std::getline(in, line)) {
    expect_cols = detail::split_csv_line(line).size();
    first = false;
  }

  size_t line_no = has_header ? 1 : 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells = detail::split_csv_line(line);
    if (first) {
      expect_cols = cells.size();
      first = false;
    } else if (cells.size() != expect_cols) {
      throw std::runtime_error("load_csv: ragged row at line " + std::to_string(line_no));
    }
    std::vector<double> feats;
    feats.reserve(cells.size());
    for (size_t j = 0; j < cells.size(); ++j) {
      std::string cell = detail::trim(cells[j]);
      if (label_column >= 0 && j == static_cast<size_t>(label_column)) {
        size_t pos = 0;
        int lab = 0;
        try {
          lab = std::stoi(cell, &pos);
        } catch (...) {
          throw std::runtime_error("load_csv: non-integer label at line " + std::to_string(line_no));
        }
        if (pos != cell.size())
          throw std::runtime_error("load_csv: non-integer label at line " + std::to_string(line_no));
        labels.push_back(lab);
      } else if (cell.empty()) {
        feats.push_back(0.0);  // missing value
      } else {
        size_t pos = 0;
        double v = 0.0;
        try {
          v = std::stod(cell, &pos);
        } catch (...) {
          throw std::runtime_error("load_csv: non-numeric cell at line " + std::to_string(line_no));
        }
        if (pos != cell.size())
          throw std::runtime_error("load_csv: non-numeric cell at line " + std::to_string(line_no));
        feats.push_back(v);
      }
    }
    rows.push_back(std::move(feats));
  }
  if (rows.empty()) throw std::runtime_error("load_csv: no data rows in " + path);

  size_t d = rows[0].size();
  ds.x = Matrix(rows.size(), d);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < d; ++j) ds.x(i, j) = rows[i][j];
  if (label_column >= 0) {
    ds.labels = std::move(labels);
    ds.has_labels = true;
  }
  return ds;
}

// Writes features (and, when present, a final "label" column).
inline void save_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open " + path);
  out.precision(17);
  for (size_t j = 0; j < ds.x.cols; ++j) out << "f" << j << (j + 1 < ds.x.cols ? "," : "");
  if (ds.has_labels) out << ",label";
  out << "\n";
  for (size_t i = 0; i < ds.x.rows; ++i) {
    for (size_t j = 0; j < ds.x.cols; ++j) out << ds.x(i, j) << (j + 1 < ds.x.cols ? "," : "");
    if (ds.has_labels) out << "," << ds.labels[i];
    out << "\n";
  }
}

// Per-feature affine map onto [0.1, 0.9]; constant features map to 0.5.
inline std::pair<Dataset, NormalizationParams> normalize_minmax(const Dataset& ds) {
  NormalizationParams p;
  size_t n = ds.x.rows, d = ds.x.cols;
  p.min.assign(d, 0.0);
  p.max.assign(d, 0.0);
  for (size_t j = 0; j < d; ++j) {
    double lo = ds.x(0, j), hi = ds.x(0, j);
    for (size_t i = 1; i < n; ++i) {
      double v = ds.x(i, j);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    p.min[j] = lo;
    p.max[j] = hi;
  }
  Dataset out = ds;
  for (size_t j = 0; j < d; ++j) {
    double range = p.max[j] - p.min[j];
    for (size_t i = 0; i < n; ++i) {
      out.x(i, j) = range > 0.0 ? (0.9 - 0.1) / range * (ds.x(i, j) - p.min[j]) + 0.1 : 0.5;
    }
  }
  return {out, p};
}

// Two interleaved half-circles with isotropic Gaussian jitter.
inline Dataset gen_moons(size_t n_per_class, double noise, uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.x = Matrix(2 * n_per_class, 2);
  ds.labels.resize(2 * n_per_class);
  ds.has_labels = true;
  const double pi = 3.14159265358979323846;
  for (size_t i = 0; i < n_per_class; ++i) {
    double t = n_per_class > 1 ? pi * static_cast<double>(i) / static_cast<double>(n_per_class - 1) : 0.0;
    ds.x(i, 0) = std::cos(t);
    ds.x(i, 1) = std::sin(t);
    ds.labels[i] = 0;
    ds.x(n_per_class + i, 0) = 1.0 - std::cos(t);
    ds.x(n_per_class + i, 1) = 0.5 - std::sin(t);
    ds.labels[n_per_class + i] = 1;
  }
  for (size_t i = 0; i < ds.x.rows; ++i)
    for (size_t j = 0; j < 2; ++j) ds.x(i, j) += rng.normal(0.0, noise);
  return ds;
}

// Compact elliptical blob with a crescent arcing over it.
inline Dataset gen_flame(size_t n_per_class, uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.x = Matrix(2 * n_per_class, 2);
  ds.labels.resize(2 * n_per_class);
  ds.has_labels = true;
  const double pi = 3.14159265358979323846;
  for (size_t i = 0; i < n_per_class; ++i) {
    ds.x(i, 0) = rng.normal() * 0.45;
    ds.x(i, 1) = rng.normal() * 0.35;
    ds.labels[i] = 0;
  }
  for (size_t i = 0; i < n_per_class; ++i) {
    double t = n_per_class > 1
                   ? 0.15 * pi + (0.85 - 0.15) * pi * static_cast<double>(i) / static_cast<double>(n_per_class - 1)
                   : 0.5 * pi;
    ds.x(n_per_class + i, 0) = 1.6 * std::cos(t) + rng.normal(0.0, 0.10);
    ds.x(n_per_class + i, 1) = 1.1 * std::sin(t) - 0.15 + rng.normal(0.0, 0.10);
    ds.labels[n_per_class + i] = 1;
  }
  return ds;
}

// Isotropic Gaussian blobs around the given centers (test helper).
inline Dataset gen_blobs(const std::vector<std::vector<double>>& centers, size_t n_per_class,
                         double sigma, uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  size_t d = centers.empty() ? 0 : centers[0].size();
  ds.x = Matrix(centers.size() * n_per_class, d);
  ds.labels.resize(ds.x.rows);
  ds.has_labels = true;
  size_t r = 0;
  for (size_t c = 0; c < centers.size(); ++c) {
    for (size_t i = 0; i < n_per_class; ++i, ++r) {
      for (size_t j = 0; j < d; ++j) ds.x(r, j) = centers[c][j] + rng.normal(0.0, sigma);
      ds.labels[r] = static_cast<int>(c);
    }
  }
  return ds;
}

}  // namespace drbmclust
