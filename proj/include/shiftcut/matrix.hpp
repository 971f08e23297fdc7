#pragma once

#include <string>
#include <vector>

#include "shiftcut/common.hpp"

namespace shiftcut {

/// Dense row-major n x n matrix. No symmetry or sign guarantees; those live
/// in DistanceMatrix / SimilarityMatrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, double fill = 0.0);
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int size() const { return n_; }
  double operator()(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * n_ + j];
  }
  double& operator()(int i, int j) {
    return v_[static_cast<std::size_t>(i) * n_ + j];
  }
  const double* row(int i) const {
    return v_.data() + static_cast<std::size_t>(i) * n_;
  }
  const std::vector<double>& data() const { return v_; }

  /// Largest |entry|; 0 for an empty matrix. NaNs are skipped.
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> v_;
};

struct MatrixDiagnostics {
  double max_asymmetry = 0.0;  // over pairs where both entries are finite
  long nonfinite_count = 0;
  double min_entry = 0.0;  // over finite entries
  double max_entry = 0.0;
  bool has_finite = false;
};

MatrixDiagnostics diagnose(const SquareMatrix& m);

/// Relative symmetry tolerance applied at matrix validation: entries must
/// satisfy |x_ij - x_ji| <= kSymmetryTol * max|x|.
inline constexpr double kSymmetryTol = 1e-9;

/// Pairwise distances: symmetric, nonnegative, zero diagonal. Input asymmetry
/// within tolerance is averaged away so the stored matrix is exactly symmetric.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(SquareMatrix d);
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int size() const { return d_.size(); }
  const SquareMatrix& values() const { return d_; }
  double operator()(int i, int j) const { return d_(i, j); }

 private:
  SquareMatrix d_;
};

/// What produced a similarity matrix. Informational only; no operation
/// branches on it.
enum class Provenance { Raw, ConstantShifted, AdaptiveCentered };

std::string to_string(Provenance p);

/// Pairwise similarities. Entries may be negative (shifts routinely make them
/// so). Exactly symmetric in storage, same averaging rule as DistanceMatrix.
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(SquareMatrix s, Provenance p = Provenance::Raw);
  static SimilarityMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    Provenance p = Provenance::Raw);

  int size() const { return s_.size(); }
  const SquareMatrix& values() const { return s_; }
  double operator()(int i, int j) const { return s_(i, j); }
  const double* row(int i) const { return s_.row(i); }
  Provenance provenance() const { return provenance_; }
  double max_abs() const { return s_.max_abs(); }

 private:
  SquareMatrix s_;
  Provenance provenance_;
};

/// Row-major feature table (rows = objects).
struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(int r, int c) : rows(r), cols(c), values(std::size_t(r) * c, 0.0) {}
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& data);

  double operator()(int i, int f) const {
    return values[static_cast<std::size_t>(i) * cols + f];
  }
  double& operator()(int i, int f) {
    return values[static_cast<std::size_t>(i) * cols + f];
  }
  const double* row(int i) const {
    return values.data() + static_cast<std::size_t>(i) * cols;
  }
};

/// Which shift to apply to a similarity matrix before clustering.
struct ShiftSpec {
  enum class Kind { None, Constant, Adaptive };

  Kind kind = Kind::None;
  double alpha = 0.0;  // Constant only

  static ShiftSpec none() { return {Kind::None, 0.0}; }
  static ShiftSpec constant(double alpha) { return {Kind::Constant, alpha}; }
  static ShiftSpec adaptive() { return {Kind::Adaptive, 0.0}; }

  /// Parses "none", "const:<alpha>" or "adaptive" (CLI syntax).
  static ShiftSpec parse(const std::string& text);
  std::string to_string() const;
};

/// d_ij = squared Euclidean distance between feature rows i and j.
DistanceMatrix squared_euclidean_distances(const FeatureMatrix& features);

/// x_ij = max(d) - d_ij + min(d), extrema taken over every entry of d
/// including the zero diagonal. Requires n >= 2.
SimilarityMatrix distances_to_similarities(const DistanceMatrix& d);

/// s_ij = x_ij - alpha, every entry including the diagonal.
SimilarityMatrix constant_shift(const SimilarityMatrix& x, double alpha);

/// Double centering: s_ij = x_ij - row_mean_i - col_mean_j + grand_mean.
/// Row and column sums of the result are zero.
SimilarityMatrix adaptive_shift(const SimilarityMatrix& x);

SimilarityMatrix apply_shift(const SimilarityMatrix& x, const ShiftSpec& spec);

}  // namespace shiftcut
