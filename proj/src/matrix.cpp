#include "shiftcut/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace shiftcut {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

void check_finite(const SquareMatrix& m, const char* what) {
  int n = m.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(m(i, j)))
        throw ValidationError(std::string(what) + ": non-finite entry at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
}

// Checks |x_ij - x_ji| against the scaled tolerance, then averages the two
// triangles so downstream code can rely on exact symmetry.
void check_and_symmetrize(SquareMatrix& m, const char* what) {
  int n = m.size();
  double tol = kSymmetryTol * m.max_abs();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double gap = std::fabs(m(i, j) - m(j, i));
      if (!(gap <= tol))
        throw ValidationError(std::string(what) + ": asymmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              "), |" + std::to_string(m(i, j)) + " - " +
                              std::to_string(m(j, i)) + "| > tolerance");
      double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
}

}  // namespace

SquareMatrix::SquareMatrix(int n, double fill) {
  if (n < 0) throw ValidationError("matrix size must be nonnegative");
  n_ = n;
  v_.assign(static_cast<std::size_t>(n) * n, fill);
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  int n = static_cast<int>(rows.size());
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw ValidationError("row " + std::to_string(i) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(n));
    for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

double SquareMatrix::max_abs() const {
  double m = 0.0;
  for (double x : v_) {
    double a = std::fabs(x);
    if (a > m) m = a;  // NaN fails the comparison and is skipped
  }
  return m;
}

MatrixDiagnostics diagnose(const SquareMatrix& m) {
  MatrixDiagnostics d;
  int n = m.size();
  d.min_entry = std::numeric_limits<double>::quiet_NaN();
  d.max_entry = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double x = m(i, j);
      if (!std::isfinite(x)) {
        ++d.nonfinite_count;
        continue;
      }
      if (!d.has_finite) {
        d.min_entry = d.max_entry = x;
        d.has_finite = true;
      } else {
        d.min_entry = std::min(d.min_entry, x);
        d.max_entry = std::max(d.max_entry, x);
      }
      if (j > i && std::isfinite(m(j, i)))
        d.max_asymmetry = std::max(d.max_asymmetry, std::fabs(x - m(j, i)));
    }
  }
  return d;
}

DistanceMatrix::DistanceMatrix(SquareMatrix d) : d_(std::move(d)) {
  check_finite(d_, "distance matrix");
  check_and_symmetrize(d_, "distance matrix");
  int n = d_.size();
  double tol = kSymmetryTol * d_.max_abs();
  for (int i = 0; i < n; ++i) {
    if (std::fabs(d_(i, i)) > tol)
      throw ValidationError("distance matrix: nonzero diagonal at " + std::to_string(i));
    for (int j = 0; j < n; ++j)
      if (d_(i, j) < 0.0)
        throw ValidationError("distance matrix: negative entry at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
  }
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  return DistanceMatrix(SquareMatrix::from_rows(rows));
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Raw: return "raw";
    case Provenance::ConstantShifted: return "constant_shifted";
    case Provenance::AdaptiveCentered: return "adaptive_centered";
  }
  return "unknown";
}

SimilarityMatrix::SimilarityMatrix(SquareMatrix s, Provenance p)
    : s_(std::move(s)), provenance_(p) {
  check_finite(s_, "similarity matrix");
  check_and_symmetrize(s_, "similarity matrix");
}

SimilarityMatrix SimilarityMatrix::from_rows(
    const std::vector<std::vector<double>>& rows, Provenance p) {
  return SimilarityMatrix(SquareMatrix::from_rows(rows), p);
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& data) {
  int r = static_cast<int>(data.size());
  int c = r > 0 ? static_cast<int>(data[0].size()) : 0;
  FeatureMatrix f(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(data[i].size()) != c)
      throw ValidationError("feature row " + std::to_string(i) +
                            " has inconsistent width");
    for (int j = 0; j < c; ++j) f(i, j) = data[i][j];
  }
  return f;
}

ShiftSpec ShiftSpec::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "adaptive") return adaptive();
  if (text.rfind("const:", 0) == 0) {
    const std::string num = text.substr(6);
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(num, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad shift value in '" + text + "'");
    }
    if (used != num.size() || !std::isfinite(a))
      throw ValidationError("bad shift value in '" + text + "'");
    return constant(a);
  }
  throw ValidationError("unknown shift '" + text +
                        "' (expected none, const:<alpha> or adaptive)");
}

std::string ShiftSpec::to_string() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Adaptive: return "adaptive";
    case Kind::Constant: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "const:%g", alpha);
      return buf;
    }
  }
  return "unknown";
}

DistanceMatrix squared_euclidean_distances(const FeatureMatrix& features) {
  int n = features.rows;
  int m = features.cols;
  require(n >= 2, "need at least 2 objects");
  require(m >= 1, "need at least 1 feature");
  for (double v : features.values)
    if (!std::isfinite(v)) throw ValidationError("features: non-finite value");

  SquareMatrix d(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* xi = features.row(i);
    for (int j = i + 1; j < n; ++j) {
      const double* xj = features.row(j);
      double s = 0.0;
      for (int f = 0; f < m; ++f) {
        double diff = xi[f] - xj[f];
        s += diff * diff;
      }
      d(i, j) = s;
      d(j, i) = s;
    }
  }
  return DistanceMatrix(std::move(d));
}

SimilarityMatrix distances_to_similarities(const DistanceMatrix& d) {
  int n = d.size();
  require(n >= 2, "need at least 2 objects");
  double lo = d(0, 0), hi = d(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      lo = std::min(lo, d(i, j));
      hi = std::max(hi, d(i, j));
    }
  SquareMatrix x(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = hi - d(i, j) + lo;
  return SimilarityMatrix(std::move(x), Provenance::Raw);
}

SimilarityMatrix constant_shift(const SimilarityMatrix& x, double alpha) {
  if (!std::isfinite(alpha)) throw ValidationError("shift must be finite");
  int n = x.size();
  SquareMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = x(i, j) - alpha;
  return SimilarityMatrix(std::move(s), Provenance::ConstantShifted);
}

SimilarityMatrix adaptive_shift(const SimilarityMatrix& x) {
  int n = x.size();
  require(n >= 1, "empty matrix");
  std::vector<double> row_mean(n, 0.0);
  for (int i = 0; i < n; ++i) row_mean[i] = accumulate_row(x.row(i), n) / n;
  double grand_mean = pairwise_sum(row_mean) / n;

  // Column means equal row means once the matrix is exactly symmetric, so a
  // single mean vector serves both roles. Fill the upper triangle and mirror
  // to keep the result bitwise symmetric.
  SquareMatrix s(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = x(i, j) - row_mean[i] - row_mean[j] + grand_mean;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SimilarityMatrix(std::move(s), Provenance::AdaptiveCentered);
}

SimilarityMatrix apply_shift(const SimilarityMatrix& x, const ShiftSpec& spec) {
  switch (spec.kind) {
    case ShiftSpec::Kind::None: return x;
    case ShiftSpec::Kind::Constant: return constant_shift(x, spec.alpha);
    case ShiftSpec::Kind::Adaptive: return adaptive_shift(x);
  }
  throw ValidationError("unknown shift kind");
}

}  // namespace shiftcut
