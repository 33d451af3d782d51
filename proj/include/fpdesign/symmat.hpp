#ifndef FPDESIGN_SYMMAT_HPP
#define FPDESIGN_SYMMAT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace fpdesign {

//! Thrown when an information matrix cannot be inverted. Carries the
//! reciprocal-condition estimate that triggered the failure.
class SingularInformation : public std::runtime_error {
 public:
  explicit SingularInformation(double rcond_estimate)
      : std::runtime_error("singular information matrix (rcond estimate " +
                           std::to_string(rcond_estimate) + ")"),
        rcond_estimate_(rcond_estimate) {}

  double rcond_estimate() const { return rcond_estimate_; }

 private:
  double rcond_estimate_;
};

//! Reciprocal-condition estimates below this mark a matrix as singular for
//! criterion purposes; such designs receive a +/-infinity sentinel value so
//! exchange moves can propose and reject them without unwinding the search.
inline constexpr double kSingularRcond = 1e-12;

template <int P>
class CholeskyFactor;

//! Dense symmetric PxP matrix, packed lower triangle, row by row:
//! a[i*(i+1)/2 + j] = M(i,j) for j <= i.
template <int P>
class SymMat {
 public:
  static constexpr int kDim = P;
  static constexpr int kPacked = P * (P + 1) / 2;

  SymMat() { a_.fill(0.0); }

  static constexpr int index(int i, int j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }

  double operator()(int i, int j) const { return a_[index(i, j)]; }
  double& at(int i, int j) { return a_[index(i, j)]; }

  const std::array<double, kPacked>& packed() const { return a_; }

  //! M += w * f f'
  void add_outer(const std::array<double, P>& f, double w) {
    int k = 0;
    for (int i = 0; i < P; ++i) {
      const double wf = w * f[i];
      for (int j = 0; j <= i; ++j) a_[k++] += wf * f[j];
    }
  }

  void scale(double c) {
    for (double& v : a_) v *= c;
  }

  SymMat& operator+=(const SymMat& o) {
    for (int k = 0; k < kPacked; ++k) a_[k] += o.a_[k];
    return *this;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < P; ++i) t += (*this)(i, i);
    return t;
  }

  CholeskyFactor<P> cholesky() const;

 private:
  std::array<double, kPacked> a_;
};

//! Lower Cholesky factor of a SymMat. `ok()` is false when a pivot is
//! nonpositive or not finite. The reciprocal-condition estimate is
//! (min diag L / max diag L)^2, a cheap deterministic bound adequate for
//! the singularity threshold used here.
template <int P>
class CholeskyFactor {
 public:
  bool ok() const { return ok_; }

  double rcond_estimate() const {
    if (!ok_) return 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < P; ++i) {
      const double d = l_[SymMat<P>::index(i, i)];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (!(hi > 0.0)) return 0.0;
    const double r = lo / hi;
    return r * r;
  }

  double log_det() const {
    double s = 0.0;
    for (int i = 0; i < P; ++i) s += std::log(l_[SymMat<P>::index(i, i)]);
    return 2.0 * s;
  }

  //! Solve L y = b in place.
  void solve_lower(std::array<double, P>& b) const {
    for (int i = 0; i < P; ++i) {
      double s = b[i];
      for (int j = 0; j < i; ++j) s -= l_[SymMat<P>::index(i, j)] * b[j];
      b[i] = s / l_[SymMat<P>::index(i, i)];
    }
  }

  //! Solve L' y = b in place.
  void solve_upper(std::array<double, P>& b) const {
    for (int i = P - 1; i >= 0; --i) {
      double s = b[i];
      for (int j = i + 1; j < P; ++j) s -= l_[SymMat<P>::index(j, i)] * b[j];
      b[i] = s / l_[SymMat<P>::index(i, i)];
    }
  }

  //! Full symmetric inverse (L L')^-1 via per-column solves.
  SymMat<P> inverse() const {
    SymMat<P> inv;
    std::array<double, P> col;
    for (int j = 0; j < P; ++j) {
      col.fill(0.0);
      col[j] = 1.0;
      solve_lower(col);
      solve_upper(col);
      for (int i = j; i < P; ++i) inv.at(i, j) = col[i];
    }
    return inv;
  }

  //! Diagonal entry i of the inverse: squared norm of column i of L^-1.
  double inverse_diagonal(int i) const {
    std::array<double, P> col;
    col.fill(0.0);
    col[i] = 1.0;
    solve_lower(col);
    double s = 0.0;
    for (int k = i; k < P; ++k) s += col[k] * col[k];
    return s;
  }

 private:
  template <int Q>
  friend class SymMat;

  bool ok_ = false;
  std::array<double, SymMat<P>::kPacked> l_{};
};

template <int P>
CholeskyFactor<P> SymMat<P>::cholesky() const {
  CholeskyFactor<P> f;
  auto& l = f.l_;
  l = a_;
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = l[index(i, j)];
      for (int k = 0; k < j; ++k) s -= l[index(i, k)] * l[index(j, k)];
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) {
          f.ok_ = false;
          return f;
        }
        l[index(i, i)] = std::sqrt(s);
      } else {
        l[index(i, j)] = s / l[index(j, j)];
      }
    }
  }
  f.ok_ = true;
  return f;
}

}  // namespace fpdesign

#endif  // FPDESIGN_SYMMAT_HPP
