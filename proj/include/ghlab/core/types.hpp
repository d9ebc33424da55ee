#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace ghlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using cplx = std::complex<double>;

/// A point (mu, eta) of the base R^N x C.
struct BasePoint {
  Vec mu;
  cplx eta{0.0, 0.0};

  BasePoint() = default;
  BasePoint(Vec m, cplx e);

  int dim() const { return static_cast<int>(mu.size()); }

  /// Real coordinates (mu_1..mu_N, Re eta, Im eta).
  Vec flat() const;
  static BasePoint from_flat(const Vec& x);
};

/// Symmetric positive-definite matrix with cached spectral data.
class QuadForm {
 public:
  explicit QuadForm(Mat entries);
  static QuadForm identity(int n);

  int n() const { return static_cast<int>(a_.rows()); }
  const Mat& matrix() const { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }
  double lambda_min() const { return lmin_; }
  double lambda_max() const { return lmax_; }
  double det() const { return det_; }
  const Mat& inverse() const { return inv_; }
  /// Lower Cholesky factor L with A = L L^T.
  const Mat& chol() const { return l_; }

  double quad(const Vec& x) const { return x.dot(a_ * x); }

 private:
  Mat a_, inv_, l_;
  double lmin_ = 0, lmax_ = 0, det_ = 0;
};

/// Subset of {0,...,N}. Index k >= 1 refers to coordinate mu_k, i.e. mu[k-1].
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<int> members, int N);
  static IndexSet full(int N);
  static IndexSet from_mask(std::uint64_t mask, int N);

  int N() const { return n_; }
  int size() const { return static_cast<int>(m_.size()); }
  const std::vector<int>& members() const { return m_; }
  std::uint64_t mask() const { return mask_; }
  bool contains(int k) const { return k >= 0 && k <= n_ && ((mask_ >> k) & 1u); }
  bool contains_zero() const { return contains(0); }

  /// Members >= 1.
  std::vector<int> active() const;
  /// {0..N} minus the members.
  std::vector<int> complement() const;
  /// Members of the complement that are >= 1.
  std::vector<int> complement_active() const;

  bool subset_of(const IndexSet& o) const { return (mask_ & ~o.mask_) == 0; }
  bool strict_subset_of(const IndexSet& o) const { return subset_of(o) && mask_ != o.mask_; }
  IndexSet united(const IndexSet& o) const;

  /// Throws unless 2 <= |I| <= N+1.
  void require_stratum() const;

  std::string label() const;
  bool operator==(const IndexSet& o) const { return n_ == o.n_ && mask_ == o.mask_; }
  bool operator<(const IndexSet& o) const;

 private:
  std::vector<int> m_;
  std::uint64_t mask_ = 0;
  int n_ = 0;
};

/// All index sets I with lo <= |I| <= hi, ordered by size then lexicographically.
std::vector<IndexSet> index_sets(int N, int lo, int hi);

/// Direction spanned by the stratum parameter attached to index k:
/// e_k for k >= 1, and -(1,...,1) for k = 0.
Vec generator(int k, int N);

/// Columns generator(k) for k in ks.
Mat generators(const std::vector<int>& ks, int N);

/// Principal submatrix on coordinate indices (0-based).
Mat submatrix(const Mat& a, const std::vector<int>& rows, const std::vector<int>& cols);

/// Converts stratum labels (>= 1) to 0-based coordinate indices.
std::vector<int> coords_of(const std::vector<int>& ks);

}  // namespace ghlab
