#include "ghlab/core/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace ghlab {

BasePoint::BasePoint(Vec m, cplx e) : mu(std::move(m)), eta(e) {
  for (int i = 0; i < mu.size(); ++i)
    if (!std::isfinite(mu[i])) throw std::invalid_argument("BasePoint: non-finite mu");
  if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag()))
    throw std::invalid_argument("BasePoint: non-finite eta");
}

Vec BasePoint::flat() const {
  Vec x(mu.size() + 2);
  x.head(mu.size()) = mu;
  x[mu.size()] = eta.real();
  x[mu.size() + 1] = eta.imag();
  return x;
}

BasePoint BasePoint::from_flat(const Vec& x) {
  const auto n = x.size() - 2;
  return BasePoint(x.head(n), cplx(x[n], x[n + 1]));
}

QuadForm::QuadForm(Mat entries) : a_(std::move(entries)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0)
    throw std::invalid_argument("QuadForm: matrix must be square and non-empty");
  const double scale = a_.cwiseAbs().maxCoeff();
  if (!((a_ - a_.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, scale)))
    throw std::invalid_argument("QuadForm: matrix not symmetric");
  a_ = 0.5 * (a_ + a_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(a_, Eigen::EigenvaluesOnly);
  lmin_ = es.eigenvalues().minCoeff();
  lmax_ = es.eigenvalues().maxCoeff();
  if (!(lmin_ > 1e-12 * lmax_) || !(lmax_ > 0))
    throw std::invalid_argument("QuadForm: matrix not positive definite");
  Eigen::LLT<Mat> llt(a_);
  l_ = llt.matrixL();
  inv_ = llt.solve(Mat::Identity(a_.rows(), a_.cols()));
  inv_ = 0.5 * (inv_ + inv_.transpose());
  det_ = 1.0;
  for (int i = 0; i < l_.rows(); ++i) det_ *= l_(i, i) * l_(i, i);
}

QuadForm QuadForm::identity(int n) { return QuadForm(Mat::Identity(n, n)); }

IndexSet::IndexSet(std::vector<int> members, int N) : m_(std::move(members)), n_(N) {
  if (N < 1 || N > 62) throw std::invalid_argument("IndexSet: N out of range");
  std::sort(m_.begin(), m_.end());
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (m_[i] < 0 || m_[i] > N) throw std::invalid_argument("IndexSet: member out of range");
    if (i > 0 && m_[i] == m_[i - 1]) throw std::invalid_argument("IndexSet: repeated member");
    mask_ |= std::uint64_t{1} << m_[i];
  }
}

IndexSet IndexSet::full(int N) {
  std::vector<int> m(N + 1);
  for (int i = 0; i <= N; ++i) m[i] = i;
  return IndexSet(m, N);
}

IndexSet IndexSet::from_mask(std::uint64_t mask, int N) {
  std::vector<int> m;
  for (int i = 0; i <= N; ++i)
    if ((mask >> i) & 1u) m.push_back(i);
  return IndexSet(m, N);
}

std::vector<int> IndexSet::active() const {
  std::vector<int> out;
  for (int k : m_)
    if (k >= 1) out.push_back(k);
  return out;
}

std::vector<int> IndexSet::complement() const {
  std::vector<int> out;
  for (int k = 0; k <= n_; ++k)
    if (!contains(k)) out.push_back(k);
  return out;
}

std::vector<int> IndexSet::complement_active() const {
  std::vector<int> out;
  for (int k = 1; k <= n_; ++k)
    if (!contains(k)) out.push_back(k);
  return out;
}

IndexSet IndexSet::united(const IndexSet& o) const {
  if (o.n_ != n_) throw std::invalid_argument("IndexSet: mismatched N");
  return from_mask(mask_ | o.mask_, n_);
}

void IndexSet::require_stratum() const {
  if (size() < 2 || size() > n_ + 1)
    throw std::invalid_argument("IndexSet: stratum label needs 2 <= |I| <= N+1, got " + label());
}

std::string IndexSet::label() const {
  std::string s = "{";
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(m_[i]);
  }
  return s + "}";
}

bool IndexSet::operator<(const IndexSet& o) const {
  if (size() != o.size()) return size() < o.size();
  return m_ < o.m_;
}

std::vector<IndexSet> index_sets(int N, int lo, int hi) {
  std::vector<IndexSet> out;
  const std::uint64_t total = std::uint64_t{1} << (N + 1);
  for (std::uint64_t m = 0; m < total; ++m) {
    const int c = std::popcount(m);
    if (c >= lo && c <= hi) out.push_back(IndexSet::from_mask(m, N));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vec generator(int k, int N) {
  if (k < 0 || k > N) throw std::invalid_argument("generator: index out of range");
  if (k == 0) return Vec::Constant(N, -1.0);
  Vec e = Vec::Zero(N);
  e[k - 1] = 1.0;
  return e;
}

Mat generators(const std::vector<int>& ks, int N) {
  Mat b(N, static_cast<int>(ks.size()));
  for (std::size_t c = 0; c < ks.size(); ++c) b.col(c) = generator(ks[c], N);
  return b;
}

Mat submatrix(const Mat& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = a(rows[i], cols[j]);
  return s;
}

std::vector<int> coords_of(const std::vector<int>& ks) {
  std::vector<int> c;
  c.reserve(ks.size());
  for (int k : ks) {
    if (k < 1) throw std::invalid_argument("coords_of: index 0 has no coordinate");
    c.push_back(k - 1);
  }
  return c;
}

}  // namespace ghlab
