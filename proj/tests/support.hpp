#pragma once

// Reference implementations used as oracles. Each is written straight from
// the defining formula, with no shared code paths with the library.

#include "csiaug/csiaug.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using csiaug::Complex;
using csiaug::ComplexMatrix;
using csiaug::RealMatrix;

/// Direct double sum: Ha[d][a] = sum_n sum_m Fc[d][n] H[n][m] conj(Ft[a][m]).
inline ComplexMatrix angular_delay(const ComplexMatrix& h, Eigen::Index na) {
  const auto nc = h.rows();
  const auto nt = h.cols();
  ComplexMatrix out = ComplexMatrix::Zero(na, nt);
  for (Eigen::Index d = 0; d < na; ++d) {
    for (Eigen::Index a = 0; a < nt; ++a) {
      Complex acc = 0.0;
      for (Eigen::Index n = 0; n < nc; ++n) {
        const Complex fc = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((d * n) % nc) / nc);
        for (Eigen::Index m = 0; m < nt; ++m) {
          const Complex ft = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((a * m) % nt) / nt);
          acc += fc * h(n, m) * std::conj(ft);
        }
      }
      out(d, a) = acc / std::sqrt(static_cast<double>(nc * nt));
    }
  }
  return out;
}

/// Literal 1-indexed transcription of the upward algorithm on one column.
inline std::vector<double> bubble_up(std::vector<double> h, unsigned s) {
  const std::size_t na = h.size();
  std::size_t m1 = 1; // 1-indexed argmax, first occurrence
  for (std::size_t i = 2; i <= na; ++i) {
    if (h[i - 1] > h[m1 - 1]) m1 = i;
  }
  const std::size_t reps = std::min<std::size_t>(s, m1 - 1);
  for (std::size_t j = 0; j < reps; ++j) {
    const double top = h[0];
    for (std::size_t i = 1; i < na; ++i) h[i - 1] = h[i];
    h[na - 1] = top;
    std::size_t k = na;
    while (k > 1 && h[k - 1] > h[k - 2]) {
      std::swap(h[k - 1], h[k - 2]);
      --k;
    }
  }
  return h;
}

/// Literal 1-indexed transcription of the downward algorithm on one column.
inline std::vector<double> bubble_down(std::vector<double> h, unsigned s) {
  const std::size_t na = h.size();
  std::size_t m1 = 1;
  for (std::size_t i = 2; i <= na; ++i) {
    if (h[i - 1] > h[m1 - 1]) m1 = i;
  }
  const std::size_t reps = std::min<std::size_t>(s, na - m1);
  for (std::size_t j = 0; j < reps; ++j) {
    const double bottom = h[na - 1];
    for (std::size_t i = na - 1; i >= 1; --i) h[i] = h[i - 1];
    h[0] = bottom;
    std::size_t k = na;
    while (k > 1 && h[0] < h[k - 1] && h[k - 1] < h[1]) {
      std::swap(h[k - 1], h[0]);
      --k;
    }
  }
  return h;
}

/// Covariance eigenvectors through Eigen's own solver (the library uses LAPACK).
inline RealMatrix principal_basis(const RealMatrix& x_rows, Eigen::Index m) {
  const Eigen::VectorXd mean = x_rows.colwise().mean();
  const RealMatrix c = x_rows.rowwise() - mean.transpose();
  const RealMatrix cov = c.transpose() * c / static_cast<double>(x_rows.rows() - 1);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(cov);
  return es.eigenvectors().rightCols(m).rowwise().reverse();
}

inline double frob2(const ComplexMatrix& m) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) acc += std::norm(m.data()[i]);
  return acc;
}

} // namespace oracle

namespace testing_support {

inline csiaug::ComplexMatrix random_complex(Eigen::Index r, Eigen::Index c, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  csiaug::ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {nd(gen), nd(gen)};
  return m;
}

inline csiaug::RealMatrix random_uniform(Eigen::Index r, Eigen::Index c, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  csiaug::RealMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = ud(gen);
  return m;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("csiaug-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

inline csiaug::Dataset ad_dataset(std::vector<csiaug::ComplexMatrix> samples, csiaug::Provenance p = {}) {
  const auto r = samples.empty() ? 0 : samples.front().rows();
  const auto c = samples.empty() ? 0 : samples.front().cols();
  return csiaug::Dataset(csiaug::Domain::AngularDelay, r, c, std::move(samples), std::move(p));
}

} // namespace testing_support
