#pragma once

// Linear principal-subspace codec and NMSE evaluation.
//
// A sample Ha (Na x Nt complex) is flattened to x = [Re vec(Ha); Im vec(Ha)]
// with vec() in row-major order, giving dim = 2 Na Nt real features.
// encode(x) = B^T (x - mean), decode(v) = B v + mean, where the m = round(eta
// dim) columns of B are the leading eigenvectors of the training covariance.
//
// On-disk layout (little-endian):
//   "CSIC" | u16 version=1 | u16 reserved=0 | u32 rows | u32 cols | u32 dim |
//   u32 m | u32 eta_num | u32 eta_den   (32-byte header)
//   mean: dim f64 | basis: dim*m f64, column-major

#include "csiaug/core.hpp"
#include "csiaug/io_util.hpp"
#include "csiaug/parallel.hpp"
#include "csiaug/ratio.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace csiaug {

inline constexpr double kDbFloor = -300.0;
inline constexpr double kOrthonormalTolerance = 1e-8;

inline RealVector vectorize(const ComplexMatrix& ha) {
  const Eigen::Index n = ha.size();
  RealVector x(2 * n);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < ha.rows(); ++r) {
    for (Eigen::Index c = 0; c < ha.cols(); ++c, ++i) {
      x[i] = ha(r, c).real();
      x[n + i] = ha(r, c).imag();
    }
  }
  return x;
}

inline ComplexMatrix unvectorize(const RealVector& x, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::Index n = rows * cols;
  if (x.size() != 2 * n) {
    throw ShapeMismatch("feature vector has length " + std::to_string(x.size()) + ", expected " +
                        std::to_string(2 * n));
  }
  ComplexMatrix ha(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c, ++i) {
      ha(r, c) = Complex(x[i], x[n + i]);
    }
  }
  return ha;
}

/// m = round(eta * dim); must land in [1, dim].
inline std::size_t components_for(const Ratio& eta, std::size_t dim) {
  const std::uint64_t m = eta.scale(dim);
  if (m < 1) {
    throw InvalidInput("ratio " + eta.to_string() + " keeps no components of dim " + std::to_string(dim));
  }
  if (m > dim) {
    throw InvalidInput("ratio " + eta.to_string() + " exceeds 1");
  }
  return static_cast<std::size_t>(m);
}

struct CodeVector {
  RealVector values;
};

class LinearCodec {
public:
  LinearCodec(Eigen::Index rows, Eigen::Index cols, Ratio eta, RealVector mean, RealMatrix basis)
      : rows_(rows), cols_(cols), eta_(eta), mean_(std::move(mean)), basis_(std::move(basis)) {
    const Eigen::Index dim = 2 * rows_ * cols_;
    if (rows_ < 1 || cols_ < 1) {
      throw InvalidInput("codec shape must be positive");
    }
    if (mean_.size() != dim || basis_.rows() != dim) {
      throw ShapeMismatch("codec mean/basis do not match dim " + std::to_string(dim));
    }
    if (basis_.cols() < 1 || basis_.cols() > dim) {
      throw InvalidInput("codec needs 1 <= m <= dim");
    }
    if (!mean_.allFinite() || !basis_.allFinite()) {
      throw InvalidInput("codec has non-finite parameters");
    }
    const double residual = orthonormality_residual();
    if (!(residual <= kOrthonormalTolerance)) {
      throw InvalidInput("codec basis is not orthonormal (residual " + std::to_string(residual) + ")");
    }
  }

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }
  Eigen::Index dim() const noexcept { return mean_.size(); }
  Eigen::Index components() const noexcept { return basis_.cols(); }
  const Ratio& ratio() const noexcept { return eta_; }
  const RealVector& mean() const noexcept { return mean_; }
  const RealMatrix& basis() const noexcept { return basis_; }

  /// max |B^T B - I|.
  double orthonormality_residual() const {
    const RealMatrix gram = basis_.transpose() * basis_;
    return (gram - RealMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  }

  friend bool operator==(const LinearCodec& a, const LinearCodec& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.eta_ == b.eta_ && a.mean_ == b.mean_ &&
           a.basis_.cols() == b.basis_.cols() && a.basis_ == b.basis_;
  }

private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  Ratio eta_;
  RealVector mean_;
  RealMatrix basis_;
};

namespace detail {

// Each basis vector is flipped so its first coordinate above this magnitude is positive.
inline constexpr double kSignPivot = 1e-12;

inline void canonicalize_signs(RealMatrix& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      const double v = basis(i, j);
      if (std::abs(v) > kSignPivot) {
        if (v < 0.0) {
          basis.col(j) = -basis.col(j);
        }
        break;
      }
    }
  }
}

/// Leading m eigenvectors (descending eigenvalue) of a symmetric matrix
/// whose lower triangle is filled. Destroys cov.
inline RealMatrix leading_eigenvectors(RealMatrix& cov, std::size_t m, RealVector* eigenvalues = nullptr) {
  const auto n = static_cast<lapack_int>(cov.rows());
  const auto count = static_cast<lapack_int>(m);
  RealVector w(n);
  RealMatrix z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(1, count)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, cov.data(), n, 0.0, 0.0,
                                         n - count + 1, n, 0.0, &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count) {
    throw Error("symmetric eigensolver failed (info=" + std::to_string(info) + ")");
  }
  RealMatrix basis = z.rowwise().reverse();
  if (eigenvalues) {
    *eigenvalues = w.head(count).reverse();
  }
  return basis;
}

} // namespace detail

/// Principal-subspace fit. Deterministic for a given dataset.
inline LinearCodec fit_codec(const Dataset& train, Ratio eta) {
  require_domain(train, Domain::AngularDelay, "codec fitting");
  if (train.size() < 2) {
    throw InvalidInput("codec fitting needs at least 2 samples, got " + std::to_string(train.size()));
  }
  const Eigen::Index dim = 2 * train.rows() * train.cols();
  const std::size_t m = components_for(eta, static_cast<std::size_t>(dim));
  const auto n = static_cast<Eigen::Index>(train.size());

  RealMatrix x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = vectorize(train.sample(static_cast<std::size_t>(i))).transpose();
  }
  const RealVector mean = x.colwise().sum().transpose() / static_cast<double>(n);
  x.rowwise() -= mean.transpose();

  RealMatrix cov(dim, dim);
  cblas_dsyrk(CblasColMajor, CblasLower, CblasTrans, static_cast<int>(dim), static_cast<int>(n),
              1.0 / static_cast<double>(n - 1), x.data(), static_cast<int>(n), 0.0, cov.data(),
              static_cast<int>(dim));
  x.resize(0, 0);

  RealMatrix basis = detail::leading_eigenvectors(cov, m);
  detail::canonicalize_signs(basis);
  return LinearCodec(train.rows(), train.cols(), eta, mean, std::move(basis));
}

inline void require_codec_shape(const LinearCodec& codec, Eigen::Index rows, Eigen::Index cols) {
  if (rows != codec.rows() || cols != codec.cols()) {
    throw ShapeMismatch("codec expects " + std::to_string(codec.rows()) + "x" + std::to_string(codec.cols()) +
                        " samples, got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

inline CodeVector encode(const LinearCodec& codec, const ComplexMatrix& ha) {
  require_codec_shape(codec, ha.rows(), ha.cols());
  return {codec.basis().transpose() * (vectorize(ha) - codec.mean())};
}

inline CodeVector encode(const LinearCodec& codec, const AngularDelayMatrix& ha) {
  return encode(codec, ha.values());
}

inline AngularDelayMatrix decode(const LinearCodec& codec, const CodeVector& v) {
  if (v.values.size() != codec.components()) {
    throw ShapeMismatch("code vector has length " + std::to_string(v.values.size()) + ", codec keeps " +
                        std::to_string(codec.components()));
  }
  if (!v.values.allFinite()) {
    throw InvalidInput("code vector has a non-finite entry");
  }
  const RealVector x = codec.basis() * v.values + codec.mean();
  return AngularDelayMatrix(unvectorize(x, codec.rows(), codec.cols()));
}

inline Dataset reconstruct(const LinearCodec& codec, const Dataset& ds) {
  require_domain(ds, Domain::AngularDelay, "reconstruction");
  require_codec_shape(codec, ds.rows(), ds.cols());
  std::vector<ComplexMatrix> out(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) { out[i] = decode(codec, encode(codec, ds.sample(i))).values(); });
  return Dataset(Domain::AngularDelay, ds.rows(), ds.cols(), std::move(out), ds.provenance());
}

// ---------------------------------------------------------------------------
// NMSE

struct Nmse {
  double linear = 0.0;
  double db = kDbFloor;
};

inline double to_db(double linear) {
  if (!(linear > 0.0)) {
    return kDbFloor;
  }
  return std::max(10.0 * std::log10(linear), kDbFloor);
}

/// Mean over samples of ||ref - rec||_F^2 / ||ref||_F^2.
inline Nmse nmse(const std::vector<ComplexMatrix>& ref, const std::vector<ComplexMatrix>& rec) {
  if (ref.size() != rec.size()) {
    throw ShapeMismatch("nmse needs equal sample counts, got " + std::to_string(ref.size()) + " and " +
                        std::to_string(rec.size()));
  }
  if (ref.empty()) {
    throw InvalidInput("nmse of an empty dataset is undefined");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (ref[i].rows() != rec[i].rows() || ref[i].cols() != rec[i].cols()) {
      throw ShapeMismatch("nmse sample " + std::to_string(i) + " shapes differ");
    }
    const double energy = ref[i].squaredNorm();
    if (energy == 0.0) {
      throw InvalidInput("nmse reference sample " + std::to_string(i) + " is all zeros");
    }
    total += (ref[i] - rec[i]).squaredNorm() / energy;
  }
  const double linear = total / static_cast<double>(ref.size());
  return {linear, to_db(linear)};
}

inline Nmse nmse(const Dataset& ref, const Dataset& rec) {
  if (ref.rows() != rec.rows() || ref.cols() != rec.cols()) {
    throw ShapeMismatch("nmse datasets have different sample shapes");
  }
  return nmse(ref.samples(), rec.samples());
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalReport {
  std::string scenario;
  std::string method;
  Ratio ratio;
  Nmse result;
  double db_floor = kDbFloor;
  std::size_t samples = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index dim = 0;
  Eigen::Index components = 0;
  std::optional<std::uint64_t> train_seed;
  std::optional<std::uint64_t> test_seed;
  std::vector<std::uint64_t> augment_seeds;
};

struct EvalLabels {
  std::string scenario = "default";
  std::string method = "none";
  Provenance train;
};

inline EvalReport evaluate(const LinearCodec& codec, const Dataset& test, const EvalLabels& labels = {}) {
  const Dataset rec = reconstruct(codec, test);
  EvalReport report;
  report.scenario = labels.scenario;
  report.method = labels.method;
  report.ratio = codec.ratio();
  report.result = nmse(test, rec);
  report.samples = test.size();
  report.rows = codec.rows();
  report.cols = codec.cols();
  report.dim = codec.dim();
  report.components = codec.components();
  report.train_seed = labels.train.seed();
  report.test_seed = test.provenance().seed();
  for (const auto& a : labels.train.augmentations()) {
    report.augment_seeds.push_back(a.params.seed);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

inline constexpr char kCodecMagic[4] = {'C', 'S', 'I', 'C'};
inline constexpr std::uint16_t kCodecVersion = 1;
inline constexpr std::size_t kCodecHeaderSize = 32;

inline std::vector<std::uint8_t> encode_codec(const LinearCodec& codec) {
  std::vector<std::uint8_t> out;
  out.reserve(kCodecHeaderSize + 8 * static_cast<std::size_t>(codec.dim() * (1 + codec.components())));
  out.insert(out.end(), kCodecMagic, kCodecMagic + 4);
  io::put_le<std::uint16_t>(out, kCodecVersion);
  io::put_le<std::uint16_t>(out, 0);
  io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(codec.rows()));
  io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(codec.cols()));
  io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(codec.dim()));
  io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(codec.components()));
  io::put_le<std::uint32_t>(out, codec.ratio().num());
  io::put_le<std::uint32_t>(out, codec.ratio().den());
  for (Eigen::Index i = 0; i < codec.dim(); ++i) {
    io::put_le<double>(out, codec.mean()[i]);
  }
  const RealMatrix& basis = codec.basis();
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      io::put_le<double>(out, basis(i, j));
    }
  }
  return out;
}

inline LinearCodec decode_codec(const std::vector<std::uint8_t>& bytes, const std::string& path = "<memory>") {
  if (bytes.size() < kCodecHeaderSize) {
    throw CorruptionError(path, kCodecHeaderSize, bytes.size());
  }
  if (!std::equal(kCodecMagic, kCodecMagic + 4, bytes.begin())) {
    throw FormatError(0, "bad magic '" + std::string(bytes.begin(), bytes.begin() + 4) + "', expected 'CSIC'");
  }
  const auto version = io::get_le<std::uint16_t>(bytes.data() + 4);
  if (version != kCodecVersion) {
    throw FormatError(4, "unsupported codec version " + std::to_string(version));
  }
  if (io::get_le<std::uint16_t>(bytes.data() + 6) != 0) {
    throw FormatError(6, "reserved field must be zero");
  }
  const auto rows = io::get_le<std::uint32_t>(bytes.data() + 8);
  const auto cols = io::get_le<std::uint32_t>(bytes.data() + 12);
  const auto dim = io::get_le<std::uint32_t>(bytes.data() + 16);
  const auto m = io::get_le<std::uint32_t>(bytes.data() + 20);
  const auto num = io::get_le<std::uint32_t>(bytes.data() + 24);
  const auto den = io::get_le<std::uint32_t>(bytes.data() + 28);
  if (rows < 1 || cols < 1 || static_cast<std::uint64_t>(dim) != 2ULL * rows * cols) {
    throw FormatError(8, "inconsistent codec dimensions");
  }
  if (m < 1 || m > dim) {
    throw FormatError(20, "component count outside [1, dim]");
  }
  if (num == 0 || den == 0) {
    throw FormatError(24, "ratio must be positive");
  }
  const std::uint64_t expected = kCodecHeaderSize + 8ULL * dim * (1ULL + m);
  if (bytes.size() != expected) {
    throw CorruptionError(path, expected, bytes.size());
  }
  const std::uint8_t* p = bytes.data() + kCodecHeaderSize;
  RealVector mean(dim);
  for (std::uint32_t i = 0; i < dim; ++i, p += 8) {
    mean[i] = io::get_le<double>(p);
  }
  RealMatrix basis(dim, m);
  for (std::uint32_t j = 0; j < m; ++j) {
    for (std::uint32_t i = 0; i < dim; ++i, p += 8) {
      basis(i, j) = io::get_le<double>(p);
    }
  }
  return LinearCodec(rows, cols, Ratio(num, den), std::move(mean), std::move(basis));
}

inline void write_codec(const LinearCodec& codec, const std::filesystem::path& path) {
  io::AtomicFile file(path);
  file.write(encode_codec(codec));
  file.commit();
}

inline LinearCodec read_codec(const std::filesystem::path& path) {
  return decode_codec(io::read_file(path), path.string());
}

} // namespace csiaug
