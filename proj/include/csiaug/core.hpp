#pragma once

// Domain types shared by the toolkit: complex channel matrices in the
// spatial-frequency and angular-delay domains, their amplitude/phase split,
// datasets with provenance, and augmentation parameters.
//
// All arithmetic is double precision. Values are narrowed to float only when
// a dataset is written to disk.

#include "csiaug/error.hpp"
#include "csiaug/scenario.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csiaug {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      return false;
    }
  }
  return true;
}

namespace detail {

struct ChannelTag {
  static constexpr const char* name = "channel matrix";
};
struct AngularDelayTag {
  static constexpr const char* name = "angular-delay matrix";
};

} // namespace detail

/// Non-empty complex matrix with finite entries; immutable once built.
template <typename Tag>
class TaggedComplexMatrix {
public:
  explicit TaggedComplexMatrix(ComplexMatrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw InvalidInput(std::string(Tag::name) + " must have at least one row and column");
    }
    if (!all_finite(values_)) {
      throw InvalidInput(std::string(Tag::name) + " has a non-finite entry");
    }
  }

  const ComplexMatrix& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return values_(r, c); }

  friend bool operator==(const TaggedComplexMatrix& a, const TaggedComplexMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

private:
  ComplexMatrix values_;
};

/// Spatial-frequency channel H: rows are subcarriers (Nc), columns antennas (Nt).
using ChannelMatrix = TaggedComplexMatrix<detail::ChannelTag>;
/// Truncated angular-delay matrix Ha: rows are delay bins (Na), columns angle bins (Nt).
using AngularDelayMatrix = TaggedComplexMatrix<detail::AngularDelayTag>;

/// Elementwise modulus of an angular-delay matrix. Entries >= 0 and finite.
class AmplitudeMatrix {
public:
  explicit AmplitudeMatrix(RealMatrix values) : values_(std::move(values)) {
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      const double v = values_.data()[i];
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidInput("amplitude entries must be finite and non-negative");
      }
    }
  }

  const RealMatrix& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  double operator()(Eigen::Index r, Eigen::Index c) const { return values_(r, c); }

  friend bool operator==(const AmplitudeMatrix& a, const AmplitudeMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.values_ == b.values_;
  }

private:
  RealMatrix values_;
};

/// Elementwise argument in [-pi, pi).
class PhaseMatrix {
public:
  explicit PhaseMatrix(RealMatrix values) : values_(std::move(values)) {
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      const double v = values_.data()[i];
      if (!(v >= -std::numbers::pi && v < std::numbers::pi)) {
        throw InvalidInput("phase entries must lie in [-pi, pi)");
      }
    }
  }

  const RealMatrix& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  double operator()(Eigen::Index r, Eigen::Index c) const { return values_(r, c); }

  friend bool operator==(const PhaseMatrix& a, const PhaseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.values_ == b.values_;
  }

private:
  RealMatrix values_;
};

struct Polar {
  AmplitudeMatrix amplitude;
  PhaseMatrix phase;
};

/// Argument wrapped to [-pi, pi); exactly 0 for a zero entry.
inline double wrapped_arg(Complex z) {
  if (z.real() == 0.0 && z.imag() == 0.0) {
    return 0.0;
  }
  const double p = std::arg(z);
  return p >= std::numbers::pi ? -std::numbers::pi : p;
}

inline Polar decompose(const AngularDelayMatrix& ha) {
  const ComplexMatrix& v = ha.values();
  RealMatrix amp(v.rows(), v.cols());
  RealMatrix phase(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    amp.data()[i] = std::abs(v.data()[i]);
    phase.data()[i] = wrapped_arg(v.data()[i]);
  }
  return {AmplitudeMatrix(std::move(amp)), PhaseMatrix(std::move(phase))};
}

inline AngularDelayMatrix recompose(const AmplitudeMatrix& amp, const PhaseMatrix& phase) {
  if (amp.rows() != phase.rows() || amp.cols() != phase.cols()) {
    throw ShapeMismatch("amplitude is " + std::to_string(amp.rows()) + "x" +
                        std::to_string(amp.cols()) + " but phase is " + std::to_string(phase.rows()) +
                        "x" + std::to_string(phase.cols()));
  }
  ComplexMatrix out(amp.rows(), amp.cols());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double a = amp.values().data()[i];
    const double p = phase.values().data()[i];
    out.data()[i] = Complex(a * std::cos(p), a * std::sin(p));
  }
  return AngularDelayMatrix(std::move(out));
}

inline Polar decompose(const ComplexMatrix& ha) { return decompose(AngularDelayMatrix(ha)); }

// ---------------------------------------------------------------------------
// Augmentation parameters

enum class AugmentMethod { BsUp, BsDown, Rg, MdBaseline };
enum class ShiftDirection { Up, Down };
enum class AugmentMode { Replace, Append };

inline std::string_view to_string(AugmentMethod m) {
  switch (m) {
  case AugmentMethod::BsUp: return "bs-up";
  case AugmentMethod::BsDown: return "bs-down";
  case AugmentMethod::Rg: return "rg";
  case AugmentMethod::MdBaseline: return "md";
  }
  return "?";
}

inline std::string_view to_string(ShiftDirection d) { return d == ShiftDirection::Up ? "up" : "down"; }
inline std::string_view to_string(AugmentMode m) { return m == AugmentMode::Append ? "append" : "replace"; }

inline AugmentMethod parse_method(std::string_view s) {
  if (s == "bs-up") return AugmentMethod::BsUp;
  if (s == "bs-down") return AugmentMethod::BsDown;
  if (s == "rg") return AugmentMethod::Rg;
  if (s == "md") return AugmentMethod::MdBaseline;
  throw InvalidInput("unknown augmentation method '" + std::string(s) + "'");
}

inline ShiftDirection parse_direction(std::string_view s) {
  if (s == "up") return ShiftDirection::Up;
  if (s == "down") return ShiftDirection::Down;
  throw InvalidInput("unknown shift direction '" + std::string(s) + "'");
}

inline AugmentMode parse_mode(std::string_view s) {
  if (s == "append") return AugmentMode::Append;
  if (s == "replace") return AugmentMode::Replace;
  throw InvalidInput("unknown augmentation mode '" + std::string(s) + "'");
}

/// shift is used by the shift-based methods, block only by Rg. direction
/// only applies to MdBaseline (the B-S methods carry their own direction).
struct AugmentParams {
  AugmentMethod method = AugmentMethod::BsUp;
  std::uint32_t shift = 0;
  std::uint32_t block = 1;
  ShiftDirection direction = ShiftDirection::Up;
  std::uint64_t seed = 0;

  void validate() const {
    if (method == AugmentMethod::Rg && block < 1) {
      throw InvalidInput("random generation needs block size k >= 1");
    }
  }

  friend bool operator==(const AugmentParams&, const AugmentParams&) = default;
};

// ---------------------------------------------------------------------------
// Datasets

enum class Domain : std::uint8_t { SpatialFrequency = 0, AngularDelay = 1 };

inline std::string_view to_string(Domain d) {
  return d == Domain::SpatialFrequency ? "spatial-frequency" : "angular-delay";
}

/// composed marks a step applied to the previous step's augmented copies
/// rather than to the dataset as a whole.
struct AugmentRecord {
  AugmentParams params;
  AugmentMode mode = AugmentMode::Append;
  bool composed = false;

  friend bool operator==(const AugmentRecord&, const AugmentRecord&) = default;
};

struct TransformRecord {
  bool inverse = false;
  std::uint32_t nc = 0;
  std::uint32_t na = 0;

  friend bool operator==(const TransformRecord&, const TransformRecord&) = default;
};

/// Where a dataset came from. The augmentation chain only ever grows.
class Provenance {
public:
  Provenance() = default;
  Provenance(std::optional<ScenarioSpec> scenario, std::optional<std::uint64_t> seed)
      : scenario_(std::move(scenario)), seed_(seed) {}

  const std::optional<ScenarioSpec>& scenario() const noexcept { return scenario_; }
  const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }
  const std::vector<TransformRecord>& transforms() const noexcept { return transforms_; }
  const std::vector<AugmentRecord>& augmentations() const noexcept { return augmentations_; }

  Provenance with_transform(TransformRecord t) const {
    Provenance p = *this;
    p.transforms_.push_back(t);
    return p;
  }

  Provenance with_augmentation(AugmentRecord a) const {
    Provenance p = *this;
    p.augmentations_.push_back(a);
    return p;
  }

  /// "none" for an unaugmented chain. Otherwise methods in order, '+' between
  /// independent steps and '&' before a composed step (e.g. "bs-up&rg").
  std::string method_label() const {
    if (augmentations_.empty()) {
      return "none";
    }
    std::string label;
    for (const auto& a : augmentations_) {
      if (!label.empty()) {
        label += a.composed ? "&" : "+";
      }
      label += to_string(a.params.method);
    }
    return label;
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;

private:
  std::optional<ScenarioSpec> scenario_;
  std::optional<std::uint64_t> seed_;
  std::vector<TransformRecord> transforms_;
  std::vector<AugmentRecord> augmentations_;
};

inline nlohmann::json to_json_value(const AugmentRecord& a) {
  nlohmann::json j = {
      {"method", to_string(a.params.method)},
      {"seed", a.params.seed},
      {"mode", to_string(a.mode)},
  };
  if (a.composed) {
    j["composed"] = true;
  }
  if (a.params.method == AugmentMethod::Rg) {
    j["block"] = a.params.block;
  } else {
    j["shift"] = a.params.shift;
  }
  if (a.params.method == AugmentMethod::MdBaseline) {
    j["direction"] = to_string(a.params.direction);
  }
  return j;
}

inline AugmentRecord augment_record_from_json(const nlohmann::json& j) {
  AugmentRecord a;
  a.params.method = parse_method(j.at("method").get<std::string>());
  a.params.seed = j.at("seed").get<std::uint64_t>();
  a.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("shift")) {
    a.params.shift = j.at("shift").get<std::uint32_t>();
  }
  if (j.contains("block")) {
    a.params.block = j.at("block").get<std::uint32_t>();
  }
  if (j.contains("direction")) {
    a.params.direction = parse_direction(j.at("direction").get<std::string>());
  }
  a.composed = j.value("composed", false);
  return a;
}

inline nlohmann::json to_json_value(const Provenance& p) {
  nlohmann::json j;
  j["scenario"] = p.scenario() ? to_json_value(*p.scenario()) : nlohmann::json(nullptr);
  j["seed"] = p.seed() ? nlohmann::json(*p.seed()) : nlohmann::json(nullptr);
  j["transforms"] = nlohmann::json::array();
  for (const auto& t : p.transforms()) {
    j["transforms"].push_back({{"direction", t.inverse ? "inverse" : "forward"}, {"nc", t.nc}, {"na", t.na}});
  }
  j["augmentations"] = nlohmann::json::array();
  for (const auto& a : p.augmentations()) {
    j["augmentations"].push_back(to_json_value(a));
  }
  return j;
}

inline Provenance provenance_from_json(const nlohmann::json& j) {
  std::optional<ScenarioSpec> scenario;
  if (j.contains("scenario") && !j.at("scenario").is_null()) {
    scenario = scenario_from_json(j.at("scenario"));
  }
  std::optional<std::uint64_t> seed;
  if (j.contains("seed") && !j.at("seed").is_null()) {
    seed = j.at("seed").get<std::uint64_t>();
  }
  Provenance p(scenario, seed);
  if (j.contains("transforms")) {
    for (const auto& t : j.at("transforms")) {
      p = p.with_transform({t.at("direction").get<std::string>() == "inverse",
                            t.at("nc").get<std::uint32_t>(), t.at("na").get<std::uint32_t>()});
    }
  }
  if (j.contains("augmentations")) {
    for (const auto& a : j.at("augmentations")) {
      p = p.with_augmentation(augment_record_from_json(a));
    }
  }
  return p;
}

/// Ordered, equally shaped samples with a domain tag. An empty dataset still
/// carries its shape.
class Dataset {
public:
  Dataset(Domain domain, Eigen::Index rows, Eigen::Index cols, std::vector<ComplexMatrix> samples = {},
          Provenance provenance = {})
      : domain_(domain), rows_(rows), cols_(cols), samples_(std::move(samples)),
        provenance_(std::move(provenance)) {
    if (rows_ < 0 || cols_ < 0 || (!samples_.empty() && (rows_ < 1 || cols_ < 1))) {
      throw InvalidInput("dataset shape must be positive");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (samples_[i].rows() != rows_ || samples_[i].cols() != cols_) {
        throw ShapeMismatch("sample " + std::to_string(i) + " is " + std::to_string(samples_[i].rows()) +
                            "x" + std::to_string(samples_[i].cols()) + ", dataset is " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
      }
      if (!all_finite(samples_[i])) {
        throw InvalidInput("sample " + std::to_string(i) + " has a non-finite entry");
      }
    }
  }

  Domain domain() const noexcept { return domain_; }
  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const std::vector<ComplexMatrix>& samples() const noexcept { return samples_; }
  const ComplexMatrix& sample(std::size_t i) const { return samples_.at(i); }
  const Provenance& provenance() const noexcept { return provenance_; }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    if (a.domain_ != b.domain_ || a.rows_ != b.rows_ || a.cols_ != b.cols_ ||
        a.samples_.size() != b.samples_.size() || !(a.provenance_ == b.provenance_)) {
      return false;
    }
    for (std::size_t i = 0; i < a.samples_.size(); ++i) {
      if (a.samples_[i] != b.samples_[i]) {
        return false;
      }
    }
    return true;
  }

private:
  Domain domain_;
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<ComplexMatrix> samples_;
  Provenance provenance_;
};

inline void require_domain(const Dataset& ds, Domain expected, std::string_view what) {
  if (ds.domain() != expected) {
    throw InvalidInput(std::string(what) + " needs a " + std::string(to_string(expected)) +
                       " dataset, got " + std::string(to_string(ds.domain())));
  }
}

} // namespace csiaug
