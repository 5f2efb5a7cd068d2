#pragma once

// Spatial-frequency <-> angular-delay transform.
//
//   H' = Fc * H * Ft^H,   Ha = first Na rows of H'
//
// Fc[d][n] = e^{+j2*pi*d*n/Nc} / sqrt(Nc)   (row = delay bin d)
// Ft[a][m] = e^{-j2*pi*a*m/Nt} / sqrt(Nt)
//
// With this sign choice a response e^{-j2*pi*n*tau/Nc} lands in row tau. Both
// transforms are unitary, so Frobenius energy is preserved when Na == Nc.

#include "csiaug/core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace csiaug {

class DftPlan {
public:
  DftPlan(std::uint32_t nc, std::uint32_t nt, std::uint32_t na) : nc_(nc), nt_(nt), na_(na) {
    if (nc < 1 || nt < 1) {
      throw InvalidInput("DFT plan needs nc >= 1 and nt >= 1");
    }
    if (na < 1 || na > nc) {
      throw InvalidInput("truncation na=" + std::to_string(na) + " outside [1, " + std::to_string(nc) + "]");
    }
    const std::vector<Complex> roots_c = roots(nc);
    const std::vector<Complex> roots_t = roots(nt);
    const double sc = 1.0 / std::sqrt(static_cast<double>(nc));
    const double st = 1.0 / std::sqrt(static_cast<double>(nt));

    delay_rows_.resize(na, nc);
    delay_rows_inv_.resize(nc, na);
    for (std::uint32_t d = 0; d < na; ++d) {
      for (std::uint32_t n = 0; n < nc; ++n) {
        const Complex w = roots_c[(static_cast<std::uint64_t>(d) * n) % nc] * sc;
        delay_rows_(d, n) = w;
        delay_rows_inv_(n, d) = std::conj(w);
      }
    }
    angle_.resize(nt, nt);
    angle_h_.resize(nt, nt);
    for (std::uint32_t a = 0; a < nt; ++a) {
      for (std::uint32_t m = 0; m < nt; ++m) {
        const Complex w = std::conj(roots_t[(static_cast<std::uint64_t>(a) * m) % nt]) * st;
        angle_(a, m) = w;
        angle_h_(m, a) = std::conj(w);
      }
    }
  }

  std::uint32_t nc() const noexcept { return nc_; }
  std::uint32_t nt() const noexcept { return nt_; }
  std::uint32_t na() const noexcept { return na_; }

  /// First Na rows of Fc (Na x Nc).
  const ComplexMatrix& delay_rows() const noexcept { return delay_rows_; }
  /// Ft (Nt x Nt).
  const ComplexMatrix& angle() const noexcept { return angle_; }

  ComplexMatrix forward(const ComplexMatrix& h) const {
    if (h.rows() != nc_ || h.cols() != nt_) {
      throw ShapeMismatch("channel is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                          ", plan expects " + std::to_string(nc_) + "x" + std::to_string(nt_));
    }
    ComplexMatrix tmp(na_, nt_);
    tmp.noalias() = delay_rows_ * h;
    ComplexMatrix out(na_, nt_);
    out.noalias() = tmp * angle_h_;
    return out;
  }

  /// Zero-pads delay rows na..nc-1 and applies both inverse transforms.
  ComplexMatrix inverse(const ComplexMatrix& ha) const {
    if (ha.rows() != na_ || ha.cols() != nt_) {
      throw ShapeMismatch("angular-delay matrix is " + std::to_string(ha.rows()) + "x" +
                          std::to_string(ha.cols()) + ", plan expects " + std::to_string(na_) + "x" +
                          std::to_string(nt_));
    }
    ComplexMatrix tmp(nc_, nt_);
    tmp.noalias() = delay_rows_inv_ * ha;
    ComplexMatrix out(nc_, nt_);
    out.noalias() = tmp * angle_;
    return out;
  }

private:
  // e^{+j2*pi*k/n} for k in [0, n); index products are reduced mod n first.
  static std::vector<Complex> roots(std::uint32_t n) {
    std::vector<Complex> w(n);
    for (std::uint32_t k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
      w[k] = Complex(std::cos(angle), std::sin(angle));
    }
    return w;
  }

  std::uint32_t nc_;
  std::uint32_t nt_;
  std::uint32_t na_;
  ComplexMatrix delay_rows_;
  ComplexMatrix delay_rows_inv_;
  ComplexMatrix angle_;
  ComplexMatrix angle_h_;
};

inline AngularDelayMatrix to_angular_delay(const ChannelMatrix& h, const DftPlan& plan) {
  return AngularDelayMatrix(plan.forward(h.values()));
}

inline ChannelMatrix from_angular_delay(const AngularDelayMatrix& ha, std::uint32_t nc, const DftPlan& plan) {
  if (nc != plan.nc()) {
    throw ShapeMismatch("requested nc=" + std::to_string(nc) + " but plan has nc=" + std::to_string(plan.nc()));
  }
  return ChannelMatrix(plan.inverse(ha.values()));
}

/// Transforms every sample; provenance gains a forward-transform record.
inline Dataset to_angular_delay(const Dataset& ds, const DftPlan& plan) {
  require_domain(ds, Domain::SpatialFrequency, "forward transform");
  if (ds.rows() != plan.nc() || ds.cols() != plan.nt()) {
    throw ShapeMismatch("dataset is " + std::to_string(ds.rows()) + "x" + std::to_string(ds.cols()) +
                        ", plan expects " + std::to_string(plan.nc()) + "x" + std::to_string(plan.nt()));
  }
  std::vector<ComplexMatrix> out;
  out.reserve(ds.size());
  for (const auto& h : ds.samples()) {
    out.push_back(plan.forward(h));
  }
  return Dataset(Domain::AngularDelay, plan.na(), plan.nt(), std::move(out),
                 ds.provenance().with_transform({false, plan.nc(), plan.na()}));
}

inline Dataset from_angular_delay(const Dataset& ds, const DftPlan& plan) {
  require_domain(ds, Domain::AngularDelay, "inverse transform");
  if (ds.rows() != plan.na() || ds.cols() != plan.nt()) {
    throw ShapeMismatch("dataset is " + std::to_string(ds.rows()) + "x" + std::to_string(ds.cols()) +
                        ", plan expects " + std::to_string(plan.na()) + "x" + std::to_string(plan.nt()));
  }
  std::vector<ComplexMatrix> out;
  out.reserve(ds.size());
  for (const auto& ha : ds.samples()) {
    out.push_back(plan.inverse(ha));
  }
  return Dataset(Domain::SpatialFrequency, plan.nc(), plan.nt(), std::move(out),
                 ds.provenance().with_transform({true, plan.nc(), plan.na()}));
}

} // namespace csiaug
