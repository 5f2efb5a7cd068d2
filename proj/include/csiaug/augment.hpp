#pragma once

// Amplitude-domain augmentation of angular-delay CSI.
//
// Bubble-shift moves each column's delay profile by up to S bins: a circular
// shift followed by a bubble repair of the wrapped element, so no new values
// are created and every column stays a permutation of its input.
// Random-generation redraws a k x k block on the row of the global maximum.
// The model-driven baseline shifts amplitudes circularly and replaces phase
// with uniform noise.
//
// Rows are 0-indexed. Argmax ties resolve to the smallest row index (column
// scans) or the first entry in row-major order (global scans).

#include "csiaug/core.hpp"
#include "csiaug/parallel.hpp"
#include "csiaug/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace csiaug {

namespace detail {

inline std::size_t argmax(std::span<const double> col) {
  return static_cast<std::size_t>(std::max_element(col.begin(), col.end()) - col.begin());
}

} // namespace detail

/// In place. min(S, M) iterations of: rotate up one step, then lift the
/// wrapped bottom element while it exceeds its upper neighbour.
inline void bubble_shift_up_column(std::span<double> col, std::uint32_t shift) {
  if (col.size() < 2) {
    return;
  }
  const std::size_t steps = std::min<std::size_t>(shift, detail::argmax(col));
  for (std::size_t step = 0; step < steps; ++step) {
    std::rotate(col.begin(), col.begin() + 1, col.end());
    for (std::size_t k = col.size() - 1; k >= 1 && col[k] > col[k - 1]; --k) {
      std::swap(col[k], col[k - 1]);
    }
  }
}

/// In place. min(S, Na-1-M) iterations of: rotate down one step, then for K
/// from the bottom row upward, while top < col[K] < second row, exchange
/// col[K] with the top element. The comparison always reads the current
/// top two rows.
inline void bubble_shift_down_column(std::span<double> col, std::uint32_t shift) {
  if (col.size() < 2) {
    return;
  }
  const std::size_t last = col.size() - 1;
  const std::size_t steps = std::min<std::size_t>(shift, last - detail::argmax(col));
  for (std::size_t step = 0; step < steps; ++step) {
    std::rotate(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(last), col.end());
    for (std::size_t k = last; k >= 1 && col[0] < col[k] && col[k] < col[1]; --k) {
      std::swap(col[k], col[0]);
    }
  }
}

namespace detail {

template <typename ColumnOp>
AmplitudeMatrix per_column(const AmplitudeMatrix& amp, ColumnOp&& op) {
  RealMatrix out = amp.values();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    op(std::span<double>(out.col(c).data(), static_cast<std::size_t>(out.rows())));
  }
  return AmplitudeMatrix(std::move(out));
}

} // namespace detail

inline AmplitudeMatrix bubble_shift_up(const AmplitudeMatrix& amp, std::uint32_t shift) {
  return detail::per_column(amp, [shift](std::span<double> col) { bubble_shift_up_column(col, shift); });
}

inline AmplitudeMatrix bubble_shift_down(const AmplitudeMatrix& amp, std::uint32_t shift) {
  return detail::per_column(amp, [shift](std::span<double> col) { bubble_shift_down_column(col, shift); });
}

/// Inclusive index range of a k-wide block around center, clipped to [0, n).
struct BlockSpan {
  Eigen::Index first;
  Eigen::Index last;
};

inline BlockSpan block_span(Eigen::Index center, std::uint32_t k, Eigen::Index n) {
  const Eigen::Index before = (static_cast<Eigen::Index>(k) - 1) / 2;
  const Eigen::Index first = center - before;
  const Eigen::Index last = first + static_cast<Eigen::Index>(k) - 1;
  return {std::max<Eigen::Index>(first, 0), std::min<Eigen::Index>(last, n - 1)};
}

struct RgBlock {
  BlockSpan rows;
  BlockSpan cols;
};

/// Block chosen by random_generation for this (amp, k, seed); the first draw
/// of the generator picks the center column.
inline RgBlock random_generation_block(const AmplitudeMatrix& amp, std::uint32_t k, Xoshiro256& rng) {
  const RealMatrix& v = amp.values();
  Eigen::Index max_row = 0;
  double best = v(0, 0);
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      if (v(r, c) > best) {
        best = v(r, c);
        max_row = r;
      }
    }
  }
  const auto center_col = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(v.cols())));
  return {block_span(max_row, k, v.rows()), block_span(center_col, k, v.cols())};
}

/// Redraws the clipped k x k block centred on (row of global max, uniformly
/// drawn column) with i.i.d. U[min, max] of the input. Block entries are drawn
/// in row-major order after the column draw.
inline AmplitudeMatrix random_generation(const AmplitudeMatrix& amp, std::uint32_t k, std::uint64_t seed) {
  if (k < 1) {
    throw InvalidInput("random generation needs block size k >= 1");
  }
  if (amp.rows() < 1 || amp.cols() < 1) {
    throw InvalidInput("random generation needs a non-empty matrix");
  }
  Xoshiro256 rng(seed);
  const RgBlock block = random_generation_block(amp, k, rng);
  const double lo = amp.values().minCoeff();
  const double hi = amp.values().maxCoeff();
  RealMatrix out = amp.values();
  for (Eigen::Index r = block.rows.first; r <= block.rows.last; ++r) {
    for (Eigen::Index c = block.cols.first; c <= block.cols.last; ++c) {
      out(r, c) = std::clamp(rng.uniform(lo, hi), lo, hi);
    }
  }
  return AmplitudeMatrix(std::move(out));
}

/// Model-driven baseline: plain circular shift by S (mod Na) per column, and
/// phase replaced by i.i.d. U[-pi, pi) in column-major order.
inline Polar md_baseline(const AmplitudeMatrix& amp, const PhaseMatrix& phase, std::uint32_t shift,
                         ShiftDirection direction, std::uint64_t seed) {
  if (amp.rows() != phase.rows() || amp.cols() != phase.cols()) {
    throw ShapeMismatch("amplitude and phase shapes differ");
  }
  const Eigen::Index rows = amp.rows();
  RealMatrix shifted(rows, amp.cols());
  const Eigen::Index s = rows > 0 ? static_cast<Eigen::Index>(shift % static_cast<std::uint64_t>(rows)) : 0;
  for (Eigen::Index c = 0; c < amp.cols(); ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index src = direction == ShiftDirection::Up ? (r + s) % rows : (r - s + rows) % rows;
      shifted(r, c) = amp(src, c);
    }
  }
  Xoshiro256 rng(seed);
  RealMatrix noise(phase.rows(), phase.cols());
  for (Eigen::Index i = 0; i < noise.size(); ++i) {
    const double draw = rng.uniform(-std::numbers::pi, std::numbers::pi);
    noise.data()[i] = draw < std::numbers::pi ? draw : -std::numbers::pi;
  }
  return {AmplitudeMatrix(std::move(shifted)), PhaseMatrix(std::move(noise))};
}

/// Applies params to one amplitude/phase pair. Phase passes through untouched
/// for the bubble-shift and random-generation methods.
inline Polar augment_polar(const Polar& in, const AugmentParams& params, std::uint64_t seed) {
  switch (params.method) {
  case AugmentMethod::BsUp: return {bubble_shift_up(in.amplitude, params.shift), in.phase};
  case AugmentMethod::BsDown: return {bubble_shift_down(in.amplitude, params.shift), in.phase};
  case AugmentMethod::Rg: return {random_generation(in.amplitude, params.block, seed), in.phase};
  case AugmentMethod::MdBaseline:
    return md_baseline(in.amplitude, in.phase, params.shift, params.direction, seed);
  }
  throw InvalidInput("unknown augmentation method");
}

inline AngularDelayMatrix augment_sample(const AngularDelayMatrix& ha, const AugmentParams& params,
                                         std::uint64_t seed) {
  const Polar out = augment_polar(decompose(ha), params, seed);
  return recompose(out.amplitude, out.phase);
}

/// Builds one augmented copy per sample by applying steps in order (step s on
/// sample i is seeded with derive_seed(steps[s].seed, i)). Append keeps the
/// originals first, followed by the augmented copies.
inline Dataset augment_dataset(const Dataset& ds, const std::vector<AugmentParams>& steps, AugmentMode mode) {
  require_domain(ds, Domain::AngularDelay, "augmentation");
  if (steps.empty()) {
    throw InvalidInput("augmentation needs at least one step");
  }
  for (const auto& step : steps) {
    step.validate();
  }
  std::vector<ComplexMatrix> augmented(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) {
    Polar current = decompose(AngularDelayMatrix(ds.sample(i)));
    for (const auto& step : steps) {
      current = augment_polar(current, step, derive_seed(step.seed, i));
    }
    augmented[i] = recompose(current.amplitude, current.phase).values();
  });

  std::vector<ComplexMatrix> out;
  if (mode == AugmentMode::Append) {
    out.reserve(2 * ds.size());
    out.insert(out.end(), ds.samples().begin(), ds.samples().end());
    std::move(augmented.begin(), augmented.end(), std::back_inserter(out));
  } else {
    out = std::move(augmented);
  }
  Provenance provenance = ds.provenance();
  for (std::size_t s = 0; s < steps.size(); ++s) {
    provenance = provenance.with_augmentation({steps[s], mode, s > 0});
  }
  return Dataset(Domain::AngularDelay, ds.rows(), ds.cols(), std::move(out), std::move(provenance));
}

inline Dataset augment_dataset(const Dataset& ds, const AugmentParams& params, AugmentMode mode) {
  return augment_dataset(ds, std::vector<AugmentParams>{params}, mode);
}

} // namespace csiaug
