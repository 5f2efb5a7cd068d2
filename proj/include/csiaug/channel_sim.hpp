#pragma once

// Synthetic multipath channels for train/test delay-gap experiments.
//
//   H[n][a] = sum_l g_l e^{j phi_l} e^{-j2 pi n tau_l / Nc} e^{-j pi a sin(theta_l)}
//
// tau_l ~ U[delay_min, delay_max), theta_l ~ U[angle_min, angle_max),
// phi_l ~ U[-pi, pi), g_l = e^{-gain_decay (l-1)}. Draws per path in the
// order tau, theta, phi. Sample i is seeded with derive_seed(spec.seed, i),
// so any sample can be regenerated on its own.

#include "csiaug/core.hpp"
#include "csiaug/parallel.hpp"
#include "csiaug/rng.hpp"
#include "csiaug/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace csiaug {

struct PathDraw {
  double delay;
  double angle;
  double phase;
  double gain;
};

inline std::vector<PathDraw> draw_paths(const ScenarioSpec& spec, Xoshiro256& rng) {
  std::vector<PathDraw> paths(spec.paths);
  for (std::uint32_t l = 0; l < spec.paths; ++l) {
    paths[l].delay = rng.uniform(spec.delay_min, spec.delay_max);
    paths[l].angle = rng.uniform(spec.angle_min, spec.angle_max);
    paths[l].phase = rng.uniform(-std::numbers::pi, std::numbers::pi);
    paths[l].gain = std::exp(-spec.gain_decay * static_cast<double>(l));
  }
  return paths;
}

/// Frequency response of explicit paths on an Nc x Nt grid.
inline ChannelMatrix synthesize_channel(std::uint32_t nc, std::uint32_t nt, const std::vector<PathDraw>& paths) {
  const auto count = static_cast<Eigen::Index>(paths.size());
  ComplexMatrix freq(nc, count);
  ComplexMatrix array(count, nt);
  for (Eigen::Index l = 0; l < count; ++l) {
    const PathDraw& p = paths[static_cast<std::size_t>(l)];
    const Complex coeff = p.gain * Complex(std::cos(p.phase), std::sin(p.phase));
    for (std::uint32_t n = 0; n < nc; ++n) {
      // n*tau reduced mod Nc keeps the phase argument small for large n.
      const double cycles = std::fmod(static_cast<double>(n) * p.delay, static_cast<double>(nc)) / nc;
      const double angle = -2.0 * std::numbers::pi * cycles;
      freq(n, l) = coeff * Complex(std::cos(angle), std::sin(angle));
    }
    const double spatial = std::sin(p.angle);
    for (std::uint32_t a = 0; a < nt; ++a) {
      const double angle = -std::numbers::pi * static_cast<double>(a) * spatial;
      array(l, a) = Complex(std::cos(angle), std::sin(angle));
    }
  }
  ComplexMatrix h(nc, nt);
  h.noalias() = freq * array;
  return ChannelMatrix(std::move(h));
}

inline ChannelMatrix sample_channel(const ScenarioSpec& spec, Xoshiro256& rng) {
  spec.validate();
  return synthesize_channel(spec.nc, spec.nt, draw_paths(spec, rng));
}

inline ChannelMatrix sample_channel_at(const ScenarioSpec& spec, std::uint64_t index) {
  Xoshiro256 rng(derive_seed(spec.seed, index));
  return sample_channel(spec, rng);
}

inline Dataset generate_dataset(const ScenarioSpec& spec, std::size_t count) {
  spec.validate();
  std::vector<ComplexMatrix> samples(count);
  parallel_for(count, [&](std::size_t i) { samples[i] = sample_channel_at(spec, i).values(); });
  return Dataset(Domain::SpatialFrequency, spec.nc, spec.nt, std::move(samples), Provenance(spec, spec.seed));
}

} // namespace csiaug
