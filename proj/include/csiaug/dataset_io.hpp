#pragma once

// CSIA dataset container (little-endian):
//
//   offset  size  field
//   0       4     magic "CSIA"
//   4       2     version (u16) = 1
//   6       1     domain (u8): 0 spatial-frequency, 1 angular-delay
//   7       1     reserved (u8) = 0
//   8       4     n_samples (u32)
//   12      4     rows (u32)
//   16      4     cols (u32)
//   20      ...   samples in order; each row-major, each entry real then
//                 imaginary as IEEE-754 binary32
//
// Provenance lives in "<path>.meta.json" so the binary stays trivial to emit
// from other tools. A missing sidecar is a warning, not an error.

#include "csiaug/core.hpp"
#include "csiaug/io_util.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace csiaug {

inline constexpr char kDatasetMagic[4] = {'C', 'S', 'I', 'A'};
inline constexpr std::uint16_t kDatasetVersion = 1;
inline constexpr std::size_t kDatasetHeaderSize = 20;

struct DatasetHeader {
  Domain domain = Domain::AngularDelay;
  std::uint32_t samples = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;

  std::uint64_t sample_bytes() const noexcept { return 8ULL * rows * cols; }

  /// Declared file length, saturated at UINT64_MAX (any header product fits in 128 bits).
  std::uint64_t file_bytes() const noexcept {
    const unsigned __int128 total =
        kDatasetHeaderSize + static_cast<unsigned __int128>(samples) * rows * cols * 8;
    return total > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(total);
  }
};

inline std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return path.string() + ".meta.json";
}

inline std::vector<std::uint8_t> encode_header(const DatasetHeader& h) {
  std::vector<std::uint8_t> out(kDatasetMagic, kDatasetMagic + 4);
  io::put_le<std::uint16_t>(out, kDatasetVersion);
  io::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(h.domain));
  io::put_le<std::uint8_t>(out, 0);
  io::put_le<std::uint32_t>(out, h.samples);
  io::put_le<std::uint32_t>(out, h.rows);
  io::put_le<std::uint32_t>(out, h.cols);
  return out;
}

/// Validates a 20-byte header; throws FormatError naming the offending offset.
inline DatasetHeader decode_header(const std::uint8_t* p) {
  if (!std::equal(kDatasetMagic, kDatasetMagic + 4, p)) {
    throw FormatError(0, "bad magic '" + std::string(p, p + 4) + "', expected 'CSIA'");
  }
  const auto version = io::get_le<std::uint16_t>(p + 4);
  if (version != kDatasetVersion) {
    throw FormatError(4, "unsupported version " + std::to_string(version));
  }
  const auto domain = p[6];
  if (domain > 1) {
    throw FormatError(6, "unknown domain tag " + std::to_string(domain));
  }
  if (p[7] != 0) {
    throw FormatError(7, "reserved byte must be zero");
  }
  DatasetHeader h;
  h.domain = static_cast<Domain>(domain);
  h.samples = io::get_le<std::uint32_t>(p + 8);
  h.rows = io::get_le<std::uint32_t>(p + 12);
  h.cols = io::get_le<std::uint32_t>(p + 16);
  if (h.samples > 0 && (h.rows == 0 || h.cols == 0)) {
    throw FormatError(12, "non-empty dataset with a zero dimension");
  }
  return h;
}

inline nlohmann::json sidecar_json(const DatasetHeader& h, const Provenance& p) {
  return {
      {"format", "csia"},
      {"version", kDatasetVersion},
      {"domain", to_string(h.domain)},
      {"samples", h.samples},
      {"rows", h.rows},
      {"cols", h.cols},
      {"provenance", to_json_value(p)},
  };
}

/// Streams samples into a CSIA file. Nothing appears at the destination until
/// commit(), which also writes the sidecar.
class DatasetWriter {
public:
  DatasetWriter(std::filesystem::path path, Domain domain, std::uint32_t rows, std::uint32_t cols,
                std::uint32_t samples, Provenance provenance)
      : path_(std::move(path)), header_{domain, samples, rows, cols}, provenance_(std::move(provenance)),
        file_(path_) {
    file_.write(encode_header(header_));
    buffer_.reserve(static_cast<std::size_t>(header_.sample_bytes()));
  }

  void write(const ComplexMatrix& sample) {
    if (sample.rows() != header_.rows || sample.cols() != header_.cols) {
      throw ShapeMismatch(path_.string() + ": sample is " + std::to_string(sample.rows()) + "x" +
                          std::to_string(sample.cols()) + ", file holds " + std::to_string(header_.rows) + "x" +
                          std::to_string(header_.cols));
    }
    if (written_ == header_.samples) {
      throw InvalidInput(path_.string() + ": more samples than declared");
    }
    buffer_.clear();
    for (Eigen::Index r = 0; r < sample.rows(); ++r) {
      for (Eigen::Index c = 0; c < sample.cols(); ++c) {
        io::put_le<float>(buffer_, static_cast<float>(sample(r, c).real()));
        io::put_le<float>(buffer_, static_cast<float>(sample(r, c).imag()));
      }
    }
    file_.write(buffer_);
    ++written_;
  }

  void commit() {
    if (written_ != header_.samples) {
      throw InvalidInput(path_.string() + ": wrote " + std::to_string(written_) + " of " +
                         std::to_string(header_.samples) + " declared samples");
    }
    io::write_file_atomic(sidecar_path(path_), sidecar_json(header_, provenance_).dump(2) + "\n");
    file_.commit();
  }

private:
  std::filesystem::path path_;
  DatasetHeader header_;
  Provenance provenance_;
  io::AtomicFile file_;
  std::vector<std::uint8_t> buffer_;
  std::uint32_t written_ = 0;
};

/// Sequential reader. The header and the exact file length are checked on
/// open, so reads never go past the declared extent.
class DatasetReader {
public:
  explicit DatasetReader(std::filesystem::path path) : path_(std::move(path)) {
    in_.open(path_, std::ios::binary);
    if (!in_) {
      throw IoError(path_.string(), "cannot open for reading");
    }
    std::error_code ec;
    const std::uint64_t actual = std::filesystem::file_size(path_, ec);
    if (ec) {
      throw IoError(path_.string(), "cannot stat: " + ec.message());
    }
    if (actual < kDatasetHeaderSize) {
      throw CorruptionError(path_.string(), kDatasetHeaderSize, actual);
    }
    std::uint8_t raw[kDatasetHeaderSize];
    in_.read(reinterpret_cast<char*>(raw), kDatasetHeaderSize);
    if (!in_) {
      throw IoError(path_.string(), "cannot read header");
    }
    header_ = decode_header(raw);
    if (actual != header_.file_bytes()) {
      throw CorruptionError(path_.string(), header_.file_bytes(), actual);
    }
    load_sidecar();
  }

  const DatasetHeader& header() const noexcept { return header_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool done() const noexcept { return read_ == header_.samples; }

  ComplexMatrix next() {
    if (done()) {
      throw InvalidInput(path_.string() + ": no more samples");
    }
    buffer_.resize(static_cast<std::size_t>(header_.sample_bytes()));
    in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
    if (!in_) {
      throw IoError(path_.string(), "read failed at sample " + std::to_string(read_));
    }
    ComplexMatrix sample(header_.rows, header_.cols);
    const std::uint8_t* p = buffer_.data();
    for (std::uint32_t r = 0; r < header_.rows; ++r) {
      for (std::uint32_t c = 0; c < header_.cols; ++c, p += 8) {
        sample(r, c) = Complex(io::get_le<float>(p), io::get_le<float>(p + 4));
      }
    }
    if (!all_finite(sample)) {
      throw InvalidInput(path_.string() + ": sample " + std::to_string(read_) + " has a non-finite entry");
    }
    ++read_;
    return sample;
  }

private:
  void load_sidecar() {
    const auto meta = sidecar_path(path_);
    if (!std::filesystem::exists(meta)) {
      warnings_.push_back(path_.string() + ": no metadata sidecar, provenance left empty");
      return;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_text(meta));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(0, meta.string() + ": " + e.what());
    }
    if (j.value("domain", std::string(to_string(header_.domain))) != to_string(header_.domain) ||
        j.value("samples", header_.samples) != header_.samples) {
      warnings_.push_back(meta.string() + ": sidecar disagrees with the binary header");
    }
    try {
      provenance_ = provenance_from_json(j.value("provenance", nlohmann::json::object()));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(0, meta.string() + ": " + e.what());
    }
  }

  std::filesystem::path path_;
  std::ifstream in_;
  DatasetHeader header_;
  Provenance provenance_;
  std::vector<std::string> warnings_;
  std::vector<std::uint8_t> buffer_;
  std::uint32_t read_ = 0;
};

inline void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  if (ds.size() > UINT32_MAX) {
    throw InvalidInput("dataset too large for the container");
  }
  DatasetWriter writer(path, ds.domain(), static_cast<std::uint32_t>(ds.rows()),
                       static_cast<std::uint32_t>(ds.cols()), static_cast<std::uint32_t>(ds.size()),
                       ds.provenance());
  for (const auto& s : ds.samples()) {
    writer.write(s);
  }
  writer.commit();
}

/// Warnings go to *warnings when given, otherwise to stderr.
inline Dataset read_dataset(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr) {
  DatasetReader reader(path);
  for (const auto& w : reader.warnings()) {
    if (warnings) {
      warnings->push_back(w);
    } else {
      std::cerr << "warning: " << w << "\n";
    }
  }
  std::vector<ComplexMatrix> samples;
  samples.reserve(reader.header().samples);
  while (!reader.done()) {
    samples.push_back(reader.next());
  }
  return Dataset(reader.header().domain, reader.header().rows, reader.header().cols, std::move(samples),
                 reader.provenance());
}

/// Rounds every entry through binary32, i.e. what a write/read cycle yields.
inline Dataset quantize(const Dataset& ds) {
  std::vector<ComplexMatrix> out;
  out.reserve(ds.size());
  for (const auto& s : ds.samples()) {
    ComplexMatrix q(s.rows(), s.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const Complex z = s.data()[i];
      q.data()[i] = Complex(static_cast<float>(z.real()), static_cast<float>(z.imag()));
    }
    out.push_back(std::move(q));
  }
  return Dataset(ds.domain(), ds.rows(), ds.cols(), std::move(out), ds.provenance());
}

} // namespace csiaug
