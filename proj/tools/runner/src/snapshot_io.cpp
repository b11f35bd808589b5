#include "dcdiff/cli/snapshot_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dcdiff/cli/csv.hpp"
#include "dcdiff/errors.hpp"

namespace dcdiff::cli {
namespace {

constexpr char kMagic[5] = {'D', 'C', 'W', 'F', '1'};
constexpr std::size_t kHeaderBytes = 5 + 4 * 4 + 4 * 8;

template <class T>
void put(std::string& buf, T v) {
  auto bits = std::bit_cast<std::array<char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  buf.append(bits.data(), bits.size());
}

template <class T>
T get(const char*& p) {
  std::array<char, sizeof(T)> bits;
  std::memcpy(bits.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  p += sizeof(T);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_dcwf(const std::filesystem::path& path, const SnapshotHeader& h, std::span<const Spinor4> data) {
  const std::size_t expected = std::size_t{h.n_t} * h.n_r * h.n_theta;
  if (data.size() != expected) throw ArgumentError("write_dcwf: data size does not match the header");
  std::string buf;
  buf.reserve(kHeaderBytes + expected * 64);
  buf.append(kMagic, 5);
  put(buf, h.n_t);
  put(buf, h.n_r);
  put(buf, h.n_theta);
  put(buf, h.k_max);
  put(buf, h.Z);
  put(buf, h.m);
  put(buf, h.h);
  put(buf, h.r0);
  for (const Spinor4& s : data) {
    for (int c = 0; c < 4; ++c) {
      put(buf, s(c).real());
      put(buf, s(c).imag());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("short write on " + path.string());
}

SnapshotFile read_dcwf(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DependencyError("missing snapshot file " + path.string());
  std::ifstream in(path, std::ios::binary);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), kMagic, 5) != 0) {
    throw std::runtime_error(path.string() + ": not a DCWF1 file");
  }
  const char* p = buf.data() + 5;
  SnapshotFile f;
  f.header.n_t = get<std::uint32_t>(p);
  f.header.n_r = get<std::uint32_t>(p);
  f.header.n_theta = get<std::uint32_t>(p);
  f.header.k_max = get<std::uint32_t>(p);
  f.header.Z = get<double>(p);
  f.header.m = get<double>(p);
  f.header.h = get<double>(p);
  f.header.r0 = get<double>(p);
  const std::size_t n = std::size_t{f.header.n_t} * f.header.n_r * f.header.n_theta;
  if (buf.size() != kHeaderBytes + n * 64) throw std::runtime_error(path.string() + ": truncated DCWF1 payload");
  f.data.resize(n);
  for (Spinor4& s : f.data) {
    for (int c = 0; c < 4; ++c) {
      const double re = get<double>(p);
      const double im = get<double>(p);
      s(c) = cplx{re, im};
    }
  }
  return f;
}

void write_snapshot_grid(const std::filesystem::path& path, const SnapshotGrid& g) {
  CsvWriter csv(path, {"axis", "index", "value"});
  auto emit = [&](const char* axis, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) csv.row(axis, i, v[i]);
  };
  emit("t", g.times);
  emit("r", g.radii);
  emit("theta", g.angles);
}

SnapshotGrid read_snapshot_grid(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DependencyError("missing snapshot grid file " + path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  if (line != "axis,index,value") throw std::runtime_error(path.string() + ": unexpected header");
  SnapshotGrid g;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string axis, index, value;
    if (!std::getline(ls, axis, ',') || !std::getline(ls, index, ',') || !std::getline(ls, value)) {
      throw std::runtime_error(path.string() + ": malformed row");
    }
    std::vector<double>* dst = axis == "t" ? &g.times : axis == "r" ? &g.radii : axis == "theta" ? &g.angles : nullptr;
    if (!dst || std::stoul(index) != dst->size()) throw std::runtime_error(path.string() + ": malformed row");
    dst->push_back(std::stod(value));
  }
  return g;
}

std::string image_suffix(AngularImage img) {
  switch (img) {
    case AngularImage::field:
      return "";
    case AngularImage::laplacian:
      return ".laplacian";
    case AngularImage::laplacian2:
      return ".laplacian2";
    case AngularImage::kappa_op:
      return ".kappa";
    case AngularImage::kappa_op2:
      return ".kappa2";
  }
  return "";
}

std::vector<std::filesystem::path> write_field(const std::filesystem::path& dir, const std::string& stem,
                                               const SpacetimeField& field) {
  SnapshotHeader h;
  h.n_t = static_cast<std::uint32_t>(field.times.size());
  h.n_r = static_cast<std::uint32_t>(field.radii.size());
  h.n_theta = static_cast<std::uint32_t>(field.angles.size());
  h.k_max = static_cast<std::uint32_t>(field.k_max);
  h.Z = field.params.Z;
  h.m = field.params.m;
  h.h = field.source.h;
  h.r0 = field.source.r0;
  std::vector<std::filesystem::path> written;
  for (int i = 0; i < kAngularImages; ++i) {
    const auto img = static_cast<AngularImage>(i);
    written.push_back(dir / (stem + image_suffix(img) + ".dcwf"));
    write_dcwf(written.back(), h, field.image(img));
  }
  written.push_back(dir / (stem + ".grid.csv"));
  write_snapshot_grid(written.back(), {field.times, field.radii, field.angles});
  return written;
}

SpacetimeField read_field(const std::filesystem::path& dir, const std::string& stem, const SimulationRequest& req) {
  const SnapshotGrid g = read_snapshot_grid(dir / (stem + ".grid.csv"));
  SpacetimeField field;
  field.source = req.source;
  field.params = req.params;
  field.grid = req.grid;
  field.k_max = req.k_max;
  field.dt = req.dt;
  field.smoothing_power = req.smoothing_power;
  field.times = g.times;
  field.radii = g.radii;
  field.angles = g.angles;
  auto stale = [&](const std::string& what) {
    throw DependencyError(stem + ": artifacts do not match the configuration (" + what + "); rerun simulate");
  };
  if (field.radii.size() != static_cast<std::size_t>(req.grid->n() - 1)) stale("radial grid");
  for (std::size_t i = 0; i < field.radii.size(); ++i) {
    if (std::abs(field.radii[i] - req.grid->node(static_cast<int>(i) + 1)) > 1e-12 * req.grid->r_max()) {
      stale("radial grid");
    }
  }
  if (field.angles.size() != req.probe_angles.size()) stale("probe directions");
  for (std::size_t q = 0; q < field.angles.size(); ++q) {
    if (std::abs(field.angles[q] - req.probe_angles[q]) > 1e-12) stale("probe directions");
  }
  if (field.times.size() != req.times.size()) stale("snapshot times");
  for (std::size_t k = 0; k < field.times.size(); ++k) {
    const long n = std::lround(field.times[k] / req.dt);
    if (std::abs(field.times[k] - req.times[k]) > 0.5 * req.dt) stale("snapshot times");
    field.steps.push_back(static_cast<int>(n));
  }
  field.allocate();
  field.mass.assign(field.times.size(), std::nullopt);
  for (int i = 0; i < kAngularImages; ++i) {
    const auto img = static_cast<AngularImage>(i);
    SnapshotFile f = read_dcwf(dir / (stem + image_suffix(img) + ".dcwf"));
    const SnapshotHeader& h = f.header;
    if (h.n_t != field.times.size() || h.n_r != field.radii.size() || h.n_theta != field.angles.size()) {
      stale("array shape");
    }
    if (h.k_max != static_cast<std::uint32_t>(req.k_max) || h.Z != req.params.Z || h.m != req.params.m ||
        h.h != req.source.h || h.r0 != req.source.r0) {
      stale("header");
    }
    field.image(img) = std::move(f.data);
  }
  return field;
}

}  // namespace dcdiff::cli
