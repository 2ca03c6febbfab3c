#include "zmhd/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace zmhd {
namespace {

constexpr char kMagic[4] = {'M', 'H', 'D', 'F'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: unexpected end of file");
  return to_little(v);
}

}  // namespace

const ScalarField& Snapshot::field(const std::string& name) const {
  for (const auto& [n, f] : fields) {
    if (n == name) return f;
  }
  throw std::runtime_error("snapshot: missing field '" + name + "'");
}

void write_snapshot(const Snapshot& snap, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put<std::uint32_t>(os, Snapshot::kVersion);
  for (int a = 0; a < 3; ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(snap.grid.dim(a)));
  for (int a = 0; a < 3; ++a) put<double>(os, snap.grid.length(a));
  put<double>(os, snap.time);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(snap.fields.size()));
  for (const auto& [name, f] : snap.fields) {
    require_same_grid(snap.grid, f.grid(), "write_snapshot");
    put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    for (double v : f.values()) put<double>(os, v);
  }
  if (!os) throw std::runtime_error("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("snapshot: bad magic in " + path.string());
  }
  const auto version = get<std::uint32_t>(is);
  if (version != Snapshot::kVersion) {
    throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
  }
  std::array<int, 3> dims{};
  std::array<double, 3> lengths{};
  for (auto& d : dims) d = static_cast<int>(get<std::uint32_t>(is));
  for (auto& l : lengths) l = get<double>(is);
  Snapshot snap{Grid(dims, lengths), get<double>(is), {}};
  const auto count = get<std::uint32_t>(is);
  for (std::uint32_t f = 0; f < count; ++f) {
    const auto len = get<std::uint32_t>(is);
    std::string name(len, '\0');
    is.read(name.data(), len);
    std::vector<double> values(snap.grid.size());
    for (double& v : values) v = get<double>(is);
    snap.fields.emplace_back(std::move(name), ScalarField(snap.grid, std::move(values)));
  }
  return snap;
}

Snapshot to_snapshot(const State& s) {
  Snapshot snap{s.grid(), s.t, {}};
  snap.fields.emplace_back("rho", s.rho);
  for (int c = 0; c < 3; ++c) snap.fields.emplace_back("u" + std::to_string(c + 1), s.u[c]);
  for (int c = 0; c < 3; ++c) snap.fields.emplace_back("H" + std::to_string(c + 1), s.H[c]);
  return snap;
}

State from_snapshot(const Snapshot& snap) {
  auto vec = [&](const char* prefix) {
    return VectorField(snap.field(std::string(prefix) + "1"), snap.field(std::string(prefix) + "2"),
                       snap.field(std::string(prefix) + "3"));
  };
  return State(snap.field("rho"), vec("u"), vec("H"), snap.time);
}

void save_snapshot(const State& s, const std::filesystem::path& path) { write_snapshot(to_snapshot(s), path); }

State load_snapshot(const std::filesystem::path& path) { return from_snapshot(read_snapshot(path)); }

}  // namespace zmhd
