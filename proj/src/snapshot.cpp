#include "cdafem/snapshot.hpp"

#include <cmath>
#include <stdexcept>

namespace cdafem {

namespace {

constexpr char kMagic[] = "cda-snap v1\n";

template <typename T>
void write_le(std::ofstream& out, T v) {
  static_assert(sizeof(T) == 8);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_le(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

SnapshotWriter::SnapshotWriter(const std::string& path, const FeSpace& space, double dt)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw std::runtime_error("SnapshotWriter: cannot open " + path);
  header_.n_dofs = space.n_dofs;
  header_.degree = space.degree;
  header_.components = space.components;
  header_.mesh_hash = space.mesh->hash();
  header_.dt = dt;
  out_.write(kMagic, sizeof(kMagic) - 1);
  write_le(out_, header_.n_dofs);
  write_le(out_, header_.degree);
  write_le(out_, header_.components);
  write_le(out_, header_.mesh_hash);
  write_le(out_, header_.dt);
  count_pos_ = out_.tellp();
  write_le(out_, header_.n_records);
}

SnapshotWriter::~SnapshotWriter() {
  try {
    close();
  } catch (...) {
  }
}

void SnapshotWriter::append(const Eigen::VectorXd& state) {
  if (closed_) throw std::logic_error("SnapshotWriter: already closed");
  if (static_cast<std::uint64_t>(state.size()) != header_.n_dofs)
    throw std::invalid_argument("SnapshotWriter: state size mismatch");
  out_.write(reinterpret_cast<const char*>(state.data()),
             static_cast<std::streamsize>(sizeof(double) * state.size()));
  if (!out_) throw std::runtime_error("SnapshotWriter: write failed for " + path_);
  ++header_.n_records;
}

void SnapshotWriter::close() {
  if (closed_) return;
  closed_ = true;
  out_.seekp(count_pos_);
  write_le(out_, header_.n_records);
  out_.close();
  if (!out_) throw std::runtime_error("SnapshotWriter: close failed for " + path_);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
  char magic[sizeof(kMagic) - 1];
  in.read(magic, sizeof magic);
  if (!in || std::string(magic, sizeof magic) != kMagic)
    throw std::runtime_error("read_snapshot: bad magic in " + path);
  SnapshotData d;
  d.header.n_dofs = read_le<std::uint64_t>(in);
  d.header.degree = read_le<std::uint64_t>(in);
  d.header.components = read_le<std::uint64_t>(in);
  d.header.mesh_hash = read_le<std::uint64_t>(in);
  d.header.dt = read_le<double>(in);
  d.header.n_records = read_le<std::uint64_t>(in);
  d.states.resize(d.header.n_dofs, d.header.n_records);
  in.read(reinterpret_cast<char*>(d.states.data()),
          static_cast<std::streamsize>(sizeof(double) * d.states.size()));
  if (!in) throw std::runtime_error("read_snapshot: truncated file " + path);
  return d;
}

void SnapshotData::require_compatible(const FeSpace& space, double dt) const {
  if (header.n_dofs != static_cast<std::uint64_t>(space.n_dofs) ||
      header.degree != static_cast<std::uint64_t>(space.degree) ||
      header.components != static_cast<std::uint64_t>(space.components) ||
      header.mesh_hash != space.mesh->hash())
    throw std::invalid_argument("snapshot: space fingerprint mismatch");
  if (std::abs(header.dt - dt) > 1e-12)
    throw std::invalid_argument("snapshot: time step mismatch (stored " +
                                std::to_string(header.dt) + ", run " + std::to_string(dt) + ")");
}

}  // namespace cdafem
