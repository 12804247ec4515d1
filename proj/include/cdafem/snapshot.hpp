#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <fstream>
#include <string>

#include "cdafem/fe_space.hpp"

namespace cdafem {

/// Trajectory file: text line "cda-snap v1", then little-endian binary
/// fields n_dofs, degree, components, mesh_hash (u64), dt (f64),
/// n_records (u64), followed by n_records blocks of n_dofs f64 values.
struct SnapshotHeader {
  std::uint64_t n_dofs = 0;
  std::uint64_t degree = 0;
  std::uint64_t components = 0;
  std::uint64_t mesh_hash = 0;
  double dt = 0;
  std::uint64_t n_records = 0;
};

class SnapshotWriter {
 public:
  SnapshotWriter(const std::string& path, const FeSpace& space, double dt);
  ~SnapshotWriter();
  void append(const Eigen::VectorXd& state);
  void close();  // patches the record count into the header

 private:
  std::ofstream out_;
  std::string path_;
  SnapshotHeader header_;
  std::streampos count_pos_;
  bool closed_ = false;
};

/// Whole trajectory in memory; column n holds the state at step n.
struct SnapshotData {
  SnapshotHeader header;
  Eigen::MatrixXd states;

  /// Rejects a fingerprint mismatch against the consuming space, and a
  /// time-step mismatch against the consuming run.
  void require_compatible(const FeSpace& space, double dt) const;
};

SnapshotData read_snapshot(const std::string& path);

}  // namespace cdafem
