#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gyro/jones.hpp"

namespace gyro {

enum class FloquetMode { TE, TM };  // TE is y-polarized, TM is x-polarized

// Row/column position of (Floquet port, mode) in the 4x4 ordering
// (port1:TE, port1:TM, port2:TE, port2:TM).
constexpr int floquet_index(int port, FloquetMode mode) {
  return (port - 1) * 2 + (mode == FloquetMode::TM ? 1 : 0);
}

// Scattering matrix of a unit cell for the first TE/TM Floquet pair.
// Rows are scattered waves (c_TE, c_TM, d_TE, d_TM), columns incident
// waves (a_TE, a_TM, b_TE, b_TM). Entries are always finite.
class FloquetSMatrix {
 public:
  using Matrix = Eigen::Matrix4cd;

  FloquetSMatrix() : s_(Matrix::Zero()) {}
  explicit FloquetSMatrix(const Matrix& s);

  static FloquetSMatrix identity() { return FloquetSMatrix(Matrix::Identity()); }
  // Lossless matched line: each face's waves pass straight to the other face.
  static FloquetSMatrix perfect_thru();

  const Matrix& matrix() const noexcept { return s_; }
  Complex operator()(int row, int col) const { return s_(row, col); }

 private:
  Matrix s_;
};

// A two-face network with two modes per face, laid out exactly like a
// FloquetSMatrix: indices {0,1} are the left face, {2,3} the right face.
using SBlock2Port = FloquetSMatrix;

class FloquetSweep {
 public:
  FloquetSweep(std::vector<double> frequencies_hz, std::vector<FloquetSMatrix> matrices,
               std::string source = {});

  std::size_t size() const noexcept { return frequencies_.size(); }
  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<FloquetSMatrix>& matrices() const noexcept { return matrices_; }
  const FloquetSMatrix& at(std::size_t i) const { return matrices_.at(i); }
  const std::string& source() const noexcept { return source_; }

  // Entrywise linear interpolation of the S-matrix at `f_hz`, clamped to
  // the sweep's range.
  FloquetSMatrix interpolate(double f_hz) const;

 private:
  std::vector<double> frequencies_;
  std::vector<FloquetSMatrix> matrices_;
  std::string source_;
};

// Reflection/transmission blocks of a FloquetSMatrix, re-indexed from the
// (TE=y, TM=x) storage order into (x, y) Jones order.
struct BlockDecomposition {
  JonesMatrix r1;   // reflection at port 1
  JonesMatrix r2;   // reflection at port 2
  JonesMatrix t12;  // wave leaving port 2, received at port 1
  JonesMatrix t21;  // wave leaving port 1, received at port 2
};

BlockDecomposition decompose_blocks(const FloquetSMatrix& s);
FloquetSMatrix reassemble(const BlockDecomposition& blocks);

// max |S - S^T| over all entries; zero for a reciprocal network.
double reciprocity_defect(const FloquetSMatrix& s);
double reciprocity_defect(const Eigen::MatrixXcd& s);

// Interior feedback matrices with a condition estimate above this are
// treated as singular by cascade().
inline constexpr double kCascadeConditionLimit = 1e12;

// Redheffer star product: the right face of `a` is connected to the left
// face of `b`. Throws CascadeSingular (tagged with `frequency_hz`) when the
// interior feedback I - a_R * b_L cannot be inverted reliably.
SBlock2Port cascade(const SBlock2Port& a, const SBlock2Port& b, double frequency_hz = 0.0);

}  // namespace gyro
