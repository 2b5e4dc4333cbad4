#include "gyro/smatrix.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "gyro/errors.hpp"

namespace gyro {

JonesMatrix JonesMatrix::rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

bool JonesMatrix::is_finite() const {
  for (const Complex& z : {xx, xy, yx, yy}) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

FloquetSMatrix::FloquetSMatrix(const Matrix& s) : s_(s) {
  if (!s_.allFinite()) throw ValidationError("S-matrix contains non-finite entries");
}

FloquetSMatrix FloquetSMatrix::perfect_thru() {
  Matrix s = Matrix::Zero();
  s.topRightCorner<2, 2>().setIdentity();
  s.bottomLeftCorner<2, 2>().setIdentity();
  return FloquetSMatrix(s);
}

FloquetSweep::FloquetSweep(std::vector<double> frequencies_hz,
                           std::vector<FloquetSMatrix> matrices, std::string source)
    : frequencies_(std::move(frequencies_hz)),
      matrices_(std::move(matrices)),
      source_(std::move(source)) {
  if (frequencies_.empty()) throw ValidationError("sweep needs at least one frequency");
  if (frequencies_.size() != matrices_.size()) {
    throw ValidationError("sweep has " + std::to_string(frequencies_.size()) +
                          " frequencies but " + std::to_string(matrices_.size()) +
                          " matrices");
  }
  for (std::size_t i = 0; i < frequencies_.size(); ++i) {
    if (!std::isfinite(frequencies_[i])) throw ValidationError("non-finite frequency");
    if (i > 0 && !(frequencies_[i] > frequencies_[i - 1])) {
      throw ValidationError("sweep frequencies must be strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }
}

FloquetSMatrix FloquetSweep::interpolate(double f_hz) const {
  if (size() == 1 || f_hz <= frequencies_.front()) return matrices_.front();
  if (f_hz >= frequencies_.back()) return matrices_.back();
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(frequencies_.begin(), frequencies_.end(), f_hz) - frequencies_.begin());
  const std::size_t lo = hi - 1;
  const double w = (f_hz - frequencies_[lo]) / (frequencies_[hi] - frequencies_[lo]);
  return FloquetSMatrix((1.0 - w) * matrices_[lo].matrix() + w * matrices_[hi].matrix());
}

namespace {

// (y, x) storage -> (x, y) Jones order for the 2x2 block at (row, col).
JonesMatrix block_at(const FloquetSMatrix::Matrix& s, int row, int col) {
  return {s(row + 1, col + 1), s(row + 1, col), s(row, col + 1), s(row, col)};
}

void put_block(FloquetSMatrix::Matrix& s, int row, int col, const JonesMatrix& j) {
  s(row + 1, col + 1) = j.xx;
  s(row + 1, col) = j.xy;
  s(row, col + 1) = j.yx;
  s(row, col) = j.yy;
}

}  // namespace

BlockDecomposition decompose_blocks(const FloquetSMatrix& s) {
  const auto& m = s.matrix();
  return {block_at(m, 0, 0), block_at(m, 2, 2), block_at(m, 0, 2), block_at(m, 2, 0)};
}

FloquetSMatrix reassemble(const BlockDecomposition& blocks) {
  FloquetSMatrix::Matrix m;
  put_block(m, 0, 0, blocks.r1);
  put_block(m, 0, 2, blocks.t12);
  put_block(m, 2, 0, blocks.t21);
  put_block(m, 2, 2, blocks.r2);
  return FloquetSMatrix(m);
}

double reciprocity_defect(const Eigen::MatrixXcd& s) {
  if (s.rows() != s.cols()) throw ValidationError("reciprocity check needs a square matrix");
  if (s.size() == 0) return 0.0;
  return (s - s.transpose()).cwiseAbs().maxCoeff();
}

double reciprocity_defect(const FloquetSMatrix& s) {
  return (s.matrix() - s.matrix().transpose()).cwiseAbs().maxCoeff();
}

SBlock2Port cascade(const SBlock2Port& a, const SBlock2Port& b, double frequency_hz) {
  using M2 = Eigen::Matrix2cd;
  const auto& sa = a.matrix();
  const auto& sb = b.matrix();
  const M2 a11 = sa.topLeftCorner<2, 2>(), a12 = sa.topRightCorner<2, 2>();
  const M2 a21 = sa.bottomLeftCorner<2, 2>(), a22 = sa.bottomRightCorner<2, 2>();
  const M2 b11 = sb.topLeftCorner<2, 2>(), b12 = sb.topRightCorner<2, 2>();
  const M2 b21 = sb.bottomLeftCorner<2, 2>(), b22 = sb.bottomRightCorner<2, 2>();

  const M2 feedback_right = M2::Identity() - a22 * b11;
  const M2 feedback_left = M2::Identity() - b11 * a22;

  const Eigen::JacobiSVD<M2> svd(feedback_right);
  const auto& sv = svd.singularValues();
  const double cond = sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
  if (!(cond <= kCascadeConditionLimit)) throw CascadeSingular(frequency_hz, cond);

  const Eigen::PartialPivLU<M2> lu_right(feedback_right);
  const Eigen::PartialPivLU<M2> lu_left(feedback_left);

  // w: wave leaving a toward b, v: wave leaving b toward a.
  const M2 w_from_a1 = lu_right.solve(a21);
  const M2 w_from_a2 = lu_right.solve(a22 * b12);
  const M2 v_from_a1 = lu_left.solve(b11 * a21);
  const M2 v_from_a2 = lu_left.solve(b12);

  FloquetSMatrix::Matrix out;
  out.topLeftCorner<2, 2>() = a11 + a12 * v_from_a1;
  out.topRightCorner<2, 2>() = a12 * v_from_a2;
  out.bottomLeftCorner<2, 2>() = b21 * w_from_a1;
  out.bottomRightCorner<2, 2>() = b22 + b21 * w_from_a2;
  return SBlock2Port(out);
}

}  // namespace gyro
