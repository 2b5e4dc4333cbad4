#pragma once

#include <complex>

namespace gyro {

using Complex = std::complex<double>;

// 2x2 Jones block in the linear (x, y) basis. Entry t_ab is the received
// a-polarized field over the incident b-polarized field. Used for both
// transmission and reflection blocks.
struct JonesMatrix {
  Complex xx{};
  Complex xy{};
  Complex yx{};
  Complex yy{};

  static JonesMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static JonesMatrix zero() { return {}; }
  // Real rotation of the polarization plane by `angle` radians.
  static JonesMatrix rotation(double angle);

  JonesMatrix transposed() const { return {xx, yx, xy, yy}; }
  bool is_finite() const;

  friend JonesMatrix operator+(const JonesMatrix& a, const JonesMatrix& b) {
    return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
  }
  friend JonesMatrix operator*(Complex s, const JonesMatrix& a) {
    return {s * a.xx, s * a.xy, s * a.yx, s * a.yy};
  }
  friend bool operator==(const JonesMatrix&, const JonesMatrix&) = default;
};

// Same block in the circular basis; r = RHCP, l = LHCP and t_pq maps
// incident q onto received p.
struct CircularJones {
  Complex rr{};
  Complex rl{};
  Complex lr{};
  Complex ll{};

  friend bool operator==(const CircularJones&, const CircularJones&) = default;
};

}  // namespace gyro
