// Lane-generic transcendental pieces shared by the scalar and AVX2 kernels.
//
// Include only from a kernel translation unit, inside an anonymous
// namespace, after the lane helpers for the lane type D are declared:
//   D vsqrt(D), D vround(D) (ties to even), D vfloor(D), D vmul_pow2 helpers,
//   D select(M, D, D), void split_exponent(D x, D& m, D& e),
//   comparison operators returning the mask type M, and operator| on M.
// Internal linkage keeps the AVX2-compiled instantiations out of the
// scalar path.

inline constexpr double kHalfPi = 1.57079632679489661923;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr std::uint64_t kOneBits = 0x3FF0000000000000ull;
inline constexpr std::uint64_t kMantissaMask = 0x000FFFFFFFFFFFFFull;

// Natural log of a positive, finite, normal x.
template <class D>
inline D log_positive(D x) {
  D m, e;
  split_exponent(x, m, e);
  const D f = (m - D(1.0)) / (m + D(1.0));
  const D f2 = f * f;
  D p = D(1.0 / 21.0);
  p = p * f2 + D(1.0 / 19.0);
  p = p * f2 + D(1.0 / 17.0);
  p = p * f2 + D(1.0 / 15.0);
  p = p * f2 + D(1.0 / 13.0);
  p = p * f2 + D(1.0 / 11.0);
  p = p * f2 + D(1.0 / 9.0);
  p = p * f2 + D(1.0 / 7.0);
  p = p * f2 + D(1.0 / 5.0);
  p = p * f2 + D(1.0 / 3.0);
  const D two_f = D(2.0) * f;
  const D log_m = two_f + two_f * f2 * p;
  return e * D(kLn2Hi) + (e * D(kLn2Lo) + log_m);
}

// sin and cos of 2*pi*turns.
template <class D>
inline void sincos_turns(D turns, D& sin_out, D& cos_out) {
  const D t = turns * D(4.0);
  const D k = vround(t);
  const D r = (t - k) * D(kHalfPi);
  const D r2 = r * r;

  D ps = D(-1.0 / 121645100408832000.0);  // -1/19!
  ps = ps * r2 + D(1.0 / 355687428096000.0);
  ps = ps * r2 + D(-1.0 / 1307674368000.0);
  ps = ps * r2 + D(1.0 / 6227020800.0);
  ps = ps * r2 + D(-1.0 / 39916800.0);
  ps = ps * r2 + D(1.0 / 362880.0);
  ps = ps * r2 + D(-1.0 / 5040.0);
  ps = ps * r2 + D(1.0 / 120.0);
  ps = ps * r2 + D(-1.0 / 6.0);
  const D s = r + (r * r2) * ps;

  D pc = D(1.0 / 6402373705728000.0);  // 1/18!
  pc = pc * r2 + D(-1.0 / 20922789888000.0);
  pc = pc * r2 + D(1.0 / 87178291200.0);
  pc = pc * r2 + D(-1.0 / 479001600.0);
  pc = pc * r2 + D(1.0 / 3628800.0);
  pc = pc * r2 + D(-1.0 / 40320.0);
  pc = pc * r2 + D(1.0 / 720.0);
  pc = pc * r2 + D(-1.0 / 24.0);
  pc = pc * r2 + D(1.0 / 2.0);
  const D c = D(1.0) - r2 * pc;

  const D quadrant = k - D(4.0) * vfloor(k * D(0.25));
  const auto q0 = quadrant == D(0.0);
  const auto q1 = quadrant == D(1.0);
  const auto q2 = quadrant == D(2.0);
  sin_out = select(q0, s, select(q1, c, select(q2, -s, -c)));
  cos_out = select(q0, c, select(q1, -s, select(q2, -c, s)));
}

// Box-Muller: u_a, u_b in [0, 1); 1 - u_a keeps the log argument in (0, 1].
template <class D>
inline void box_muller(D u_a, D u_b, D& z0, D& z1) {
  const D radius = vsqrt(D(-2.0) * log_positive(D(1.0) - u_a));
  D s{}, c{};
  sincos_turns(u_b, s, c);
  z0 = radius * c;
  z1 = radius * s;
}

// One rejection candidate of the Best-Fisher von Mises sampler. Writes the
// candidate cosine to `w` and returns the acceptance mask.
template <class D>
inline auto von_mises_candidate(D u, D v, D s, D kappa, D& w) {
  D sz{}, z{};
  sincos_turns(u * D(0.5), sz, z);  // z = cos(pi u)
  w = (D(1.0) + s * z) / (s + z);
  const D y = kappa * (s - w);
  const auto first = (y * (D(2.0) - y) - v) >= D(0.0);
  const auto v_zero = v == D(0.0);
  const D ratio = y / select(v_zero, D(1.0), v);
  const auto second = (log_positive(ratio) + D(1.0) - y) >= D(0.0);
  return first | v_zero | second;
}

// cos/sin of an angle whose cosine is w and whose sign is `negative`.
template <class D, class M>
inline void phasor_from_cosine(D w, M negative, D& c, D& s) {
  const D one(1.0);
  const D clamped = select(w > one, one, select(w < -one, -one, w));
  const D rem = one - clamped * clamped;
  const D mag = vsqrt(select(rem > D(0.0), rem, D(0.0)));
  c = clamped;
  s = select(negative, -mag, mag);
}
