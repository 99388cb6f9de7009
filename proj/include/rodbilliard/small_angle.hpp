#pragma once

// Cancellation-free evaluation of the trigonometric combinations that appear
// in the impact map when the inter-impact interval is small.

#include <cmath>

namespace rodbilliard {

/// 1 - sin(x)/x. Taylor series for |x| < 1 (truncation below 1e-19), direct beyond.
template <class T>
T one_minus_sinc(T x) {
  const T x2 = x * x;
  if (x2 < T(1)) {
    T term = x2 / T(6);
    T sum = term;
    for (int k = 2; k <= 10; ++k) {
      term *= -x2 / T((2 * k) * (2 * k + 1));
      sum += term;
    }
    return sum;
  }
  return T(1) - std::sin(x) / x;
}

template <class T>
T sinc(T x) {
  return x * x < T(1) ? T(1) - one_minus_sinc(x) : std::sin(x) / x;
}

/// d/dx sinc(x).
template <class T>
T sinc_derivative(T x) {
  const T x2 = x * x;
  if (x2 < T(1)) {
    // sum_{k>=1} (-1)^k 2k x^{2k-1} / (2k+1)!
    T power = x;  // x^{2k-1}
    T fact = T(6);
    T sum = -T(2) * power / fact;
    for (int k = 2; k <= 10; ++k) {
      power *= x2;
      fact *= T((2 * k) * (2 * k + 1));
      const T term = T(2 * k) * power / fact;
      sum += (k % 2 == 0) ? term : -term;
    }
    return sum;
  }
  return (x * std::cos(x) - std::sin(x)) / x2;
}

/// 1 - sinc(x)^2.
template <class T>
T one_minus_sinc_squared(T x) {
  const T d = one_minus_sinc(x);
  return d * (T(2) - d);
}

/// x / sin(x) - 1.
template <class T>
T x_over_sin_minus_one(T x) {
  const T d = one_minus_sinc(x);
  return d / (T(1) - d);
}

/// Height of the arc r(1 + (a+ib)s)e^{-is} above the rod, divided by r*s:
///   G(s) = b cos s - sinc s - a sin s
///        = (b-1) - 2b sin^2(s/2) + (1 - sinc s) - a sin s.
/// `beta` is b - 1, passed separately so callers can supply it exactly.
template <class T>
T normalized_height(T s, T a, T b, T beta) {
  const T h = std::sin(s / T(2));
  return beta - T(2) * b * h * h + one_minus_sinc(s) - a * std::sin(s);
}

template <class T>
T normalized_height_derivative(T s, T a, T b) {
  return -b * std::sin(s) - sinc_derivative(s) - a * std::cos(s);
}

}  // namespace rodbilliard
