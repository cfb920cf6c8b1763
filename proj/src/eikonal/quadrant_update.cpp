#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mssp/eikonal/eikonal.hpp"

namespace mssp {

double isotropic_quadrant_update(double w1, double w2, double h, double f) {
  if (!(h > 0.0 && f > 0.0)) throw std::invalid_argument("quadrant update needs h > 0 and f > 0");
  const double c = h / f;
  if (std::isinf(w1) && std::isinf(w2)) return kInf;
  if (std::isinf(w1)) return w2 + c;
  if (std::isinf(w2)) return w1 + c;
  const double diff = w1 - w2;
  if (std::fabs(diff) >= c) return std::min(w1, w2) + c;
  return 0.5 * (w1 + w2 + std::sqrt(2.0 * c * c - diff * diff));
}

}  // namespace mssp
